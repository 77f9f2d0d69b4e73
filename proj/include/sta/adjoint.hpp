#pragma once

#include <Eigen/Dense>

#include "sta/costs.hpp"
#include "sta/cps.hpp"

namespace sta {

/// Costate samples; column i is Ω(t_i) ∈ ℝⁿ. Terminal sample is 2·Qf·x(T).
struct CostateTrajectory {
  Eigen::MatrixXd omega;  // n × (N+1)
};

/// Time-integrated gradient of J with respect to the gain entries, k×j.
struct GainGradient {
  Eigen::MatrixXd G;
};

/// Pointwise ∂H/∂δ samples; column i is ∇_δ H(t_i) ∈ ℝᵏ. The gradient of the
/// discretized J with respect to the sample δ(t_i) is the trapezoid weight
/// w_i times column i.
struct AttackGradient {
  Eigen::MatrixXd samples;  // k × (N+1)
};

/// H = Ω'[(A - BKL)x + Bδ] + x'Qx x + u'Ru u - γ δ'δ  with u = -KLx + δ.
double hamiltonian(const Eigen::VectorXd& x, const Eigen::VectorXd& omega,
                   const Eigen::VectorXd& delta, const PlantModel& plant,
                   const FeedbackGain& gain, const CostSpec& spec);

/// Backward RK4 solve of
///   Ω̇ = -[(A - BKL)'Ω + 2 Qx x - 2 (KL)' Ru u],   Ω(T) = 2 Qf x(T).
/// Stage values of x use cubic Hermite interpolation between samples (slopes
/// reconstructed from the closed-loop dynamics); δ is piecewise linear and
/// u = -KL·x + δ is formed from the interpolants.
CostateTrajectory integrate_costate(const Trajectory& traj, const PlantModel& plant,
                                    const FeedbackGain& gain, const CostSpec& spec,
                                    const TimeGrid& grid);

/// Trapezoid quadrature over [0,T] of ∇_K H(t) = -(B'Ω + 2 Ru u)(L x)'.
GainGradient grad_gain(const Trajectory& traj, const CostateTrajectory& costate,
                       const PlantModel& plant, const FeedbackGain& gain, const CostSpec& spec,
                       const TimeGrid& grid);

/// Samples of ∇_δ H(t_i) = B'Ω(t_i) + 2 Ru u(t_i) - 2 γ δ(t_i).
AttackGradient grad_attack(const Trajectory& traj, const CostateTrajectory& costate,
                           const AttackSignal& attack, const PlantModel& plant,
                           const FeedbackGain& gain, const CostSpec& spec, const TimeGrid& grid);

}  // namespace sta
