#pragma once

#include <Eigen/Dense>

#include "sta/cps.hpp"

namespace sta {

/// Quadratic cost weights.
///
/// Defender running cost  x'Qx x + u'Ru u, terminal cost x(T)'Qf x(T);
/// adversary effort rate  γ‖δ‖².
struct CostSpec {
  Eigen::MatrixXd Qx;  // n×n, symmetric PSD
  Eigen::MatrixXd Ru;  // k×k, symmetric PD
  Eigen::MatrixXd Qf;  // n×n, symmetric PSD
  double gamma;        // ≥ 0

  CostSpec(Eigen::MatrixXd Qx_in, Eigen::MatrixXd Ru_in, Eigen::MatrixXd Qf_in, double gamma_in);

  /// Identity weights Qx = I_n, Ru = I_k, Qf = 0, γ = 1.
  static CostSpec quadratic_default(int n, int k);
};

/// x'Qx x + u'Ru u.
double running_cost(const Eigen::VectorXd& x, const Eigen::VectorXd& u, const CostSpec& spec);

/// Trapezoid quadrature of the running cost over [0,T] plus x(T)'Qf x(T).
double sustainability_cost(const Trajectory& traj, const CostSpec& spec, const TimeGrid& grid);

/// Trapezoid quadrature of γ‖δ(t)‖² over [0,T].
double effort_cost(const AttackSignal& attack, double gamma, const TimeGrid& grid);

/// J = sustainability_cost - effort_cost.
double impact_effort_cost(const Trajectory& traj, const AttackSignal& attack, const CostSpec& spec,
                          const TimeGrid& grid);

}  // namespace sta
