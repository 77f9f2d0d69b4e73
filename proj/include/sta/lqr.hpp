#pragma once

#include <Eigen/Dense>

#include "sta/cps.hpp"

namespace sta {

/// Stabilizing solution of A'P + PA - P B R⁻¹ B' P + Q = 0.
struct RiccatiSolution {
  Eigen::MatrixXd P;
  double residual_norm;  // Frobenius norm of the Riccati residual
};

/// Solves the continuous-time algebraic Riccati equation by Newton–Kleinman
/// iteration. Each Newton step solves a Lyapunov equation by vectorization
/// (dense n²×n² solve), which is fine at desk scale.
///
/// The iteration needs a stabilizing start. Tried in order: K = 0 when A is
/// already Hurwitz; a scalar-shift gain c·B'; Bass' stabilization (solve
/// (A+βI)W + W(A+βI)' = 2BB' with β above the spectral abscissa, K = B'W⁻¹);
/// finally a seeded random gain search.
///
/// Throws InfeasibilityError when no stabilizing gain can be found and
/// ConvergenceError when the residual does not reach tolerance.
RiccatiSolution solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R);

/// K = R⁻¹ B' P.
FeedbackGain lqr_gain(const RiccatiSolution& sol, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& R);

/// Solves Ac' P + P Ac = -W for symmetric W (vectorized dense solve).
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& W);

}  // namespace sta
