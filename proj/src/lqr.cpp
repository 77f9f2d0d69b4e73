#include "sta/lqr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "sta/errors.hpp"

namespace sta {
namespace {

constexpr int kMaxNewtonIters = 200;
constexpr double kResidualTarget = 1e-10;
constexpr double kResidualAccept = 1e-8;

double spectral_abscissa(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> eig(M, /*computeEigenvectors=*/false);
  return eig.eigenvalues().real().maxCoeff();
}

bool hurwitz(const Eigen::MatrixXd& M) { return spectral_abscissa(M) < -1e-9; }

Eigen::MatrixXd riccati_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                 const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R,
                                 const Eigen::MatrixXd& P) {
  const Eigen::MatrixXd S = B * R.ldlt().solve(B.transpose());
  return A.transpose() * P + P * A - P * S * P + Q;
}

// Stabilizing start for the Newton iteration.
Eigen::MatrixXd initial_stabilizing_gain(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(A.rows());
  const int k = static_cast<int>(B.cols());

  if (hurwitz(A)) return Eigen::MatrixXd::Zero(k, n);

  // Scalar shift K = c B'.
  for (double c = 1.0; c <= 1024.0; c *= 2.0) {
    const Eigen::MatrixXd K = c * B.transpose();
    if (hurwitz(A - B * K)) return K;
  }

  // Bass: with β above the spectral abscissa, (A+βI)W + W(A+βI)' = 2BB'
  // has a PD solution for controllable (A,B), and K = B'W⁻¹ stabilizes.
  const double beta = 1.0 + std::max(spectral_abscissa(A), 0.0) + A.norm();
  const Eigen::MatrixXd Abar = A + beta * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd W =
      solve_lyapunov(-Abar.transpose(), 2.0 * B * B.transpose());
  if (W.allFinite()) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(W);
    if (lu.isInvertible()) {
      const Eigen::MatrixXd K = B.transpose() * lu.inverse();
      if (hurwitz(A - B * K)) return K;
    }
  }

  // Seeded random search, growing scale.
  std::mt19937_64 rng(0x5741u);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double scale = std::pow(2.0, trial / 250);
    Eigen::MatrixXd K(k, n);
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < n; ++c) K(r, c) = scale * dist(rng);
    if (hurwitz(A - B * K)) return K;
  }
  throw InfeasibilityError("solve_care: could not find a stabilizing initial gain");
}

}  // namespace

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& Ac, const Eigen::MatrixXd& W) {
  const int n = static_cast<int>(Ac.rows());
  // vec(Ac' P) = (I ⊗ Ac') vec(P), vec(P Ac) = (Ac' ⊗ I) vec(P).
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n * n, n * n);
  const Eigen::MatrixXd At = Ac.transpose();
  for (int col = 0; col < n; ++col) {
    M.block(col * n, col * n, n, n) += At;
  }
  for (int bc = 0; bc < n; ++bc) {
    for (int br = 0; br < n; ++br) {
      M.block(br * n, bc * n, n, n).diagonal().array() += At(br, bc);
    }
  }
  Eigen::VectorXd w(Eigen::Map<const Eigen::VectorXd>(W.data(), n * n));
  Eigen::VectorXd p = M.partialPivLu().solve(-w);
  Eigen::MatrixXd P(Eigen::Map<const Eigen::MatrixXd>(p.data(), n, n));
  return 0.5 * (P + P.transpose());
}

RiccatiSolution solve_care(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::MatrixXd& Q, const Eigen::MatrixXd& R) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n || B.rows() != n) throw ConfigError("solve_care: A/B shape mismatch");
  if (Q.rows() != n || Q.cols() != n) throw ConfigError("solve_care: Q must be n x n");
  if (R.rows() != B.cols() || R.cols() != B.cols()) throw ConfigError("solve_care: R must be k x k");

  Eigen::LDLT<Eigen::MatrixXd> Rf(R);
  if (Rf.info() != Eigen::Success || !Rf.isPositive() ||
      Rf.vectorD().minCoeff() <= 0.0) {
    throw ConfigError("solve_care: R must be positive definite");
  }

  Eigen::MatrixXd K = initial_stabilizing_gain(A, B);
  Eigen::MatrixXd P;
  double res = std::numeric_limits<double>::infinity();
  double prev_res = res;

  for (int it = 0; it < kMaxNewtonIters; ++it) {
    const Eigen::MatrixXd Ac = A - B * K;
    const Eigen::MatrixXd W = Q + K.transpose() * R * K;
    P = solve_lyapunov(Ac, W);
    K = Rf.solve(B.transpose() * P);
    res = riccati_residual(A, B, Q, R, P).norm();
    if (res <= kResidualTarget) break;
    if (it > 10 && res >= 0.5 * prev_res) break;  // stagnation
    prev_res = res;
  }

  if (!(res <= kResidualAccept)) {
    throw ConvergenceError("solve_care: Newton iteration stalled at residual " +
                           std::to_string(res));
  }
  if (!hurwitz(A - B * K)) {
    throw InfeasibilityError("solve_care: converged P does not stabilize the loop");
  }
  return RiccatiSolution{P, res};
}

FeedbackGain lqr_gain(const RiccatiSolution& sol, const Eigen::MatrixXd& B,
                      const Eigen::MatrixXd& R) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
  if (!lu.isInvertible()) throw ConfigError("lqr_gain: R is singular");
  return FeedbackGain(lu.solve(B.transpose() * sol.P));
}

}  // namespace sta
