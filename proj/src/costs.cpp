#include "sta/costs.hpp"

#include <cmath>
#include <string>

#include "sta/errors.hpp"

namespace sta {
namespace {

constexpr double kPsdTol = -1e-10;
constexpr double kPdTol = 1e-12;
constexpr double kSymTol = 1e-10;

void check_symmetric(const Eigen::MatrixXd& M, const std::string& name) {
  if (M.rows() != M.cols()) throw ConfigError("cost: " + name + " must be square");
  if (!M.allFinite()) throw ConfigError("cost: " + name + " must be finite");
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > kSymTol) {
    throw ConfigError("cost: " + name + " must be symmetric");
  }
}

double min_sym_eigenvalue(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace

CostSpec::CostSpec(Eigen::MatrixXd Qx_in, Eigen::MatrixXd Ru_in, Eigen::MatrixXd Qf_in,
                   double gamma_in)
    : Qx(std::move(Qx_in)), Ru(std::move(Ru_in)), Qf(std::move(Qf_in)), gamma(gamma_in) {
  check_symmetric(Qx, "Qx");
  check_symmetric(Ru, "Ru");
  check_symmetric(Qf, "Qf");
  if (min_sym_eigenvalue(Qx) < kPsdTol) throw ConfigError("cost: Qx must be positive semidefinite");
  if (min_sym_eigenvalue(Qf) < kPsdTol) throw ConfigError("cost: Qf must be positive semidefinite");
  if (min_sym_eigenvalue(Ru) <= kPdTol) throw ConfigError("cost: Ru must be positive definite");
  if (!(std::isfinite(gamma) && gamma >= 0.0)) throw ConfigError("cost: gamma must be >= 0");
}

CostSpec CostSpec::quadratic_default(int n, int k) {
  return CostSpec(Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Identity(k, k),
                  Eigen::MatrixXd::Zero(n, n), 1.0);
}

double running_cost(const Eigen::VectorXd& x, const Eigen::VectorXd& u, const CostSpec& spec) {
  if (x.size() != spec.Qx.rows()) throw ConfigError("running_cost: x dimension mismatch");
  if (u.size() != spec.Ru.rows()) throw ConfigError("running_cost: u dimension mismatch");
  return x.dot(spec.Qx * x) + u.dot(spec.Ru * u);
}

double sustainability_cost(const Trajectory& traj, const CostSpec& spec, const TimeGrid& grid) {
  const int N = grid.N;
  if (traj.x.cols() != N + 1 || traj.u.cols() != N + 1) {
    throw ConfigError("sustainability_cost: trajectory not on grid");
  }
  if (traj.x.rows() != spec.Qx.rows() || traj.u.rows() != spec.Ru.rows()) {
    throw ConfigError("sustainability_cost: dimension mismatch");
  }
  const double dt = grid.dt();
  double acc = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double w = (i == 0 || i == N) ? 0.5 * dt : dt;
    acc += w * (traj.x.col(i).dot(spec.Qx * traj.x.col(i)) +
                traj.u.col(i).dot(spec.Ru * traj.u.col(i)));
  }
  acc += traj.x.col(N).dot(spec.Qf * traj.x.col(N));
  return acc;
}

double effort_cost(const AttackSignal& attack, double gamma, const TimeGrid& grid) {
  const int N = grid.N;
  if (attack.count() != N + 1) throw ConfigError("effort_cost: attack not on grid");
  const double dt = grid.dt();
  double acc = 0.0;
  for (int i = 0; i <= N; ++i) {
    const double w = (i == 0 || i == N) ? 0.5 * dt : dt;
    acc += w * attack.samples.col(i).squaredNorm();
  }
  return gamma * acc;
}

double impact_effort_cost(const Trajectory& traj, const AttackSignal& attack, const CostSpec& spec,
                          const TimeGrid& grid) {
  return sustainability_cost(traj, spec, grid) - effort_cost(attack, spec.gamma, grid);
}

}  // namespace sta
