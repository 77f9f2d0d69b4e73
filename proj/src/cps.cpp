#include "sta/cps.hpp"

#include <cmath>
#include <string>

#include "sta/errors.hpp"

namespace sta {
namespace {

constexpr double kDivergenceBound = 1e12;
constexpr double kStabilityMargin = -1e-9;

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

PlantModel::PlantModel(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in, Eigen::MatrixXd L_in)
    : A(std::move(A_in)), B(std::move(B_in)), L(std::move(L_in)) {
  require(A.rows() >= 1 && A.rows() == A.cols(), "plant: A must be square with n >= 1");
  require(B.rows() == A.rows() && B.cols() >= 1, "plant: B must be n x k with k >= 1");
  require(L.cols() == A.rows() && L.rows() >= 1, "plant: L must be j x n with j >= 1");
  require(A.allFinite() && B.allFinite() && L.allFinite(), "plant: matrices must be finite");
}

FeedbackGain::FeedbackGain(Eigen::MatrixXd K_in) : K(std::move(K_in)) {
  require(K.allFinite(), "gain: entries must be finite");
}

TimeGrid::TimeGrid(double T_in, int N_in) : T(T_in), N(N_in) {
  require(std::isfinite(T) && T > 0.0, "grid: T must be positive");
  require(N >= 2, "grid: N must be at least 2");
}

AttackSignal::AttackSignal(Eigen::MatrixXd samples_in) : samples(std::move(samples_in)) {
  require(samples.allFinite(), "attack: samples must be finite");
}

AttackSignal AttackSignal::zero(int k, const TimeGrid& grid) {
  return AttackSignal(Eigen::MatrixXd::Zero(k, grid.samples()));
}

AttackSignal AttackSignal::constant(const Eigen::VectorXd& value, const TimeGrid& grid) {
  return AttackSignal(value.replicate(1, grid.samples()));
}

Eigen::MatrixXd closed_loop_matrix(const PlantModel& plant, const FeedbackGain& gain) {
  require(gain.K.rows() == plant.k() && gain.K.cols() == plant.j(),
          "gain: K must be k x j for this plant");
  return plant.A - plant.B * gain.K * plant.L;
}

bool is_stabilizing(const PlantModel& plant, const FeedbackGain& gain) {
  const Eigen::MatrixXd Acl = closed_loop_matrix(plant, gain);
  const Eigen::EigenSolver<Eigen::MatrixXd> eig(Acl, /*computeEigenvectors=*/false);
  return eig.eigenvalues().real().maxCoeff() < kStabilityMargin;
}

Trajectory simulate_closed_loop(const PlantModel& plant, const FeedbackGain& gain,
                                const AttackSignal& attack, const Eigen::VectorXd& x0,
                                const TimeGrid& grid) {
  const int n = plant.n();
  const int k = plant.k();
  require(x0.size() == n, "simulate: x0 must have length n");
  require(x0.allFinite(), "simulate: x0 must be finite");
  require(attack.k() == k, "simulate: attack dimension must equal k");
  require(attack.count() == grid.samples(), "simulate: attack must be sampled on the grid");

  const Eigen::MatrixXd Acl = closed_loop_matrix(plant, gain);
  const double dt = grid.dt();
  const int N = grid.N;

  Trajectory traj;
  traj.x.resize(n, N + 1);
  traj.x.col(0) = x0;

  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), xs(n), dmid(k);
  for (int i = 0; i < N; ++i) {
    const auto xi = traj.x.col(i);
    const auto d0 = attack.samples.col(i);
    const auto d1 = attack.samples.col(i + 1);
    dmid.noalias() = 0.5 * (d0 + d1);

    k1.noalias() = Acl * xi;
    k1.noalias() += plant.B * d0;
    xs.noalias() = xi + (0.5 * dt) * k1;
    k2.noalias() = Acl * xs;
    k2.noalias() += plant.B * dmid;
    xs.noalias() = xi + (0.5 * dt) * k2;
    k3.noalias() = Acl * xs;
    k3.noalias() += plant.B * dmid;
    xs.noalias() = xi + dt * k3;
    k4.noalias() = Acl * xs;
    k4.noalias() += plant.B * d1;

    traj.x.col(i + 1) = xi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double amax = traj.x.col(i + 1).cwiseAbs().maxCoeff();
    if (!std::isfinite(amax) || amax > kDivergenceBound) {
      throw DivergenceError("simulate: state diverged at grid index " + std::to_string(i + 1),
                            i + 1);
    }
  }

  traj.z.noalias() = plant.L * traj.x;
  traj.u.noalias() = -(gain.K * traj.z);
  traj.u += attack.samples;
  return traj;
}

}  // namespace sta
