#include "sta/adjoint.hpp"

#include <cmath>
#include <string>

#include "sta/errors.hpp"

namespace sta {
namespace {

constexpr double kDivergenceBound = 1e12;

void check_on_grid(const Trajectory& traj, const PlantModel& plant, const TimeGrid& grid,
                   const char* who) {
  if (traj.x.rows() != plant.n() || traj.u.rows() != plant.k()) {
    throw ConfigError(std::string(who) + ": trajectory dimensions do not match plant");
  }
  if (traj.x.cols() != grid.samples() || traj.u.cols() != grid.samples()) {
    throw ConfigError(std::string(who) + ": trajectory not sampled on the grid");
  }
}

}  // namespace

double hamiltonian(const Eigen::VectorXd& x, const Eigen::VectorXd& omega,
                   const Eigen::VectorXd& delta, const PlantModel& plant,
                   const FeedbackGain& gain, const CostSpec& spec) {
  if (x.size() != plant.n() || omega.size() != plant.n() || delta.size() != plant.k()) {
    throw ConfigError("hamiltonian: dimension mismatch");
  }
  const Eigen::VectorXd u = -(gain.K * (plant.L * x)) + delta;
  const Eigen::VectorXd xdot = plant.A * x + plant.B * u;
  return omega.dot(xdot) + x.dot(spec.Qx * x) + u.dot(spec.Ru * u) -
         spec.gamma * delta.squaredNorm();
}

CostateTrajectory integrate_costate(const Trajectory& traj, const PlantModel& plant,
                                    const FeedbackGain& gain, const CostSpec& spec,
                                    const TimeGrid& grid) {
  check_on_grid(traj, plant, grid, "integrate_costate");
  const int n = plant.n();
  const int N = grid.N;
  const double dt = grid.dt();

  const Eigen::MatrixXd KL = gain.K * plant.L;
  const Eigen::MatrixXd Acl = plant.A - plant.B * KL;
  const Eigen::MatrixXd AclT = Acl.transpose();
  const Eigen::MatrixXd Qx2 = 2.0 * spec.Qx;
  const Eigen::MatrixXd KLtRu2 = 2.0 * KL.transpose() * spec.Ru;

  // Node slopes ẋ = A x + B u for the Hermite stage values.
  Eigen::MatrixXd xdot = plant.A * traj.x;
  xdot.noalias() += plant.B * traj.u;
  // Attack samples recovered from the trajectory identity u = -KL x + δ.
  Eigen::MatrixXd delta = traj.u;
  delta.noalias() += KL * traj.x;

  CostateTrajectory out;
  out.omega.resize(n, N + 1);
  out.omega.col(N) = 2.0 * spec.Qf * traj.x.col(N);

  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), om(n), xmid(n), umid(traj.u.rows());
  auto rhs = [&](const Eigen::VectorXd& w, const auto& xx, const auto& uu, Eigen::VectorXd& dst) {
    dst.noalias() = -(AclT * w);
    dst.noalias() -= Qx2 * xx;
    dst.noalias() += KLtRu2 * uu;
  };

  for (int i = N; i > 0; --i) {
    const auto x1 = traj.x.col(i);
    const auto x0 = traj.x.col(i - 1);
    const auto u1 = traj.u.col(i);
    const auto u0 = traj.u.col(i - 1);
    // Hermite midpoint of x over [t_{i-1}, t_i]; δ is piecewise linear, so its
    // midpoint is the sample average and u_mid follows from u = -KL x + δ.
    xmid.noalias() = 0.5 * (x0 + x1);
    xmid.noalias() += (dt / 8.0) * (xdot.col(i - 1) - xdot.col(i));
    umid.noalias() = 0.5 * (delta.col(i - 1) + delta.col(i));
    umid.noalias() -= KL * xmid;

    const auto omi = out.omega.col(i);
    rhs(omi, x1, u1, k1);
    om.noalias() = omi - (0.5 * dt) * k1;
    rhs(om, xmid, umid, k2);
    om.noalias() = omi - (0.5 * dt) * k2;
    rhs(om, xmid, umid, k3);
    om.noalias() = omi - dt * k3;
    rhs(om, x0, u0, k4);
    out.omega.col(i - 1) = omi - (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double amax = out.omega.col(i - 1).cwiseAbs().maxCoeff();
    if (!std::isfinite(amax) || amax > kDivergenceBound) {
      throw DivergenceError(
          "integrate_costate: costate diverged at grid index " + std::to_string(i - 1), i - 1);
    }
  }
  return out;
}

GainGradient grad_gain(const Trajectory& traj, const CostateTrajectory& costate,
                       const PlantModel& plant, const FeedbackGain& gain, const CostSpec& spec,
                       const TimeGrid& grid) {
  check_on_grid(traj, plant, grid, "grad_gain");
  if (costate.omega.cols() != grid.samples() || costate.omega.rows() != plant.n()) {
    throw ConfigError("grad_gain: costate not aligned with grid");
  }
  const int N = grid.N;
  const double dt = grid.dt();

  // -(B'Ω + 2 Ru u)(Lx)' accumulated with trapezoid weights.
  Eigen::MatrixXd lead = plant.B.transpose() * costate.omega;  // k × (N+1)
  lead.noalias() += 2.0 * spec.Ru * traj.u;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(plant.k(), plant.j());
  for (int i = 0; i <= N; ++i) {
    const double w = (i == 0 || i == N) ? 0.5 * dt : dt;
    G.noalias() -= w * lead.col(i) * traj.z.col(i).transpose();
  }
  return GainGradient{std::move(G)};
}

AttackGradient grad_attack(const Trajectory& traj, const CostateTrajectory& costate,
                           const AttackSignal& attack, const PlantModel& plant,
                           const FeedbackGain& gain, const CostSpec& spec, const TimeGrid& grid) {
  (void)gain;
  check_on_grid(traj, plant, grid, "grad_attack");
  if (costate.omega.cols() != grid.samples()) {
    throw ConfigError("grad_attack: costate not aligned with grid");
  }
  if (attack.count() != grid.samples() || attack.k() != plant.k()) {
    throw ConfigError("grad_attack: attack not aligned with grid");
  }
  Eigen::MatrixXd g = plant.B.transpose() * costate.omega;
  g.noalias() += 2.0 * spec.Ru * traj.u;
  g.noalias() -= 2.0 * spec.gamma * attack.samples;
  return AttackGradient{std::move(g)};
}

}  // namespace sta
