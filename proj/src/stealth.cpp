#include "sta/stealth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sta/errors.hpp"

namespace sta {
namespace {

constexpr double kMuFloor = 1e-12;
// Per-step acceptance margin so the final verification cannot lose to roundoff.
constexpr double kAcceptScale = 1.0 - 1e-9;

std::vector<double> residual_of(const Eigen::MatrixXd& z, const Eigen::MatrixXd& z_ref) {
  std::vector<double> r(static_cast<std::size_t>(z.cols()));
  for (Eigen::Index i = 0; i < z.cols(); ++i) {
    r[static_cast<std::size_t>(i)] = (z_ref.col(i) - z.col(i)).norm();
  }
  return r;
}

double sup_of(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s = std::max(s, v);
  return s;
}

AttackSignal scaled(const AttackSignal& d, double mu) {
  return AttackSignal(mu * d.samples);
}

}  // namespace

void StealthConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("stealth: alpha must be positive");
  if (!(bisection_tol > 0.0 && bisection_tol < 0.1)) {
    throw ConfigError("stealth: bisection_tol must lie in (0, 0.1)");
  }
}

std::vector<double> residual(const Trajectory& traj, const Trajectory& ref_traj) {
  if (traj.z.rows() != ref_traj.z.rows() || traj.z.cols() != ref_traj.z.cols()) {
    throw ConfigError("residual: trajectories are not on the same grid");
  }
  return residual_of(traj.z, ref_traj.z);
}

StealthResult stealth_scale(const PlantModel& plant, const FeedbackGain& gain,
                            const AttackSignal& delta_unscaled, const Eigen::VectorXd& x0,
                            const TimeGrid& grid, const StealthConfig& config) {
  config.validate();
  if (!is_stabilizing(plant, gain)) throw ConfigError("stealth_scale: gain is not stabilizing");
  if (delta_unscaled.count() != grid.samples() || delta_unscaled.k() != plant.k()) {
    throw ConfigError("stealth_scale: attack not on the grid");
  }

  const AttackSignal zero = AttackSignal::zero(plant.k(), grid);
  const Trajectory ref = simulate_closed_loop(plant, gain, zero, x0, grid);

  auto finish = [&](std::vector<double> mu, const AttackSignal& delta_final) {
    StealthResult out;
    out.mu = std::move(mu);
    out.delta_final = delta_final;
    const Trajectory final_traj = simulate_closed_loop(plant, gain, delta_final, x0, grid);
    out.residual = residual_of(final_traj.z, ref.z);
    out.sup_residual = sup_of(out.residual);
    if (out.sup_residual > config.alpha) {
      throw InfeasibilityError("stealth_scale: scaled attack still exceeds alpha (sup residual " +
                               std::to_string(out.sup_residual) + ")");
    }
    return out;
  };

  if (config.mode == StealthMode::kConstantMu) {
    auto sup_at = [&](double mu) {
      const Trajectory t = simulate_closed_loop(plant, gain, scaled(delta_unscaled, mu), x0, grid);
      return sup_of(residual_of(t.z, ref.z));
    };

    if (sup_at(1.0) <= config.alpha) {
      return finish({1.0}, delta_unscaled);
    }
    double lo = 0.0, hi = 1.0;
    while (hi - lo > config.bisection_tol) {
      const double mid = 0.5 * (lo + hi);
      (sup_at(mid) <= config.alpha ? lo : hi) = mid;
    }
    if (lo == 0.0) {
      // The feasible scaling sits below the absolute tolerance; keep refining
      // relative to the bracket so μ stays positive and meaningful.
      while (lo == 0.0 || hi - lo > config.bisection_tol * hi) {
        if (hi < kMuFloor) {
          throw InfeasibilityError("stealth_scale: no feasible scaling (even a vanishing attack "
                                   "violates alpha)");
        }
        const double mid = 0.5 * (lo + hi);
        (sup_at(mid) <= config.alpha ? lo : hi) = mid;
      }
    }
    return finish({lo}, scaled(delta_unscaled, lo));
  }

  // Pointwise greedy: one forward pass; sample i is scaled so the residual at
  // t_i stays within alpha given the already-scaled past. Scaling at time t
  // cannot undo residual already committed by earlier samples, so a final
  // verification still gates the result.
  const int N = grid.N;
  const int k = plant.k();
  const int n = plant.n();
  const double dt = grid.dt();
  const Eigen::MatrixXd Acl = plant.A - plant.B * gain.K * plant.L;
  const double target = config.alpha * kAcceptScale;

  Eigen::MatrixXd delta_final(k, N + 1);
  std::vector<double> mu(static_cast<std::size_t>(N + 1), 1.0);
  delta_final.col(0) = delta_unscaled.samples.col(0);

  Eigen::VectorXd xa = x0;
  Eigen::VectorXd k1(n), k2(n), k3(n), k4(n), xs(n), dmid(k), xnext(n);
  auto step_to = [&](const Eigen::VectorXd& d0, const Eigen::VectorXd& d1) {
    dmid.noalias() = 0.5 * (d0 + d1);
    k1.noalias() = Acl * xa;
    k1.noalias() += plant.B * d0;
    xs.noalias() = xa + (0.5 * dt) * k1;
    k2.noalias() = Acl * xs;
    k2.noalias() += plant.B * dmid;
    xs.noalias() = xa + (0.5 * dt) * k2;
    k3.noalias() = Acl * xs;
    k3.noalias() += plant.B * dmid;
    xs.noalias() = xa + dt * k3;
    k4.noalias() = Acl * xs;
    k4.noalias() += plant.B * d1;
    xnext.noalias() = xa + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  for (int i = 0; i < N; ++i) {
    const Eigen::VectorXd d_prev = delta_final.col(i);
    const Eigen::VectorXd d_tilde = delta_unscaled.samples.col(i + 1);
    const auto zref = ref.z.col(i + 1);
    auto resid_at = [&](double m) {
      step_to(d_prev, m * d_tilde);
      return (zref - plant.L * xnext).norm();
    };

    double chosen;
    if (resid_at(1.0) <= target) {
      chosen = 1.0;
    } else if (resid_at(kMuFloor) > target) {
      // Committed residual already too large; take the scale minimizing the
      // step residual (the map μ → z is affine, so this is closed-form).
      step_to(d_prev, Eigen::VectorXd::Zero(k));
      const Eigen::VectorXd a = plant.L * xnext - zref;
      step_to(d_prev, d_tilde);
      const Eigen::VectorXd b = (plant.L * xnext - zref) - a;
      const double bb = b.squaredNorm();
      chosen = bb > 0.0 ? std::clamp(-a.dot(b) / bb, kMuFloor, 1.0) : kMuFloor;
    } else {
      double lo = kMuFloor, hi = 1.0;
      while (hi - lo > config.bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        (resid_at(mid) <= target ? lo : hi) = mid;
      }
      chosen = lo;
    }
    mu[static_cast<std::size_t>(i + 1)] = chosen;
    delta_final.col(i + 1) = chosen * d_tilde;
    step_to(d_prev, delta_final.col(i + 1));
    xa = xnext;
  }

  return finish(std::move(mu), AttackSignal(delta_final));
}

}  // namespace sta
