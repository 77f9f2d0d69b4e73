#include "sta/gad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "sta/errors.hpp"

namespace sta {

void GadConfig::validate() const {
  if (!(lambda_K > 0.0) || !std::isfinite(lambda_K)) {
    throw ConfigError("gad: lambda_K must be positive");
  }
  if (!(lambda_delta >= 0.0) || !std::isfinite(lambda_delta)) {
    throw ConfigError("gad: lambda_delta must be nonnegative");
  }
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("gad: eta must be positive");
  if (max_iters < 1) throw ConfigError("gad: max_iters must be positive");
  if (!(delta_max > 0.0)) throw ConfigError("gad: delta_max must be positive");
  if (backtrack_max < 0) throw ConfigError("gad: backtrack_max must be nonnegative");
}

GadResult run_gad(const PlantModel& plant, const CostSpec& spec, const TimeGrid& grid,
                  const Eigen::VectorXd& x0, const GadConfig& config, const FeedbackGain& init_K,
                  const AttackSignal& init_delta) {
  config.validate();
  if (!is_stabilizing(plant, init_K)) {
    throw ConfigError("run_gad: initial gain is not stabilizing");
  }
  if (init_delta.max_abs() > config.delta_max) {
    throw ConfigError("run_gad: initial attack leaves the admissible box");
  }

  FeedbackGain K = init_K;
  AttackSignal delta = init_delta;

  Trajectory traj;
  try {
    traj = simulate_closed_loop(plant, K, delta, x0, grid);
  } catch (const DivergenceError& e) {
    throw DivergenceError(std::string("run_gad: initial simulation diverged: ") + e.what(),
                          e.time_index());
  }

  GadResult result{K, delta, {}, 0, false};
  double J = impact_effort_cost(traj, delta, spec, grid);
  result.J_history.push_back(J);

  for (int l = 0; l < config.max_iters; ++l) {
    // Descent on the gain, halving the step until the loop stays stabilizing.
    const CostateTrajectory costate = integrate_costate(traj, plant, K, spec, grid);
    const GainGradient gk = grad_gain(traj, costate, plant, K, spec, grid);
    double step = config.lambda_K;
    bool stepped = false;
    FeedbackGain K_next = K;
    for (int bt = 0; bt <= config.backtrack_max; ++bt) {
      K_next.K = K.K - step * gk.G;
      if (is_stabilizing(plant, K_next)) {
        stepped = true;
        break;
      }
      step *= 0.5;
    }
    if (!stepped) {
      throw StepFailureError(
          "run_gad: gain step not stabilizing after " + std::to_string(config.backtrack_max) +
              " halvings at iteration " + std::to_string(l + 1),
          l + 1);
    }

    // Ascent on the attack at the updated gain, clipped to the box.
    AttackGradient gd;
    if (config.stale_costate) {
      // Algorithm-listing fidelity: old state and costate, new gain inside u.
      Trajectory stale = traj;
      stale.u = -(K_next.K * stale.z);
      stale.u += delta.samples;
      gd = grad_attack(stale, costate, delta, plant, K_next, spec, grid);
    } else {
      const Trajectory mid = simulate_closed_loop(plant, K_next, delta, x0, grid);
      const CostateTrajectory fresh = integrate_costate(mid, plant, K_next, spec, grid);
      gd = grad_attack(mid, fresh, delta, plant, K_next, spec, grid);
    }
    K = K_next;
    delta.samples += config.lambda_delta * gd.samples;
    delta.samples = delta.samples.cwiseMax(-config.delta_max).cwiseMin(config.delta_max);

    try {
      traj = simulate_closed_loop(plant, K, delta, x0, grid);
    } catch (const DivergenceError& e) {
      throw DivergenceError(
          std::string("run_gad: simulation diverged at iteration ") + std::to_string(l + 1) +
              ": " + e.what(),
          e.time_index());
    }
    const double J_next = impact_effort_cost(traj, delta, spec, grid);
    result.J_history.push_back(J_next);
    result.iterations = l + 1;
    if (std::abs(J_next - J) < config.eta) {
      result.converged = true;
      J = J_next;
      break;
    }
    J = J_next;
  }

  result.K0 = K;
  result.delta_unscaled = delta;
  return result;
}

MaxPrincipleReport verify_maximum_principle(const GadResult& result, const PlantModel& plant,
                                            const CostSpec& spec, const TimeGrid& grid,
                                            const Eigen::VectorXd& x0, int n_times,
                                            int n_perturbations, double delta_max,
                                            std::uint64_t seed) {
  if (n_times < 1 || n_perturbations < 1) {
    throw ConfigError("verify_maximum_principle: sample counts must be positive");
  }
  if (!(delta_max > 0.0)) throw ConfigError("verify_maximum_principle: delta_max must be positive");

  const Trajectory traj = simulate_closed_loop(plant, result.K0, result.delta_unscaled, x0, grid);
  const CostateTrajectory costate = integrate_costate(traj, plant, result.K0, spec, grid);
  const AttackGradient gd =
      grad_attack(traj, costate, result.delta_unscaled, plant, result.K0, spec, grid);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_time(0, grid.N);
  std::uniform_real_distribution<double> pick_delta(-delta_max, delta_max);

  MaxPrincipleReport report;
  report.times_checked = n_times;
  report.perturbations_per_time = n_perturbations;
  report.worst_violation = -std::numeric_limits<double>::infinity();

  Eigen::VectorXd candidate(plant.k());
  for (int s = 0; s < n_times; ++s) {
    const int i = pick_time(rng);
    const Eigen::VectorXd x = traj.x.col(i);
    const Eigen::VectorXd om = costate.omega.col(i);
    const Eigen::VectorXd d0 = result.delta_unscaled.samples.col(i);
    const double H0 = hamiltonian(x, om, d0, plant, result.K0, spec);
    const double tol = 1e-4 * (1.0 + std::abs(H0));
    for (int p = 0; p < n_perturbations; ++p) {
      for (int c = 0; c < plant.k(); ++c) candidate(c) = pick_delta(rng);
      const double H1 = hamiltonian(x, om, candidate, plant, result.K0, spec);
      report.worst_violation = std::max(report.worst_violation, H1 - H0 - tol);
    }
    // Interior stationarity: wherever δ is strictly inside the box the ascent
    // gradient should have vanished.
    if (d0.cwiseAbs().maxCoeff() < delta_max * (1.0 - 1e-9)) {
      report.worst_interior_grad = std::max(report.worst_interior_grad, gd.samples.col(i).norm());
    }
  }
  report.hamiltonian_pass = report.worst_violation <= 0.0;
  report.interior_pass = report.worst_interior_grad <= 1e-3;
  return report;
}

}  // namespace sta
