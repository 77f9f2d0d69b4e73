#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sta/adjoint.hpp"
#include "sta/costs.hpp"
#include "sta/cps.hpp"

namespace sta {

/// Gradient ascent-descent settings.
struct GadConfig {
  double lambda_K = 1e-3;      // descent learning rate on the gain
  double lambda_delta = 1e-2;  // ascent learning rate on the attack
  double eta = 1e-6;           // stop when |J^{l+1} - J^l| < eta
  int max_iters = 5000;
  double delta_max = 10.0;     // admissible box ‖δ(t)‖_∞ ≤ delta_max
  int backtrack_max = 20;      // halvings of the gain step to stay stabilizing
  bool stale_costate = false;  // ascend with the costate from before the gain step

  void validate() const;
};

struct GadResult {
  FeedbackGain K0;              // final gain
  AttackSignal delta_unscaled;  // final attack before stealth scaling
  std::vector<double> J_history;
  int iterations = 0;
  bool converged = false;
};

/// Alternating saddle-point search: per iteration, a gradient descent step on
/// the gain (backtracked to stay stabilizing), then a gradient ascent step on
/// the attack clipped to the admissible box, then the stopping test on J.
/// By default the costate is re-integrated at the updated gain before the
/// ascent step; stale_costate reuses the pre-step costate instead.
GadResult run_gad(const PlantModel& plant, const CostSpec& spec, const TimeGrid& grid,
                  const Eigen::VectorXd& x0, const GadConfig& config, const FeedbackGain& init_K,
                  const AttackSignal& init_delta);

/// Spot check of the converged attack's pointwise optimality: at sampled grid
/// times, H at the returned attack must beat H at random feasible alternatives
/// up to tol = 1e-4·(1+|H|); where the attack is strictly inside the box, the
/// ascent gradient must be small.
struct MaxPrincipleReport {
  double worst_violation = 0.0;       // max over samples of H(δ') - H(δ₀) - tol
  double worst_interior_grad = 0.0;   // max ‖∇_δH‖ over strictly interior times
  int times_checked = 0;
  int perturbations_per_time = 0;
  bool hamiltonian_pass = false;      // worst_violation ≤ 0
  bool interior_pass = false;         // worst_interior_grad ≤ 1e-3
};

MaxPrincipleReport verify_maximum_principle(const GadResult& result, const PlantModel& plant,
                                            const CostSpec& spec, const TimeGrid& grid,
                                            const Eigen::VectorXd& x0, int n_times,
                                            int n_perturbations, double delta_max,
                                            std::uint64_t seed = 0);

}  // namespace sta
