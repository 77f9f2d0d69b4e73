#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sta/cps.hpp"

namespace sta {

enum class StealthMode { kConstantMu, kPointwiseGreedy };

struct StealthConfig {
  double alpha;                 // detector threshold on r = ‖z_ref - z‖₂
  StealthMode mode = StealthMode::kConstantMu;
  double bisection_tol = 1e-4;  // bracket width at which the μ search stops

  void validate() const;
};

struct StealthResult {
  std::vector<double> mu;       // one entry (constant mode) or N+1 entries
  AttackSignal delta_final;     // μ·δ̃, guaranteed α-stealthy
  std::vector<double> residual; // r(t_i) on the final simulation
  double sup_residual = 0.0;
};

/// r(t_i) = ‖z_ref(t_i) - z(t_i)‖₂ sample by sample.
std::vector<double> residual(const Trajectory& traj, const Trajectory& ref_traj);

/// Scales the attack down until the detector residual stays at or below α.
/// The reference output is the attack-free closed loop under the same gain and
/// initial state, so δ ≡ 0 always yields zero residual. Constant mode searches
/// one global μ ∈ (0,1] by bisection (with a closed-form-free contract: the
/// returned μ is feasible and μ + bisection_tol is not, unless μ = 1).
/// Pointwise mode scales each sample greedily during one forward pass.
StealthResult stealth_scale(const PlantModel& plant, const FeedbackGain& gain,
                            const AttackSignal& delta_unscaled, const Eigen::VectorXd& x0,
                            const TimeGrid& grid, const StealthConfig& config);

}  // namespace sta
