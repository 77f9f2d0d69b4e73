#pragma once

#include <Eigen/Dense>

namespace sta {

/// Linear plant  ẋ = A x + B u  with measured output  z = L x.
/// Dimensions: A is n×n, B is n×k, L is j×n.
struct PlantModel {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd L;

  PlantModel(Eigen::MatrixXd A_in, Eigen::MatrixXd B_in, Eigen::MatrixXd L_in);

  int n() const { return static_cast<int>(A.rows()); }
  int k() const { return static_cast<int>(B.cols()); }
  int j() const { return static_cast<int>(L.rows()); }
};

/// Static output-feedback gain, k×j; the loop applies  u = -K z + δ.
struct FeedbackGain {
  Eigen::MatrixXd K;

  explicit FeedbackGain(Eigen::MatrixXd K_in);
};

/// Uniform grid t_i = i·dt over [0, T] with dt = T/N.
struct TimeGrid {
  double T;
  int N;

  TimeGrid(double T_in, int N_in);

  double dt() const { return T / N; }
  double time(int i) const { return T * static_cast<double>(i) / N; }
  int samples() const { return N + 1; }
};

/// Attack signal sampled on a grid; column i is δ(t_i) ∈ ℝᵏ.
/// Between samples the signal is piecewise linear.
struct AttackSignal {
  Eigen::MatrixXd samples;  // k × (N+1)

  AttackSignal() = default;
  explicit AttackSignal(Eigen::MatrixXd samples_in);
  static AttackSignal zero(int k, const TimeGrid& grid);
  static AttackSignal constant(const Eigen::VectorXd& value, const TimeGrid& grid);

  int k() const { return static_cast<int>(samples.rows()); }
  int count() const { return static_cast<int>(samples.cols()); }
  double max_abs() const { return samples.size() == 0 ? 0.0 : samples.cwiseAbs().maxCoeff(); }
};

/// Closed-loop trajectory on a grid. Columns are samples.
/// Invariants: z = L·x and u = -K·L·x + δ hold column-for-column.
struct Trajectory {
  Eigen::MatrixXd x;  // n × (N+1)
  Eigen::MatrixXd u;  // k × (N+1), applied plant input (-K L x + δ)
  Eigen::MatrixXd z;  // j × (N+1)
};

/// Closed-loop state matrix A - B·K·L.
Eigen::MatrixXd closed_loop_matrix(const PlantModel& plant, const FeedbackGain& gain);

/// True iff every eigenvalue of A - B·K·L has real part < -1e-9.
bool is_stabilizing(const PlantModel& plant, const FeedbackGain& gain);

/// Integrates ẋ = (A - B K L) x + B δ with classical fixed-step RK4.
/// δ is evaluated at stage midpoints by linear interpolation between samples.
/// Throws DivergenceError if the state leaves [-1e12, 1e12] or turns non-finite.
Trajectory simulate_closed_loop(const PlantModel& plant, const FeedbackGain& gain,
                                const AttackSignal& attack, const Eigen::VectorXd& x0,
                                const TimeGrid& grid);

}  // namespace sta
