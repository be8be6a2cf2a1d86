#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpnet/linalg.hpp"

namespace fpnet {

/// Linear-threshold recurrent network: tau * dx/dt + x = W [x - b]^+ + i.
class RecurrentNet {
 public:
  /// b = 0, tau = 1.
  explicit RecurrentNet(Matrix w);
  RecurrentNet(Matrix w, Vector b, double tau);

  std::size_t size() const noexcept { return w_.rows(); }
  const Matrix& weights() const noexcept { return w_; }
  const Vector& bias() const noexcept { return b_; }
  double tau() const noexcept { return tau_; }

  bool operator==(const RecurrentNet&) const = default;

 private:
  Matrix w_;
  Vector b_;
  double tau_;
};

struct FixedPointConfig {
  double delta = 1e-4;       // convergence tolerance on the lagged state difference
  double t_initial = 5.0;    // first integration horizon
  double t_limit = 161.0;    // give up after this much simulated time
  double growth = 1.1;       // horizon multiplier between stages
  double rel_tol = 1e-6;     // per-step local error control
  double abs_tol = 1e-9;
  double max_error = 1e-5;   // cap on the per-step error bound, so large states still settle below delta
  double lag = 1.0;          // time lag of the convergence test, in units of tau
  double divergence_limit = 1e12;  // |x| beyond this ends the search as TimedOut
  bool start_from_input = true;    // x(0) = i; false starts from x(0) = 0
};

enum class Verdict { Converged, Unstable, TimedOut };

const char* to_string(Verdict v);

struct FixedPointOutcome {
  Verdict verdict = Verdict::TimedOut;
  std::optional<Vector> f;            // unrectified fixed point, iff Converged
  double t_solved = 0.0;              // simulated time consumed
  std::optional<double> lambda_plus;  // iff Unstable
  std::string diagnostic;             // reason for TimedOut, empty otherwise
};

struct StabilityReport {
  std::vector<std::size_t> active_indices;
  double lambda_plus = -std::numeric_limits<double>::infinity();
  double lambda_plus_imag = 0.0;
  Vector v_plus;
  bool unstable = false;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Vector> x;
};

Vector relu(std::span<const double> x);

/// (W [x - b]^+ + i - x) / tau
Vector derivative(const RecurrentNet& net, std::span<const double> x, std::span<const double> i);

/// Embedded Dormand-Prince 5(4) integrator with adaptive step size. The
/// per-step error estimate is held below min(rel_tol * |x|_inf + abs_tol, max_error).
class DormandPrince {
 public:
  using Rhs = std::function<void(std::span<const double> x, std::span<double> dxdt)>;

  /// Accepted step: state and slope at both ends, enough for Hermite dense output.
  struct Step {
    double t0, t1;
    Vector x0, x1, f0, f1;
  };

  DormandPrince(Rhs rhs, Vector x0, double rel_tol, double abs_tol, double h0,
                double max_error = std::numeric_limits<double>::infinity());

  /// Integrates until time t_target. `on_step` sees every accepted step.
  /// Throws StepUnderflow if the step size drops below 1e-12.
  void advance_to(double t_target, const std::function<void(const Step&)>& on_step = {});

  double time() const noexcept { return t_; }
  const Vector& state() const noexcept { return x_; }
  const Vector& slope() const noexcept { return f_; }

 private:
  Rhs rhs_;
  std::size_t n_;
  double t_ = 0.0;
  double h_;
  double rel_tol_, abs_tol_, max_error_;
  Vector x_, f_;
  std::vector<Vector> k_;
  Vector y_stage_, y_new_, err_;
};

/// Trajectory on [0, t_end] from x0 under constant input i; includes both endpoints.
Trajectory integrate(const RecurrentNet& net, std::span<const double> x0, std::span<const double> i,
                     double t_end, const FixedPointConfig& cfg = {});

/// Active partition at state x (x_j - b_j > 0), its dominant eigenpair, and the
/// runaway-excitation test: unstable iff lambda+ is real, exceeds 1, and its
/// eigenvector is strictly positive.
StabilityReport stability_report(const RecurrentNet& net, std::span<const double> x);

/// Staged integration from x(0) = i (or 0) with growing horizons; see FixedPointConfig.
FixedPointOutcome find_fixed_point(const RecurrentNet& net, std::span<const double> i,
                                   const FixedPointConfig& cfg = {});

/// Closed-form fixed point assuming the given active set. Returns nullopt if
/// the solution is inconsistent with that set. Throws SingularMatrix.
std::optional<Vector> analytic_partition_fixed_point(const RecurrentNet& net,
                                                     std::span<const double> i,
                                                     std::span<const std::size_t> active);

/// Indices with x_j - b_j > 0.
std::vector<std::size_t> active_set(const RecurrentNet& net, std::span<const double> x);

}  // namespace fpnet
