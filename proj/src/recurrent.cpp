#include "fpnet/recurrent.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "fpnet/errors.hpp"

namespace fpnet {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// Difference between the 5th- and 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kMinStep = 1e-12;

void check_lengths(const RecurrentNet& net, std::size_t x, std::size_t i) {
  if (x != net.size() || i != net.size()) {
    throw DimensionMismatch("network has " + std::to_string(net.size()) + " neurons, got state " +
                            std::to_string(x) + " and input " + std::to_string(i));
  }
}

void derivative_into(const RecurrentNet& net, std::span<const double> x, std::span<const double> i,
                     std::span<double> out, std::vector<double>& scratch) {
  const std::size_t n = net.size();
  const auto& b = net.bias();
  scratch.resize(n);
  for (std::size_t j = 0; j < n; ++j) scratch[j] = std::max(x[j] - b[j], 0.0);
  const Matrix& w = net.weights();
  const double inv_tau = 1.0 / net.tau();
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = w.row(r);
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) acc += row[c] * scratch[c];
    out[r] = (acc + i[r] - x[r]) * inv_tau;
  }
}

DormandPrince::Rhs make_rhs(const RecurrentNet& net, std::span<const double> i) {
  Vector input(i.begin(), i.end());
  return [&net, input = std::move(input), scratch = std::vector<double>()](
             std::span<const double> x, std::span<double> dx) mutable {
    derivative_into(net, x, input, dx, scratch);
  };
}

Vector hermite(const DormandPrince::Step& s, double t) {
  const double h = s.t1 - s.t0;
  const double th = h > 0 ? (t - s.t0) / h : 1.0;
  const double th2 = th * th, th3 = th2 * th;
  const double h00 = 2 * th3 - 3 * th2 + 1;
  const double h10 = th3 - 2 * th2 + th;
  const double h01 = -2 * th3 + 3 * th2;
  const double h11 = th3 - th2;
  Vector out(s.x0.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j] = h00 * s.x0[j] + h10 * h * s.f0[j] + h01 * s.x1[j] + h11 * h * s.f1[j];
  }
  return out;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "Converged";
    case Verdict::Unstable: return "Unstable";
    case Verdict::TimedOut: return "TimedOut";
  }
  return "?";
}

RecurrentNet::RecurrentNet(Matrix w) : RecurrentNet(w, Vector(w.rows(), 0.0), 1.0) {}

RecurrentNet::RecurrentNet(Matrix w, Vector b, double tau)
    : w_(std::move(w)), b_(std::move(b)), tau_(tau) {
  if (!w_.square()) throw DimensionMismatch("recurrent weights must be square");
  if (b_.size() != w_.rows()) throw DimensionMismatch("bias length must match neuron count");
  if (!(tau_ > 0) || !std::isfinite(tau_)) throw std::invalid_argument("tau must be positive");
  for (double v : b_) {
    if (!std::isfinite(v)) throw std::invalid_argument("bias entries must be finite");
  }
}

Vector relu(std::span<const double> x) {
  Vector out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](double v) { return std::max(v, 0.0); });
  return out;
}

Vector derivative(const RecurrentNet& net, std::span<const double> x, std::span<const double> i) {
  check_lengths(net, x.size(), i.size());
  Vector out(net.size());
  std::vector<double> scratch;
  derivative_into(net, x, i, out, scratch);
  return out;
}

DormandPrince::DormandPrince(Rhs rhs, Vector x0, double rel_tol, double abs_tol, double h0,
                             double max_error)
    : rhs_(std::move(rhs)),
      n_(x0.size()),
      h_(h0),
      rel_tol_(rel_tol),
      abs_tol_(abs_tol),
      max_error_(max_error),
      x_(std::move(x0)),
      f_(n_),
      k_(7, Vector(n_)),
      y_stage_(n_),
      y_new_(n_),
      err_(n_) {
  if (!(h0 > 0)) throw std::invalid_argument("initial step must be positive");
  if (!(max_error > 0)) throw std::invalid_argument("max_error must be positive");
  rhs_(x_, f_);
}

void DormandPrince::advance_to(double t_target, const std::function<void(const Step&)>& on_step) {
  while (t_ < t_target) {
    const double remaining = t_target - t_;
    const bool clamped = h_ >= remaining;
    const double h = clamped ? remaining : h_;

    auto& k1 = f_;
    auto stage = [&](auto&& combine, Vector& out) {
      for (std::size_t j = 0; j < n_; ++j) y_stage_[j] = x_[j] + h * combine(j);
      rhs_(y_stage_, out);
    };
    stage([&](std::size_t j) { return a21 * k1[j]; }, k_[1]);
    stage([&](std::size_t j) { return a31 * k1[j] + a32 * k_[1][j]; }, k_[2]);
    stage([&](std::size_t j) { return a41 * k1[j] + a42 * k_[1][j] + a43 * k_[2][j]; }, k_[3]);
    stage([&](std::size_t j) {
      return a51 * k1[j] + a52 * k_[1][j] + a53 * k_[2][j] + a54 * k_[3][j];
    }, k_[4]);
    stage([&](std::size_t j) {
      return a61 * k1[j] + a62 * k_[1][j] + a63 * k_[2][j] + a64 * k_[3][j] + a65 * k_[4][j];
    }, k_[5]);
    for (std::size_t j = 0; j < n_; ++j) {
      y_new_[j] = x_[j] + h * (a71 * k1[j] + a73 * k_[2][j] + a74 * k_[3][j] + a75 * k_[4][j] +
                               a76 * k_[5][j]);
    }
    rhs_(y_new_, k_[6]);
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      err_[j] = h * (e1 * k1[j] + e3 * k_[2][j] + e4 * k_[3][j] + e5 * k_[4][j] + e6 * k_[5][j] +
                     e7 * k_[6][j]);
      err = std::max(err, std::abs(err_[j]));
      scale = std::max({scale, std::abs(x_[j]), std::abs(y_new_[j])});
    }
    const double tol = std::min(rel_tol_ * scale + abs_tol_, max_error_);
    const double ratio = err / tol;

    if (std::isfinite(ratio) && ratio <= 1.0) {
      const double fac = ratio == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 5.0);
      if (on_step) {
        on_step(Step{t_, t_ + h, x_, y_new_, f_, k_[6]});
      }
      t_ = clamped ? t_target : t_ + h;
      std::swap(x_, y_new_);
      std::swap(f_, k_[6]);
      // A step shortened to hit the target says little about the next one.
      h_ = clamped ? std::max(h_, h * fac) : h * fac;
    } else {
      const double fac = std::isfinite(ratio) ? std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 1.0) : 0.2;
      h_ = h * fac;
      if (h_ < kMinStep) {
        throw StepUnderflow("step size fell below 1e-12 at t=" + std::to_string(t_));
      }
    }
  }
}

Trajectory integrate(const RecurrentNet& net, std::span<const double> x0, std::span<const double> i,
                     double t_end, const FixedPointConfig& cfg) {
  check_lengths(net, x0.size(), i.size());
  if (!(t_end > 0)) throw std::invalid_argument("integrate: t_end must be positive");
  DormandPrince dp(make_rhs(net, i), Vector(x0.begin(), x0.end()), cfg.rel_tol, cfg.abs_tol,
                   std::min(1e-2, t_end / 100.0), cfg.max_error);
  Trajectory traj;
  traj.t.push_back(0.0);
  traj.x.emplace_back(x0.begin(), x0.end());
  dp.advance_to(t_end, [&](const DormandPrince::Step& s) {
    traj.t.push_back(s.t1);
    traj.x.push_back(s.x1);
  });
  traj.t.back() = t_end;
  return traj;
}

std::vector<std::size_t> active_set(const RecurrentNet& net, std::span<const double> x) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] - net.bias()[j] > 0.0) idx.push_back(j);
  }
  return idx;
}

StabilityReport stability_report(const RecurrentNet& net, std::span<const double> x) {
  if (x.size() != net.size()) throw DimensionMismatch("stability_report: state length mismatch");
  StabilityReport rep;
  rep.active_indices = active_set(net, x);
  if (rep.active_indices.empty()) return rep;
  const Matrix sub = submatrix(net.weights(), rep.active_indices);
  const EigenPair ep = dominant_real_eigenpair(sub);
  rep.lambda_plus = ep.value_re;
  rep.lambda_plus_imag = ep.value_im;
  rep.v_plus = ep.vector;
  const bool positive = std::all_of(rep.v_plus.begin(), rep.v_plus.end(), [](double v) { return v > 0; });
  rep.unstable = ep.value_im == 0.0 && ep.value_re > 1.0 && positive;
  return rep;
}

FixedPointOutcome find_fixed_point(const RecurrentNet& net, std::span<const double> i,
                                   const FixedPointConfig& cfg) {
  check_lengths(net, i.size(), i.size());
  if (!(cfg.t_initial > 0) || !(cfg.t_limit > 0) || !(cfg.growth > 1) || !(cfg.delta > 0)) {
    throw std::invalid_argument("find_fixed_point: invalid configuration");
  }
  const Vector input(i.begin(), i.end());
  const double lag = cfg.lag * net.tau();
  const Vector x0 = cfg.start_from_input ? input : Vector(input.size(), 0.0);
  DormandPrince dp(make_rhs(net, input), x0, cfg.rel_tol, cfg.abs_tol,
                   std::min(1e-2, cfg.t_initial / 100.0), cfg.max_error);

  std::deque<DormandPrince::Step> history;
  std::vector<std::size_t> cached_active;
  std::optional<StabilityReport> report;

  FixedPointOutcome out;
  double t_end = std::min(cfg.t_initial, cfg.t_limit);
  while (true) {
    try {
      dp.advance_to(t_end, [&](const DormandPrince::Step& s) { history.push_back(s); });
    } catch (const StepUnderflow& e) {
      out.verdict = Verdict::TimedOut;
      out.t_solved = dp.time();
      out.diagnostic = std::string("StepUnderflow: ") + e.what();
      return out;
    }
    out.t_solved = t_end;
    const Vector& x = dp.state();
    if (!std::all_of(x.begin(), x.end(), [&](double v) {
          return std::isfinite(v) && std::abs(v) <= cfg.divergence_limit;
        })) {
      out.verdict = Verdict::TimedOut;
      out.diagnostic = "diverged";
      return out;
    }
    while (history.size() > 1 && history[1].t0 <= t_end - lag) history.pop_front();

    auto active = active_set(net, x);
    if (!report || active != cached_active) {
      report = stability_report(net, x);
      cached_active = std::move(active);
    }
    if (report->unstable) {
      out.verdict = Verdict::Unstable;
      out.lambda_plus = report->lambda_plus;
      return out;
    }

    const double t_lag = t_end - lag;
    Vector lagged = input;
    if (t_lag > 0 && !history.empty()) lagged = hermite(history.front(), t_lag);
    double change = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) change = std::max(change, std::abs(lagged[j] - x[j]));
    if (change < cfg.delta) {
      const double residual = norm_inf(dp.slope());
      if (residual <= 10.0 * cfg.delta) {
        out.verdict = Verdict::Converged;
        out.f = x;
        return out;
      }
    }
    if (t_end >= cfg.t_limit) {
      out.verdict = Verdict::TimedOut;
      out.diagnostic = "no fixed point before t_limit";
      return out;
    }
    t_end = std::min(t_end * cfg.growth, cfg.t_limit);
  }
}

std::optional<Vector> analytic_partition_fixed_point(const RecurrentNet& net,
                                                     std::span<const double> i,
                                                     std::span<const std::size_t> active) {
  const std::size_t n = net.size();
  if (i.size() != n) throw DimensionMismatch("analytic_partition_fixed_point: input length");
  std::vector<bool> is_active(n, false);
  for (auto a : active) {
    if (a >= n) throw std::out_of_range("active index out of range");
    is_active[a] = true;
  }
  const Matrix& w = net.weights();
  const Vector& b = net.bias();
  const std::size_t k = active.size();

  // Active block: (I - W_AA) x_A = i_A - W_AA b_A.
  Vector rect(n, 0.0);  // [x - b]^+ at the candidate fixed point
  if (k > 0) {
    Matrix lhs(k, k);
    Vector rhs(k);
    for (std::size_t r = 0; r < k; ++r) {
      rhs[r] = i[active[r]];
      for (std::size_t c = 0; c < k; ++c) {
        const double wrc = w(active[r], active[c]);
        lhs(r, c) = (r == c ? 1.0 : 0.0) - wrc;
        rhs[r] -= wrc * b[active[c]];
      }
    }
    const Vector xa = solve_linear(lhs, rhs);
    for (std::size_t r = 0; r < k; ++r) rect[active[r]] = xa[r] - b[active[r]];
  }
  Vector x = multiply(w, rect);
  for (std::size_t j = 0; j < n; ++j) x[j] += i[j];
  for (std::size_t j = 0; j < n; ++j) {
    if (is_active[j] ? !(x[j] > b[j]) : !(x[j] <= b[j])) return std::nullopt;
  }
  return x;
}

}  // namespace fpnet
