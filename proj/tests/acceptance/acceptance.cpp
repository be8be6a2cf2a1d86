// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails. argv[1] is a scratch directory for the
// reproducibility runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fpnet/cli.hpp"
#include "fpnet/experiments.hpp"
#include "fpnet/ffnet.hpp"
#include "fpnet/generators.hpp"
#include "fpnet/io.hpp"
#include "fpnet/linalg.hpp"
#include "fpnet/optim.hpp"
#include "fpnet/presets.hpp"
#include "fpnet/recurrent.hpp"
#include "fpnet/rng.hpp"

using namespace fpnet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? std::nan("") : s / v.size();
}

bool nondecreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] >= v[k - 1] - 1e-12)) return false;
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? " " : "") + fmt(v[k]);
  return s;
}

const ExperimentReport& find_report(const PresetOutput& out, const std::string& name) {
  for (const auto& r : out.reports)
    if (r.name == name) return r;
  throw std::runtime_error("missing report " + name);
}

// rows of a report as (column -> cell) lookups
struct Rows {
  const ExperimentReport& rep;
  double num(const std::vector<Cell>& row, const std::string& col) const {
    const auto v = ExperimentReport::number(row[rep.column(col)]);
    return v ? *v : std::nan("");
  }
  std::string str(const std::vector<Cell>& row, const std::string& col) const {
    const auto& c = row[rep.column(col)];
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return format_double(*ExperimentReport::number(c));
  }
};

const RecurrentNet kLinearPair{Matrix{{0.4, 0.2}, {0.8, 0.5}}};
const RecurrentNet kSpiralPair{Matrix{{0.70, 0.11}, {-0.54, 0.98}}};

// fixed point of a 2-neuron net on a given active set, by Cramer's rule
Vector two_neuron_oracle(const Matrix& w, const Vector& i, const std::vector<bool>& on) {
  Vector x = i;
  if (on[0] && on[1]) {
    const double a = 1 - w(0, 0), b = -w(0, 1), c = -w(1, 0), d = 1 - w(1, 1);
    const double det = a * d - b * c;
    x[0] = (d * i[0] - b * i[1]) / det;
    x[1] = (a * i[1] - c * i[0]) / det;
  } else if (on[0]) {
    x[0] = i[0] / (1 - w(0, 0));
    x[1] = i[1] + w(1, 0) * x[0];
  } else if (on[1]) {
    x[1] = i[1] / (1 - w(1, 1));
    x[0] = i[0] + w(0, 1) * x[1];
  }
  return x;
}

Outcome c1_fixed_point_oracle() {
  std::size_t converged = 0, bad = 0;
  double worst = 0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const Vector in = sample_uniform_input(2, -1, 1, 5000 + k);
    const auto o = find_fixed_point(kLinearPair, in);
    if (o.verdict != Verdict::Converged) continue;
    ++converged;
    const Vector& f = *o.f;
    const auto act = active_set(kLinearPair, f);
    const auto lib = analytic_partition_fixed_point(kLinearPair, in, act);
    const Vector ref = two_neuron_oracle(kLinearPair.weights(), in, {f[0] > 0, f[1] > 0});
    if (!lib) {
      ++bad;
      continue;
    }
    const double d = std::max({std::abs(f[0] - (*lib)[0]), std::abs(f[1] - (*lib)[1]), std::abs(f[0] - ref[0]),
                               std::abs(f[1] - ref[1])});
    worst = std::max(worst, d);
    if (d > 1e-3) ++bad;
  }
  const Vector one{1, 1};
  const auto o = find_fixed_point(kLinearPair, one);
  const bool ones = o.verdict == Verdict::Converged && std::abs((*o.f)[0] - 5) <= 1e-3 && std::abs((*o.f)[1] - 10) <= 1e-3;
  return {converged > 0 && bad == 0 && ones,
          std::to_string(converged) + "/200 converged, " + std::to_string(bad) + " off oracle, max dev " + fmt(worst) +
              ", i=(1,1) -> (" + (o.f ? fmt((*o.f)[0]) + "," + fmt((*o.f)[1]) : "none") + ")"};
}

Outcome c2_complex_dynamics() {
  const auto ev = eigenvalues(kSpiralPair.weights());
  const bool eig = ev.size() == 2 && std::abs(ev[0].real() - 0.84) <= 1e-3 && std::abs(ev[0].imag() - 0.1995) <= 1e-3 &&
                   std::abs(ev[1].real() - 0.84) <= 1e-3 && std::abs(ev[1].imag() + 0.1995) <= 1e-3;
  const Vector one{1, 1};
  const auto o = find_fixed_point(kSpiralPair, one);
  bool fp = false;
  std::string got = "none";
  if (o.verdict == Verdict::Converged) {
    const auto r = relu(*o.f);
    fp = std::abs(r[0] - 10.0 / 3.0) <= 1e-3 && std::abs(r[1]) <= 1e-3;
    got = "(" + fmt(r[0]) + "," + fmt(r[1]) + ")";
  }
  return {eig && fp, "eigenvalues " + fmt(ev[0].real()) + "+-" + fmt(std::abs(ev[0].imag())) + "i, rectified f " + got};
}

Outcome c3_instability() {
  const RecurrentNet net{Matrix{{1.2, 0.1}, {0.1, 1.2}}};
  const Vector one{1, 1};
  const auto o = find_fixed_point(net, one);
  const auto s = stability_report(net, one);
  const bool positive = std::all_of(s.v_plus.begin(), s.v_plus.end(), [](double v) { return v > 0; });
  const bool pass = o.verdict == Verdict::Unstable && o.lambda_plus && std::abs(*o.lambda_plus - 1.3) <= 1e-6 && positive;
  return {pass, std::string("verdict ") + to_string(o.verdict) + ", lambda+ " +
                    (o.lambda_plus ? format_double(*o.lambda_plus) : "none") +
                    (positive ? ", eigenvector positive" : ", eigenvector not positive")};
}

Outcome c4_gradients() {
  CounterRng rng(404, 0);
  std::size_t points = 0, coords = 0, bad = 0;
  double worst = 0;
  while (points < 100) {
    const std::size_t n_in = 2 + points % 4, n_hidden = 3 + points % 5, n_out = 1 + points % 3;
    Matrix w1(n_hidden, n_in), w2(n_out, n_hidden);
    for (auto& v : w1.entries()) v = rng.uniform(-1, 1);
    for (auto& v : w2.entries()) v = rng.uniform(-1, 1);
    Vector b1(n_hidden), b2(n_out);
    for (auto& v : b1) v = rng.uniform(-0.5, 0.5);
    for (auto& v : b2) v = rng.uniform(-0.5, 0.5);
    const FeedForwardNet net(w1, w2, b1, b2);
    TrainingPair p{Vector(n_in), Vector(n_out)};
    for (auto& v : p.input) v = rng.uniform(-1, 1);
    for (auto& v : p.target) v = rng.uniform(0, 1);

    const auto tr = forward(net, p.input);
    auto away = [](const Vector& v) { return std::all_of(v.begin(), v.end(), [](double x) { return std::abs(x) > 1e-3; }); };
    if (!away(tr.pre1) || !away(tr.pre2)) continue;
    ++points;

    const std::vector<TrainingPair> batch{p};
    const auto g = flatten_gradients(backprop(net, batch));
    const auto params = flatten_parameters(net);
    auto c_at = [&](const std::vector<double>& q) {
      FeedForwardNet m = net;
      assign_parameters(m, q);
      const std::vector<Vector> out{forward(m, p.input).act2}, tgt{p.target};
      return loss(out, tgt);
    };
    for (std::size_t k = 0; k < params.size(); ++k) {
      auto q = params;
      q[k] = params[k] + 1e-6;
      const double up = c_at(q);
      q[k] = params[k] - 1e-6;
      const double down = c_at(q);
      const double fd = (up - down) / 2e-6;
      ++coords;
      // inactive units give exactly zero on both sides
      if (fd == 0.0 && g[k] == 0.0) continue;
      const double rel = std::abs(fd - g[k]) / std::max(std::abs(fd), std::abs(g[k]));
      worst = std::max(worst, rel);
      if (!(rel < 1e-5)) ++bad;
    }
  }
  return {bad == 0, std::to_string(points) + " points, " + std::to_string(coords) + " coordinates, " + std::to_string(bad) +
                        " over 1e-5, max rel err " + fmt(worst)};
}

Outcome c5_adam() {
  const AdamConfig cfg;
  AdamState st(2);
  std::vector<double> w{1.0, 1.0};
  adam_step(st, w, std::vector<double>(w));
  const double first = std::hypot(w[0] - 1.0, w[1] - 1.0) / std::sqrt(2.0);
  std::size_t steps = 1;
  while (steps < 10000 && std::hypot(w[0], w[1]) >= 1e-3) {
    adam_step(st, w, std::vector<double>(w));
    ++steps;
  }
  const double norm = std::hypot(w[0], w[1]);
  const bool pass = norm < 1e-3 && std::abs(first - cfg.alpha) <= 1e-6 * cfg.alpha;
  return {pass, "first step " + fmt(first) + " per coordinate, |w| " + fmt(norm) + " after " + std::to_string(steps) +
                    " steps"};
}

// shared between criteria 6 and 10
std::optional<PresetOutput> g_pair;

Outcome c6_distillation() {
  g_pair = run_preset("generalization", default_preset_config("generalization"));
  const auto& tr = *g_pair->training;
  const auto& ff = *g_pair->ff;
  const json cfg = g_pair->config.at("train");
  const bool defaults = cfg.at("batch_size") == 50 && cfg.at("smoothing_window") == 100 &&
                        cfg.at("convergence_rel_tol") == 1e-4 && cfg.at("max_iterations") == 50000;

  // held-out inputs from a stream the training never touches
  std::vector<double> err, mag;
  for (std::uint64_t k = 0; err.size() < 500 && k < 100000; ++k) {
    const Vector in = sample_uniform_input(2, -1, 1, derive_stream({0xacce, k}));
    const auto o = find_fixed_point(kLinearPair, in);
    if (o.verdict != Verdict::Converged || !((*o.f)[0] > 0 && (*o.f)[1] > 0)) continue;
    const Vector y = forward(ff, in).act2;
    err.push_back(0.5 * (std::abs(y[0] - (*o.f)[0]) + std::abs(y[1] - (*o.f)[1])));
    mag.push_back(0.5 * ((*o.f)[0] + (*o.f)[1]));
  }
  const double ratio = median(err) / median(mag);
  const bool pass = defaults && tr.stop_reason == StopReason::Converged && tr.iterations_run <= 50000 &&
                    err.size() == 500 && ratio <= 0.05;
  return {pass, std::string("stop ") + to_string(tr.stop_reason) + " at " + std::to_string(tr.iterations_run) +
                    ", median error / median target " + fmt(ratio) + " on " + std::to_string(err.size()) +
                    " all-positive held-out inputs"};
}

Outcome c7_competition() {
  const auto out = run_preset("decision-boundary", default_preset_config("decision-boundary"));
  const PartitionSpec spec{2, 2, 2.5, 8.0};
  const bool same_net = out.net == gen_partition_net(spec);

  // winner-take-all along the mixture line
  const auto sweep = competition_sweep(out.net, *out.ff, spec, 201);
  const Rows sw{sweep};
  std::size_t multi = 0;
  for (const auto& row : sweep.rows) {
    const double s = sw.num(row, "s");
    if (std::abs(s - 0.5) <= 1.0 / 200 + 1e-12) continue;
    if (sw.str(row, "verdict") != "Converged") {
      ++multi;
      continue;
    }
    // count partitions with any active excitatory neuron, from the raw state
    std::size_t active = 0;
    for (std::size_t p = 0; p < spec.partitions; ++p) {
      bool on = false;
      for (std::size_t j = 0; j < spec.per_partition; ++j)
        on = on || sw.num(row, "r" + std::to_string(p * spec.per_partition + j)) > 0;
      active += on;
    }
    if (active != 1) ++multi;
  }

  const auto& db = find_report(out, "decision_boundary");
  const Rows r{db};
  std::size_t agree = 0, far_miss = 0;
  double worst = 0;
  for (const auto& row : db.rows) {
    const double a = r.num(row, "iota_A"), b = r.num(row, "iota_B");
    const bool ok = r.str(row, "verdict") == "Converged" && r.str(row, "winner_R") == r.str(row, "winner_FF");
    if (ok) {
      ++agree;
      continue;
    }
    const double m = std::abs(a - b) / (a + b);
    worst = std::max(worst, m);
    if (m > 0.15) ++far_miss;
  }
  const double frac = static_cast<double>(agree) / db.rows.size();
  const bool pass = same_net && multi == 0 && db.rows.size() == 2000 && frac >= 0.95 && far_miss == 0;
  return {pass, std::to_string(multi) + " sweep points off winner-take-all, agreement " + fmt(frac) + " on " +
                    std::to_string(db.rows.size()) + " band samples, worst disagreeing margin " + fmt(worst)};
}

std::optional<PresetOutput> g_ring;

Outcome c8_ring() {
  g_ring = run_preset("noise", default_preset_config("noise"));
  const json& nc = g_ring->config.at("net");
  RingSpec spec;
  spec.n = nc.at("n");
  spec.w_e = nc.at("w_e");
  spec.w_i = nc.at("w_i");
  const auto& tr = *g_ring->training;
  const bool scale = spec.n == 20 && tr.iterations_run <= 20000;

  const auto sharp = sharpening_experiment(g_ring->net, *g_ring->ff, spec, {1, 2, 4, 8}, 100, 0.5, 2001);
  const Rows s{sharp};
  std::map<double, std::pair<std::size_t, std::size_t>> within;  // kappa -> (hits, converged)
  for (const auto& row : sharp.rows) {
    if (s.str(row, "verdict") != "Converged") continue;
    auto& w = within[s.num(row, "kappa")];
    ++w.second;
    const double e = s.num(row, "err_R_FF");
    w.first += std::isfinite(e) && std::abs(e) <= spec.grid_spacing() + 1e-12;
  }
  bool sharp_ok = within.size() == 4;
  std::vector<double> fracs;
  for (const auto& [k, w] : within) {
    fracs.push_back(static_cast<double>(w.first) / w.second);
    sharp_ok = sharp_ok && fracs.back() >= 0.9;
  }

  const auto& noise = find_report(*g_ring, "noise");
  const Rows n{noise};
  std::map<double, std::vector<double>> dev, err;
  for (const auto& row : noise.rows) {
    if (n.str(row, "verdict") != "Converged") continue;
    const double z = n.num(row, "zeta");
    dev[z].push_back(std::abs(n.num(row, "err_Theta_R")));
    err[z].push_back(n.num(row, "error"));
  }
  std::vector<double> med_dev, mean_err;
  for (double z : {0.0, 0.5, 1.0, 2.0}) {
    med_dev.push_back(median(dev[z]));
    mean_err.push_back(mean(err[z]));
  }
  const bool pass = scale && sharp_ok && nondecreasing(med_dev) && nondecreasing(mean_err);
  return {pass, "within one grid step per kappa 1,2,4,8: " + join(fracs) + "; median |Theta-theta_R| over zeta: " +
                    join(med_dev) + "; mean error over zeta: " + join(mean_err)};
}

Outcome c9_common_mode() {
  if (!g_ring) return {false, "ring net from criterion 8 unavailable"};
  const json& nc = g_ring->config.at("net");
  RingSpec spec;
  spec.n = nc.at("n");
  spec.w_e = nc.at("w_e");
  spec.w_i = nc.at("w_i");
  const bool trained_half = g_ring->config.at("sampler").at("gamma") == 0.5;
  const auto rep = common_mode_experiment(g_ring->net, *g_ring->ff, spec, {0.5, 1, 2, 4}, 100, 4.0, 0.0, 2002);
  const Rows r{rep};
  std::map<double, std::vector<double>> err;
  for (const auto& row : rep.rows)
    if (r.str(row, "verdict") == "Converged") err[r.num(row, "gamma")].push_back(r.num(row, "error"));
  std::vector<double> m;
  for (double g : {0.5, 1.0, 2.0, 4.0}) m.push_back(mean(err[g]));
  const bool pass = trained_half && m[0] < m[3] && m[1] < m[3] && m[2] < m[3];
  return {pass, "mean error at gamma 0.5,1,2,4: " + join(m)};
}

Outcome c10_generalization() {
  if (!g_pair) return {false, "distilled net from criterion 6 unavailable"};
  const auto& rep = find_report(*g_pair, "generalization");
  const Rows r{rep};
  std::map<double, std::vector<double>> shell;
  std::vector<double> interior;
  for (const auto& row : rep.rows) {
    if (r.str(row, "verdict") != "Converged") continue;
    if (r.str(row, "region") == "interior")
      interior.push_back(r.num(row, "error"));
    else
      shell[r.num(row, "scale")].push_back(r.num(row, "error"));
  }
  std::vector<double> means;
  for (const auto& [s, e] : shell) means.push_back(mean(e));
  const double base = mean(interior);
  const bool pass = shell.size() == 5 && shell.begin()->first == 1.0 && shell.rbegin()->first == 3.0 &&
                    nondecreasing(means) && means.back() < 5 * base;
  return {pass, "shell means 1..3: " + join(means) + ", in-distribution " + fmt(base)};
}

Outcome c11_reproducibility(const fs::path& root) {
  std::vector<std::string> failed;
  std::size_t csvs = 0;
  for (const auto& name : preset_names()) {
    const fs::path a = root / name / "run", b = root / name / "rerun";
    fs::remove_all(root / name);
    std::ostringstream out, err;
    // training capped so the whole sweep stays within minutes; the manifest
    // records the cap like any other override
    int code = cli_main({"fpnet", "experiment", name, "--out", a.string(), "--max-iter", "2000"}, out, err);
    if (code == 0) code = cli_main({"fpnet", "rerun", "--manifest", (a / "manifest.json").string(), "--out", b.string()}, out, err);
    bool same = code == 0;
    std::size_t here = 0;
    if (same) {
      for (const auto& e : fs::directory_iterator(a)) {
        if (e.path().extension() != ".csv") continue;
        ++here;
        const fs::path other = b / e.path().filename();
        same = same && fs::exists(other) && read_text_file(e.path()) == read_text_file(other);
      }
    }
    csvs += here;
    if (!same || here == 0) failed.push_back(name);
  }
  std::string detail = std::to_string(preset_names().size()) + " presets, " + std::to_string(csvs) + " csv files compared";
  if (!failed.empty()) {
    detail += ", mismatched:";
    for (const auto& f : failed) detail += " " + f;
  }
  return {failed.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "fpnet_acceptance";
  fs::create_directories(scratch);

  struct Criterion {
    int id;
    std::string title;
    double limit_s;  // 0 means no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "fixed-point oracle equivalence", 10, c1_fixed_point_oracle},
      {2, "complex-dynamics system", 0, c2_complex_dynamics},
      {3, "instability gating", 0, c3_instability},
      {4, "gradient correctness", 5, c4_gradients},
      {5, "Adam sanity", 1, c5_adam},
      {6, "two-neuron distillation", 300, c6_distillation},
      {7, "competition fidelity", 600, c7_competition},
      {8, "ring sharpening and noise rejection", 1200, c8_ring},
      {9, "common-mode breakdown", 300, c9_common_mode},
      {10, "generalization trend", 0, c10_generalization},
      {11, "reproducibility from manifests", 0, [&] { return c11_reproducibility(scratch / "repro"); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.limit_s) + " s budget";
    }
    failures += !o.pass;
    std::printf("%s  criterion %2d  %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
