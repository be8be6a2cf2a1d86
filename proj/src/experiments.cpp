#include "fpnet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "fpnet/errors.hpp"
#include "fpnet/rng.hpp"

namespace fpnet {

namespace {

constexpr std::uint64_t kTagBoundary = 0x42444259;  // "BDBY"
constexpr std::uint64_t kTagSharpen = 0x53485250;   // "SHRP"
constexpr std::uint64_t kTagNoise = 0x4E4F4953;     // "NOIS"
constexpr std::uint64_t kTagCommon = 0x434D4D4E;    // "CMMN"
constexpr std::uint64_t kTagShell = 0x5348454C;     // "SHEL"
constexpr std::uint64_t kTagThresh = 0x54485253;    // "THRS"

const Cell kBlank = std::string();

struct Solve {
  Verdict verdict;
  Vector f;   // signed, empty unless Converged
  Vector fr;  // rectified
};

Solve solve(const RecurrentNet& net, std::span<const double> input, const FixedPointConfig& fcfg) {
  auto out = find_fixed_point(net, input, fcfg);
  Solve s{out.verdict, {}, {}};
  if (out.verdict == Verdict::Converged) {
    s.f = std::move(*out.f);
    s.fr = relu(s.f);
  }
  return s;
}

void check_nets(const RecurrentNet& net, const FeedForwardNet& ff, const char* what) {
  if (ff.n_in() != net.size() || ff.n_out() != net.size()) {
    throw DimensionMismatch(std::string(what) + ": feed-forward net does not match recurrent net size");
  }
}

std::optional<double> try_peak(std::span<const double> r, const RingSpec& spec) {
  try {
    return peak_angle(r, spec);
  } catch (const AllZeroResponse&) {
    return std::nullopt;
  }
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell(*v) : kBlank; }

std::string key(const std::string& group, double value, const std::string& stat) {
  return group + "=" + format_double(value) + "/" + stat;
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nan("");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double quantile_of(std::vector<double> xs, double q) {
  if (xs.empty()) return std::nan("");
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

double median_of(const std::vector<double>& xs) { return quantile_of(xs, 0.5); }

std::string partition_label(const std::optional<std::size_t>& p) {
  if (!p) return "none";
  return std::string(1, static_cast<char>('A' + *p));
}

double partition_sum(std::span<const double> r, const PartitionSpec& spec, std::size_t p) {
  double s = 0.0;
  for (std::size_t k = 0; k < spec.per_partition; ++k) s += std::max(r[p * spec.per_partition + k], 0.0);
  return s;
}

void check_partition(const RecurrentNet& net, const PartitionSpec& spec, const char* what) {
  if (spec.partitions < 2) throw std::invalid_argument(std::string(what) + ": need at least two partitions");
  if (net.size() != spec.size()) throw DimensionMismatch(std::string(what) + ": net size does not match spec");
}

void check_ring(const RecurrentNet& net, const RingSpec& spec, const char* what) {
  if (net.size() != spec.n) throw DimensionMismatch(std::string(what) + ": net size does not match spec");
}

json ring_spec_json(const RingSpec& s) { return json{{"n", s.n}, {"w_e", s.w_e}, {"w_i", s.w_i}}; }
RingSpec ring_spec_from(const json& j) {
  RingSpec s;
  s.n = j.at("n").get<std::size_t>();
  s.w_e = j.at("w_e").get<double>();
  s.w_i = j.at("w_i").get<double>();
  return s;
}
json partition_spec_json(const PartitionSpec& s) {
  return json{{"partitions", s.partitions}, {"per_partition", s.per_partition}, {"w_e", s.w_e}, {"w_i", s.w_i}};
}
PartitionSpec partition_spec_from(const json& j) {
  PartitionSpec s;
  s.partitions = j.at("partitions").get<std::size_t>();
  s.per_partition = j.at("per_partition").get<std::size_t>();
  s.w_e = j.at("w_e").get<double>();
  s.w_i = j.at("w_i").get<double>();
  return s;
}

json base_snapshot(const char* name, const RecurrentNet& net, const FeedForwardNet* ff,
                   const FixedPointConfig& fcfg) {
  json j{{"experiment", name}, {"recurrent", net_to_json(net)}, {"fixed_point", to_json(fcfg)}};
  if (ff) j["ff"] = net_to_json(*ff);
  return j;
}

std::vector<std::string> indexed(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(prefix + std::to_string(j));
  return out;
}

void append(std::vector<std::string>& cols, const std::vector<std::string>& more) {
  cols.insert(cols.end(), more.begin(), more.end());
}

void append_values(std::vector<Cell>& row, std::span<const double> xs) {
  for (double x : xs) row.emplace_back(x);
}

void append_blanks(std::vector<Cell>& row, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) row.push_back(kBlank);
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Dataset build_dataset(const RecurrentNet& net, const InputSampler& sampler, std::size_t count,
                      const FixedPointConfig& fcfg, std::uint64_t seed) {
  if (count == 0) throw std::invalid_argument("build_dataset: count must be >= 1");
  if (sampler_dimension(sampler) != net.size()) {
    throw DimensionMismatch("build_dataset: sampler dimension does not match network");
  }
  Dataset ds;
  std::size_t unstable = 0, timed_out = 0, misses = 0;
  std::uint64_t attempt = 0;
  for (; ds.inputs.size() < count; ++attempt) {
    Vector input = sample_input(sampler, seed, attempt);
    const Solve s = solve(net, input, fcfg);
    if (s.verdict != Verdict::Converged) {
      (s.verdict == Verdict::Unstable ? unstable : timed_out)++;
      if (++misses >= 1000 * count) {
        throw DataExhausted("build_dataset: no fixed point in " + std::to_string(misses) +
                            " consecutive samples");
      }
      continue;
    }
    misses = 0;
    ds.all_positive.push_back(passes(TargetFilter::AllPositive, s.f));
    ds.inputs.push_back(std::move(input));
    ds.targets.push_back(s.fr);
  }
  ds.provenance = json{{"sampler", to_json(sampler)}, {"seed", seed},        {"count", count},
                       {"attempts", attempt},         {"unstable", unstable}, {"timed_out", timed_out}};
  return ds;
}

json to_json(const InputSampler& sampler) {
  if (const auto* u = std::get_if<UniformSampler>(&sampler)) {
    return json{{"type", "uniform"}, {"n", u->n}, {"lo", u->lo}, {"hi", u->hi}, {"driven", u->driven}};
  }
  const auto& r = std::get<RingSampler>(sampler);
  return json{{"type", "ring"},         {"spec", ring_spec_json(r.spec)}, {"kappa_lo", r.kappa_lo},
              {"kappa_hi", r.kappa_hi}, {"gamma", r.gamma},               {"zeta", r.zeta}};
}

InputSampler sampler_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "uniform") {
    UniformSampler u;
    u.n = j.at("n").get<std::size_t>();
    u.lo = j.at("lo").get<double>();
    u.hi = j.at("hi").get<double>();
    u.driven = j.value("driven", u.n);
    if (u.driven > u.n) throw std::invalid_argument("uniform sampler: driven > n");
    return u;
  }
  if (type == "ring") {
    RingSampler r;
    r.spec = ring_spec_from(j.at("spec"));
    r.kappa_lo = j.at("kappa_lo").get<double>();
    r.kappa_hi = j.at("kappa_hi").get<double>();
    r.gamma = j.at("gamma").get<double>();
    r.zeta = j.at("zeta").get<double>();
    return r;
  }
  throw std::invalid_argument("unknown sampler type '" + type + "'");
}

json to_json(const Dataset& ds) {
  return json{{"inputs", ds.inputs},
              {"targets", ds.targets},
              {"all_positive", ds.all_positive},
              {"provenance", ds.provenance}};
}

Dataset dataset_from_json(const json& j) {
  Dataset ds;
  ds.inputs = j.at("inputs").get<std::vector<Vector>>();
  ds.targets = j.at("targets").get<std::vector<Vector>>();
  ds.all_positive = j.at("all_positive").get<std::vector<bool>>();
  ds.provenance = j.value("provenance", json::object());
  if (ds.inputs.size() != ds.targets.size() || ds.inputs.size() != ds.all_positive.size()) {
    throw std::invalid_argument("dataset: inputs, targets and flags differ in length");
  }
  for (const auto& t : ds.targets) {
    if (std::any_of(t.begin(), t.end(), [](double v) { return !(v >= 0); })) {
      throw std::invalid_argument("dataset: targets must be rectified");
    }
  }
  return ds;
}

double sample_error(std::span<const double> output, std::span<const double> target) {
  if (output.size() != target.size() || output.empty()) {
    throw DimensionMismatch("sample_error: output and target lengths differ");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < output.size(); ++j) s += std::abs(output[j] - target[j]);
  return s / static_cast<double>(output.size());
}

ApproxError approx_error(const FeedForwardNet& ff, const Dataset& ds) {
  if (ds.inputs.empty()) throw EmptyBatch("approx_error: empty dataset");
  if (ds.inputs.size() != ds.targets.size()) throw DimensionMismatch("approx_error: dataset is ragged");
  ApproxError out;
  out.per_sample.reserve(ds.inputs.size());
  double sum = 0.0;
  for (std::size_t m = 0; m < ds.inputs.size(); ++m) {
    const double e = sample_error(forward(ff, ds.inputs[m]).act2, ds.targets[m]);
    out.per_sample.push_back(e);
    sum += e;
  }
  out.mean = sum / static_cast<double>(ds.inputs.size());
  return out;
}

double peak_angle(std::span<const double> response, const RingSpec& spec) {
  if (response.size() < spec.excitatory()) throw DimensionMismatch("peak_angle: response too short");
  std::size_t best = 0;
  for (std::size_t j = 1; j < spec.excitatory(); ++j) {
    if (response[j] > response[best]) best = j;
  }
  if (!(response[best] > 0)) throw AllZeroResponse("peak_angle: no excitatory neuron is active");
  return spec.theta(best);
}

double circular_error(double a, double b) {
  double d = std::remainder(a - b, 2.0 * std::numbers::pi);
  if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
  return d;
}

std::optional<double> tuning_width(std::span<const double> response, const RingSpec& spec) {
  if (response.size() < spec.excitatory()) throw DimensionMismatch("tuning_width: response too short");
  std::complex<double> z = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < spec.excitatory(); ++j) {
    const double r = std::max(response[j], 0.0);
    z += r * std::polar(1.0, spec.theta(j));
    total += r;
  }
  if (!(total > 0)) return std::nullopt;
  return std::clamp(1.0 - std::abs(z) / total, 0.0, 1.0);
}

std::optional<std::size_t> partition_winner(std::span<const double> response, const PartitionSpec& spec) {
  if (response.size() != spec.size()) throw DimensionMismatch("partition_winner: response length mismatch");
  std::size_t best = 0;
  double best_sum = partition_sum(response, spec, 0);
  for (std::size_t p = 1; p < spec.partitions; ++p) {
    const double s = partition_sum(response, spec, p);
    if (s > best_sum) {
      best = p;
      best_sum = s;
    }
  }
  if (best_sum < 1e-9) return std::nullopt;
  return best;
}

const char* to_string(PlotKind k) {
  switch (k) {
    case PlotKind::Scatter: return "scatter";
    case PlotKind::Line: return "line";
    case PlotKind::Polar: return "polar";
  }
  return "?";
}

void ExperimentReport::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw DimensionMismatch("report " + name + ": row has " + std::to_string(row.size()) + " cells, expected " +
                            std::to_string(columns.size()));
  }
  rows.push_back(std::move(row));
}

std::size_t ExperimentReport::column(const std::string& col) const {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] == col) return k;
  }
  throw std::out_of_range("report " + name + " has no column '" + col + "'");
}

std::optional<double> ExperimentReport::number(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&c)) return *d;
  return std::nullopt;
}

std::string to_csv(const ExperimentReport& report) {
  std::string out;
  for (std::size_t k = 0; k < report.columns.size(); ++k) {
    if (k) out += ',';
    out += quote_csv(report.columns[k]);
  }
  out += '\n';
  for (const auto& row : report.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ',';
      if (const auto* i = std::get_if<std::int64_t>(&row[k])) {
        out += std::to_string(*i);
      } else if (const auto* d = std::get_if<double>(&row[k])) {
        out += format_double(*d);
      } else {
        out += quote_csv(std::get<std::string>(row[k]));
      }
    }
    out += '\n';
  }
  return out;
}

ExperimentReport aggregate(const ExperimentReport& report, const std::string& group_column,
                           const std::vector<std::string>& value_columns, const std::string& name) {
  const std::size_t g = report.column(group_column);
  std::vector<std::size_t> vc;
  for (const auto& c : value_columns) vc.push_back(report.column(c));

  std::vector<Cell> groups;
  for (const auto& row : report.rows) {
    if (std::find(groups.begin(), groups.end(), row[g]) == groups.end()) groups.push_back(row[g]);
  }
  ExperimentReport out;
  out.name = name;
  out.columns = {group_column, "rows"};
  for (const auto& c : value_columns) {
    out.columns.push_back(c + "_n");
    out.columns.push_back(c + "_mean");
    out.columns.push_back(c + "_median");
  }
  out.config_snapshot = json{{"aggregate_of", report.name}, {"group", group_column}, {"values", value_columns}};
  for (const auto& gv : groups) {
    std::vector<std::vector<double>> vals(vc.size());
    std::int64_t count = 0;
    for (const auto& row : report.rows) {
      if (row[g] != gv) continue;
      ++count;
      for (std::size_t k = 0; k < vc.size(); ++k) {
        const auto v = ExperimentReport::number(row[vc[k]]);
        if (v && std::isfinite(*v)) vals[k].push_back(*v);
      }
    }
    std::vector<Cell> row{gv, count};
    for (const auto& v : vals) {
      row.emplace_back(static_cast<std::int64_t>(v.size()));
      row.push_back(v.empty() ? kBlank : Cell(mean_of(v)));
      row.push_back(v.empty() ? kBlank : Cell(median_of(v)));
    }
    out.add_row(std::move(row));
  }
  return out;
}

ExperimentReport mapping_experiment(const RecurrentNet& net, const FeedForwardNet& ff,
                                    const InputSampler& sampler, std::size_t n_samples,
                                    std::uint64_t seed, const FixedPointConfig& fcfg) {
  check_nets(net, ff, "mapping_experiment");
  if (sampler_dimension(sampler) != net.size()) throw DimensionMismatch("mapping_experiment: sampler size");
  const std::size_t n = net.size();
  ExperimentReport rep;
  rep.name = "fixed_points";
  rep.columns = {"sample"};
  append(rep.columns, indexed("i", n));
  rep.columns.push_back("verdict");
  append(rep.columns, indexed("f", n));
  append(rep.columns, indexed("target", n));
  append(rep.columns, indexed("ff", n));
  rep.columns.push_back("all_positive");
  rep.columns.push_back("error");
  rep.config_snapshot = base_snapshot("mapping", net, &ff, fcfg);
  rep.config_snapshot["sampler"] = to_json(sampler);
  rep.config_snapshot["n_samples"] = n_samples;
  rep.config_snapshot["seed"] = seed;

  std::vector<double> errors, errors_pos, target_pos;
  std::size_t unstable = 0, timed_out = 0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Vector input = sample_input(sampler, seed, k);
    const Solve s = solve(net, input, fcfg);
    const Vector y = forward(ff, input).act2;
    std::vector<Cell> row{static_cast<std::int64_t>(k)};
    append_values(row, input);
    row.emplace_back(std::string(to_string(s.verdict)));
    if (s.verdict == Verdict::Converged) {
      append_values(row, s.f);
      append_values(row, s.fr);
      append_values(row, y);
      const bool pos = passes(TargetFilter::AllPositive, s.f);
      const double e = sample_error(y, s.fr);
      row.emplace_back(std::int64_t{pos});
      row.emplace_back(e);
      errors.push_back(e);
      if (pos) {
        errors_pos.push_back(e);
        double mag = 0.0;
        for (double v : s.fr) mag += v;
        target_pos.push_back(mag / static_cast<double>(n));
      }
    } else {
      (s.verdict == Verdict::Unstable ? unstable : timed_out)++;
      append_blanks(row, n);
      append_blanks(row, n);
      append_values(row, y);
      append_blanks(row, 2);
    }
    rep.add_row(std::move(row));
  }
  rep.summary = {{"samples", static_cast<double>(n_samples)},
                 {"converged", static_cast<double>(errors.size())},
                 {"unstable", static_cast<double>(unstable)},
                 {"timed_out", static_cast<double>(timed_out)},
                 {"all_positive", static_cast<double>(errors_pos.size())},
                 {"mean_error", mean_of(errors)},
                 {"median_error", median_of(errors)},
                 {"mean_error_all_positive", mean_of(errors_pos)},
                 {"median_error_all_positive", median_of(errors_pos)},
                 {"median_target_all_positive", median_of(target_pos)}};
  PlotSpec plot{"fixed_point_map", PlotKind::Scatter, "Rectified fixed points and feed-forward outputs", "", "", {}};
  if (n == 2) {
    plot.x_label = "unit 1";
    plot.y_label = "unit 2";
    plot.series = {{"recurrent", "target0", "target1", "", std::int64_t{0}},
                   {"feed-forward", "ff0", "ff1", "", std::int64_t{0}}};
  } else {
    plot.x_label = "recurrent [f]+";
    plot.y_label = "feed-forward output";
    for (std::size_t j = 0; j < n; ++j) {
      plot.series.push_back({"unit " + std::to_string(j + 1), "target" + std::to_string(j), "ff" + std::to_string(j),
                             "", std::int64_t{0}});
    }
  }
  rep.plots.push_back(std::move(plot));
  return rep;
}

ExperimentReport trajectory_experiment(const RecurrentNet& net, std::size_t grid, double lo, double hi,
                                       double t_end, std::size_t points_per_trace,
                                       const FixedPointConfig& fcfg) {
  if (net.size() < 2) throw DimensionMismatch("trajectory_experiment: need at least two neurons");
  if (grid < 2 || points_per_trace < 2 || !(hi > lo) || !(t_end > 0)) {
    throw std::invalid_argument("trajectory_experiment: invalid grid or horizon");
  }
  const std::size_t n = net.size();
  ExperimentReport rep;
  rep.name = "trajectories";
  rep.columns = {"trace"};
  append(rep.columns, indexed("i", n));
  rep.columns.push_back("t");
  append(rep.columns, indexed("x", n));
  rep.config_snapshot = base_snapshot("trajectories", net, nullptr, fcfg);
  rep.config_snapshot.update(json{{"grid", grid}, {"lo", lo}, {"hi", hi}, {"t_end", t_end},
                                  {"points_per_trace", points_per_trace}});
  PlotSpec plot{"trajectories", PlotKind::Line, "Trajectories to fixed points", "x1", "x2", {}};

  std::int64_t trace = 0;
  for (std::size_t a = 0; a < grid; ++a) {
    for (std::size_t b = 0; b < grid; ++b, ++trace) {
      Vector input(n, 0.0);
      input[0] = lo + (hi - lo) * static_cast<double>(a) / static_cast<double>(grid - 1);
      input[1] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(grid - 1);
      const Trajectory tr = integrate(net, input, input, t_end, fcfg);
      const std::size_t stride = std::max<std::size_t>(1, (tr.t.size() + points_per_trace - 1) / points_per_trace);
      for (std::size_t k = 0; k < tr.t.size(); ++k) {
        if (k % stride != 0 && k + 1 != tr.t.size()) continue;
        std::vector<Cell> row{trace};
        append_values(row, input);
        row.emplace_back(tr.t[k]);
        append_values(row, tr.x[k]);
        rep.add_row(std::move(row));
      }
      plot.series.push_back({"trace " + std::to_string(trace), "x0", "x1", "trace", trace});
    }
  }
  rep.summary = {{"traces", static_cast<double>(trace)}};
  rep.plots.push_back(std::move(plot));
  return rep;
}

ExperimentReport competition_sweep(const RecurrentNet& net, const FeedForwardNet& ff,
                                   const PartitionSpec& spec, std::size_t steps,
                                   const FixedPointConfig& fcfg) {
  check_nets(net, ff, "competition_sweep");
  check_partition(net, spec, "competition_sweep");
  if (steps < 2) throw std::invalid_argument("competition_sweep: need at least two grid points");
  const std::size_t n = net.size();
  ExperimentReport rep;
  rep.name = "competition";
  rep.columns = {"step", "s", "verdict", "R_A", "R_B", "FF_A", "FF_B", "winner_R", "winner_FF",
                 "active_partitions_R", "agree"};
  append(rep.columns, indexed("r", n));
  append(rep.columns, indexed("ff", n));
  rep.config_snapshot = base_snapshot("competition", net, &ff, fcfg);
  rep.config_snapshot["spec"] = partition_spec_json(spec);
  rep.config_snapshot["steps"] = steps;

  const double ds = 1.0 / static_cast<double>(steps - 1);
  std::size_t discarded = 0, agreements = 0, converged = 0, switches = 0;
  std::int64_t max_active_away = 0;
  std::optional<std::string> last_winner;
  double switch_s = std::nan("");
  for (std::size_t k = 0; k < steps; ++k) {
    const double s = static_cast<double>(k) * ds;
    Vector input(n, 0.0);
    for (std::size_t q = 0; q < spec.per_partition; ++q) {
      input[q] = 1.0 - s;
      input[spec.per_partition + q] = s;
    }
    const Solve sol = solve(net, input, fcfg);
    const Vector y = forward(ff, input).act2;
    std::vector<Cell> row{static_cast<std::int64_t>(k), s, std::string(to_string(sol.verdict))};
    const auto wf = partition_winner(y, spec);
    if (sol.verdict == Verdict::Converged) {
      ++converged;
      const auto wr = partition_winner(sol.fr, spec);
      std::int64_t active = 0;
      for (std::size_t p = 0; p < spec.partitions; ++p) active += partition_sum(sol.fr, spec, p) >= 1e-9;
      if (std::abs(s - 0.5) > ds + 1e-12) max_active_away = std::max(max_active_away, active);
      const bool agree = wr == wf;
      agreements += agree;
      const std::string label = partition_label(wr);
      if (last_winner && *last_winner != label) {
        if (switches == 0) switch_s = s - 0.5 * ds;
        ++switches;
      }
      last_winner = label;
      row.insert(row.end(), {partition_sum(sol.fr, spec, 0), partition_sum(sol.fr, spec, 1),
                             partition_sum(y, spec, 0), partition_sum(y, spec, 1), label, partition_label(wf),
                             active, std::int64_t{agree}});
      append_values(row, sol.fr);
    } else {
      ++discarded;
      row.insert(row.end(), {kBlank, kBlank, partition_sum(y, spec, 0), partition_sum(y, spec, 1), kBlank,
                             partition_label(wf), kBlank, kBlank});
      append_blanks(row, n);
    }
    append_values(row, y);
    rep.add_row(std::move(row));
  }
  rep.summary = {{"steps", static_cast<double>(steps)},
                 {"discarded", static_cast<double>(discarded)},
                 {"winner_switches_R", static_cast<double>(switches)},
                 {"first_switch_s", switch_s},
                 {"agreement_fraction", converged ? static_cast<double>(agreements) / converged : std::nan("")},
                 {"max_active_partitions_away_from_half", static_cast<double>(max_active_away)}};
  rep.plots.push_back({"competition", PlotKind::Line, "Summed partition activity along the input mixture", "s",
                       "summed activity",
                       {{"recurrent A", "s", "R_A", "", std::int64_t{0}},
                        {"recurrent B", "s", "R_B", "", std::int64_t{0}},
                        {"feed-forward A", "s", "FF_A", "", std::int64_t{0}},
                        {"feed-forward B", "s", "FF_B", "", std::int64_t{0}}}});
  return rep;
}

ExperimentReport decision_boundary_experiment(const RecurrentNet& net, const FeedForwardNet& ff,
                                              const PartitionSpec& spec, std::size_t n_samples,
                                              std::uint64_t seed, double band, const FixedPointConfig& fcfg) {
  check_nets(net, ff, "decision_boundary_experiment");
  check_partition(net, spec, "decision_boundary_experiment");
  if (n_samples == 0) throw std::invalid_argument("decision_boundary_experiment: n_samples must be >= 1");
  if (!(band > 0)) throw std::invalid_argument("decision_boundary_experiment: band must be positive");
  const std::size_t n = net.size();
  const std::size_t excit = spec.partitions * spec.per_partition;
  ExperimentReport rep;
  rep.name = "decision_boundary";
  rep.columns = {"sample", "iota_A", "iota_B", "margin", "verdict", "winner_R", "winner_FF", "agree"};
  rep.config_snapshot = base_snapshot("decision-boundary", net, &ff, fcfg);
  rep.config_snapshot.update(
      json{{"spec", partition_spec_json(spec)}, {"n_samples", n_samples}, {"seed", seed}, {"band", band}});

  std::size_t discarded = 0, agreements = 0, converged = 0, rejects = 0;
  double max_margin_disagree = 0.0;
  std::uint64_t attempt = 0;
  while (rep.rows.size() < n_samples) {
    CounterRng rng(seed, derive_stream({kTagBoundary, attempt++}));
    Vector input(n, 0.0);
    double total = 0.0;
    for (std::size_t j = 0; j < excit; ++j) total += input[j] = rng.uniform();
    const double a = partition_sum(input, spec, 0), b = partition_sum(input, spec, 1);
    if (!(std::abs(a - b) <= band * total)) {
      if (++rejects >= 1000 * n_samples) throw DataExhausted("decision_boundary_experiment: band too narrow");
      continue;
    }
    const double margin = (a - b) / total;
    const Solve sol = solve(net, input, fcfg);
    const auto wf = partition_winner(forward(ff, input).act2, spec);
    std::vector<Cell> row{static_cast<std::int64_t>(rep.rows.size()), a, b, margin,
                          std::string(to_string(sol.verdict))};
    if (sol.verdict == Verdict::Converged) {
      ++converged;
      const auto wr = partition_winner(sol.fr, spec);
      const bool agree = wr == wf;
      agreements += agree;
      if (!agree) max_margin_disagree = std::max(max_margin_disagree, std::abs(margin));
      row.insert(row.end(), {partition_label(wr), partition_label(wf), std::int64_t{agree}});
    } else {
      ++discarded;
      row.insert(row.end(), {kBlank, partition_label(wf), kBlank});
    }
    rep.add_row(std::move(row));
  }
  rep.summary = {{"samples", static_cast<double>(n_samples)},
                 {"converged", static_cast<double>(converged)},
                 {"discarded", static_cast<double>(discarded)},
                 {"agreements", static_cast<double>(agreements)},
                 {"disagreements", static_cast<double>(converged - agreements)},
                 {"agreement_fraction", converged ? static_cast<double>(agreements) / converged : std::nan("")},
                 {"max_abs_margin_disagree", max_margin_disagree}};
  rep.plots.push_back({"decision_boundary", PlotKind::Scatter, "Winner agreement near the decision boundary",
                       "input to partition A", "input to partition B",
                       {{"agree", "iota_A", "iota_B", "agree", std::int64_t{1}},
                        {"disagree", "iota_A", "iota_B", "agree", std::int64_t{0}}}});
  return rep;
}

ExperimentReport sharpening_experiment(const RecurrentNet& net, const FeedForwardNet& ff, const RingSpec& spec,
                                       const std::vector<double>& kappas, std::size_t thetas_per_kappa,
                                       double gamma, std::uint64_t seed, const FixedPointConfig& fcfg) {
  check_nets(net, ff, "sharpening_experiment");
  check_ring(net, spec, "sharpening_experiment");
  ExperimentReport rep;
  rep.name = "sharpening";
  rep.columns = {"kappa",   "trial",    "Theta",    "verdict",  "width_in", "width_R", "width_FF",
                 "theta_in", "theta_R", "theta_FF", "err_R_FF", "err_Theta_R", "error"};
  rep.config_snapshot = base_snapshot("sharpening", net, &ff, fcfg);
  rep.config_snapshot.update(json{{"spec", ring_spec_json(spec)},
                                  {"kappas", kappas},
                                  {"thetas_per_kappa", thetas_per_kappa},
                                  {"gamma", gamma},
                                  {"seed", seed}});
  const double grid = spec.grid_spacing();
  for (std::size_t a = 0; a < kappas.size(); ++a) {
    std::vector<double> w_in, w_r, w_ff;
    std::size_t agree = 0, centered = 0, scored = 0, discarded = 0;
    for (std::size_t t = 0; t < thetas_per_kappa; ++t) {
      CounterRng rng(seed, derive_stream({kTagSharpen, a, t}));
      RingInputParams p;
      p.theta_big = rng.uniform(-std::numbers::pi, std::numbers::pi);
      p.kappa = kappas[a];
      p.gamma = gamma;
      p.zeta = 0.0;
      p.seed = rng.next_u64();
      const Vector input = ring_input(spec, p);
      const Solve sol = solve(net, input, fcfg);
      const Vector y = forward(ff, input).act2;
      const auto wi = tuning_width(input, spec);
      const auto wf = tuning_width(y, spec);
      const auto ti = try_peak(input, spec);
      const auto tf = try_peak(y, spec);
      std::vector<Cell> row{kappas[a], static_cast<std::int64_t>(t), p.theta_big,
                            std::string(to_string(sol.verdict)), opt_cell(wi)};
      if (wi) w_in.push_back(*wi);
      if (sol.verdict == Verdict::Converged) {
        const auto wr = tuning_width(sol.fr, spec);
        const auto tr = try_peak(sol.fr, spec);
        if (wr) w_r.push_back(*wr);
        if (wf) w_ff.push_back(*wf);
        std::optional<double> e_rf, e_tr;
        if (tr && tf) e_rf = circular_error(*tr, *tf);
        if (tr) e_tr = circular_error(p.theta_big, *tr);
        ++scored;
        agree += e_rf && std::abs(*e_rf) <= grid + 1e-12;
        centered += e_tr && std::abs(*e_tr) <= grid + 1e-12;
        row.insert(row.end(), {opt_cell(wr), opt_cell(wf), opt_cell(ti), opt_cell(tr), opt_cell(tf), opt_cell(e_rf),
                               opt_cell(e_tr), sample_error(y, sol.fr)});
      } else {
        ++discarded;
        row.insert(row.end(), {kBlank, opt_cell(wf), opt_cell(ti), kBlank, opt_cell(tf), kBlank, kBlank, kBlank});
      }
      rep.add_row(std::move(row));
    }
    const double k = kappas[a];
    rep.summary[key("kappa", k, "mean_width_in")] = mean_of(w_in);
    rep.summary[key("kappa", k, "mean_width_R")] = mean_of(w_r);
    rep.summary[key("kappa", k, "mean_width_FF")] = mean_of(w_ff);
    rep.summary[key("kappa", k, "discarded")] = static_cast<double>(discarded);
    rep.summary[key("kappa", k, "frac_R_FF_within_grid")] = scored ? static_cast<double>(agree) / scored : std::nan("");
    rep.summary[key("kappa", k, "frac_R_within_grid_of_Theta")] =
        scored ? static_cast<double>(centered) / scored : std::nan("");
  }
  rep.plots.push_back({"sharpening_widths", PlotKind::Scatter, "Tuning width of responses against input",
                       "input circular variance", "response circular variance",
                       {{"recurrent", "width_in", "width_R", "", std::int64_t{0}},
                        {"feed-forward", "width_in", "width_FF", "", std::int64_t{0}}}});
  return rep;
}

ExperimentReport ring_profiles(const RecurrentNet& net, const FeedForwardNet& ff, const RingSpec& spec,
                               const std::vector<double>& kappas, double theta, double gamma,
                               const FixedPointConfig& fcfg) {
  check_nets(net, ff, "ring_profiles");
  check_ring(net, spec, "ring_profiles");
  ExperimentReport rep;
  rep.name = "profiles";
  rep.columns = {"kappa", "neuron", "theta", "verdict", "input", "recurrent", "ff",
                 "input_norm", "recurrent_norm", "ff_norm"};
  rep.config_snapshot = base_snapshot("profiles", net, &ff, fcfg);
  rep.config_snapshot.update(
      json{{"spec", ring_spec_json(spec)}, {"kappas", kappas}, {"theta", theta}, {"gamma", gamma}});
  auto normalized = [&](const Vector& r, std::size_t j) -> Cell {
    const double m = *std::max_element(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(spec.excitatory()));
    return m > 0 ? Cell(std::max(r[j], 0.0) / m) : kBlank;
  };
  for (double kappa : kappas) {
    RingInputParams p;
    p.theta_big = theta;
    p.kappa = kappa;
    p.gamma = gamma;
    const Vector input = ring_input(spec, p);
    const Solve sol = solve(net, input, fcfg);
    const Vector y = forward(ff, input).act2;
    for (std::size_t j = 0; j < spec.excitatory(); ++j) {
      std::vector<Cell> row{kappa, static_cast<std::int64_t>(j), spec.theta(j), std::string(to_string(sol.verdict)),
                            input[j]};
      row.push_back(sol.fr.empty() ? kBlank : Cell(sol.fr[j]));
      row.emplace_back(y[j]);
      row.push_back(normalized(input, j));
      row.push_back(sol.fr.empty() ? kBlank : normalized(sol.fr, j));
      row.push_back(normalized(y, j));
      rep.add_row(std::move(row));
    }
    rep.plots.push_back({"profile_kappa_" + format_double(kappa), PlotKind::Polar,
                         "Normalized ring responses, kappa = " + format_double(kappa), "", "",
                         {{"input", "theta", "input_norm", "kappa", kappa},
                          {"recurrent", "theta", "recurrent_norm", "kappa", kappa},
                          {"feed-forward", "theta", "ff_norm", "kappa", kappa}}});
  }
  return rep;
}

ExperimentReport noise_experiment(const RecurrentNet& net, const FeedForwardNet& ff, const RingSpec& spec,
                                  const std::vector<double>& zetas, std::size_t trials, double kappa,
                                  double gamma, std::uint64_t seed, const FixedPointConfig& fcfg) {
  check_nets(net, ff, "noise_experiment");
  check_ring(net, spec, "noise_experiment");
  ExperimentReport rep;
  rep.name = "noise";
  rep.columns = {"zeta", "trial", "Theta", "verdict", "theta_R", "theta_FF", "err_R_FF", "err_Theta_R", "error"};
  rep.config_snapshot = base_snapshot("noise", net, &ff, fcfg);
  rep.config_snapshot.update(json{{"spec", ring_spec_json(spec)},
                                  {"zetas", zetas},
                                  {"trials", trials},
                                  {"kappa", kappa},
                                  {"gamma", gamma},
                                  {"seed", seed}});
  const double grid = spec.grid_spacing();
  for (double zeta : zetas) {
    std::vector<double> abs_theta, errors;
    std::size_t agree = 0, scored = 0, discarded = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      CounterRng rng(seed, derive_stream({kTagNoise, t}));
      RingInputParams p;
      p.theta_big = rng.uniform(-std::numbers::pi, std::numbers::pi);
      p.kappa = kappa;
      p.gamma = gamma;
      p.zeta = zeta;
      p.seed = rng.next_u64();
      const Vector input = ring_input(spec, p);
      const Solve sol = solve(net, input, fcfg);
      const Vector y = forward(ff, input).act2;
      const auto tf = try_peak(y, spec);
      std::vector<Cell> row{zeta, static_cast<std::int64_t>(t), p.theta_big, std::string(to_string(sol.verdict))};
      if (sol.verdict == Verdict::Converged) {
        const auto tr = try_peak(sol.fr, spec);
        std::optional<double> e_rf, e_tr;
        if (tr && tf) e_rf = circular_error(*tr, *tf);
        if (tr) {
          e_tr = circular_error(p.theta_big, *tr);
          abs_theta.push_back(std::abs(*e_tr));
        }
        const double e = sample_error(y, sol.fr);
        errors.push_back(e);
        ++scored;
        agree += e_rf && std::abs(*e_rf) <= grid + 1e-12;
        row.insert(row.end(), {opt_cell(tr), opt_cell(tf), opt_cell(e_rf), opt_cell(e_tr), e});
      } else {
        ++discarded;
        row.insert(row.end(), {kBlank, opt_cell(tf), kBlank, kBlank, kBlank});
      }
      rep.add_row(std::move(row));
    }
    rep.summary[key("zeta", zeta, "frac_R_FF_within_grid")] = scored ? static_cast<double>(agree) / scored : std::nan("");
    rep.summary[key("zeta", zeta, "median_abs_Theta_R")] = median_of(abs_theta);
    rep.summary[key("zeta", zeta, "mean_abs_Theta_R")] = mean_of(abs_theta);
    rep.summary[key("zeta", zeta, "mean_error")] = mean_of(errors);
    rep.summary[key("zeta", zeta, "median_error")] = median_of(errors);
    rep.summary[key("zeta", zeta, "discarded")] = static_cast<double>(discarded);
  }
  rep.plots.push_back({"noise_errors", PlotKind::Scatter, "Approximation error against noise amplitude", "zeta",
                       "mean absolute error", {{"trials", "zeta", "error", "", std::int64_t{0}}}});
  return rep;
}

ExperimentReport common_mode_experiment(const RecurrentNet& net, const FeedForwardNet& ff, const RingSpec& spec,
                                        const std::vector<double>& gammas, std::size_t trials, double kappa,
                                        double zeta, std::uint64_t seed, const FixedPointConfig& fcfg) {
  check_nets(net, ff, "common_mode_experiment");
  check_ring(net, spec, "common_mode_experiment");
  ExperimentReport rep;
  rep.name = "common_mode";
  rep.columns = {"gamma", "trial", "Theta", "verdict", "ff_scale", "rec_scale", "theta_R", "theta_FF", "err_R_FF",
                 "error"};
  rep.config_snapshot = base_snapshot("common-mode", net, &ff, fcfg);
  rep.config_snapshot.update(json{{"spec", ring_spec_json(spec)},
                                  {"gammas", gammas},
                                  {"trials", trials},
                                  {"kappa", kappa},
                                  {"zeta", zeta},
                                  {"seed", seed}});
  PlotSpec plot{"common_mode", PlotKind::Scatter, "Error against feed-forward response scale", "max ff output",
                "mean absolute error", {}};
  for (double gamma : gammas) {
    std::vector<double> errors;
    std::size_t discarded = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      CounterRng rng(seed, derive_stream({kTagCommon, t}));
      RingInputParams p;
      p.theta_big = rng.uniform(-std::numbers::pi, std::numbers::pi);
      p.kappa = kappa;
      p.gamma = gamma;
      p.zeta = zeta;
      p.seed = rng.next_u64();
      const Vector input = ring_input(spec, p);
      const Solve sol = solve(net, input, fcfg);
      const Vector y = forward(ff, input).act2;
      const double ff_scale = *std::max_element(y.begin(), y.end());
      const auto tf = try_peak(y, spec);
      std::vector<Cell> row{gamma, static_cast<std::int64_t>(t), p.theta_big, std::string(to_string(sol.verdict)),
                            ff_scale};
      if (sol.verdict == Verdict::Converged) {
        const auto tr = try_peak(sol.fr, spec);
        std::optional<double> e_rf;
        if (tr && tf) e_rf = circular_error(*tr, *tf);
        const double e = sample_error(y, sol.fr);
        errors.push_back(e);
        row.insert(row.end(), {*std::max_element(sol.fr.begin(), sol.fr.end()), opt_cell(tr), opt_cell(tf),
                               opt_cell(e_rf), e});
      } else {
        ++discarded;
        row.insert(row.end(), {kBlank, kBlank, opt_cell(tf), kBlank, kBlank});
      }
      rep.add_row(std::move(row));
    }
    rep.summary[key("gamma", gamma, "mean_error")] = mean_of(errors);
    rep.summary[key("gamma", gamma, "median_error")] = median_of(errors);
    rep.summary[key("gamma", gamma, "discarded")] = static_cast<double>(discarded);
    plot.series.push_back({"gamma " + format_double(gamma), "ff_scale", "error", "gamma", gamma});
  }
  rep.plots.push_back(std::move(plot));
  return rep;
}

ExperimentReport generalization_experiment(const RecurrentNet& net, const FeedForwardNet& ff, double scale_max,
                                           std::size_t n_samples, std::uint64_t seed,
                                           const FixedPointConfig& fcfg) {
  check_nets(net, ff, "generalization_experiment");
  if (net.size() != 2) throw DimensionMismatch("generalization_experiment: needs a 2-neuron net");
  if (!(scale_max >= 1.0) || n_samples == 0) {
    throw std::invalid_argument("generalization_experiment: need scale_max >= 1 and n_samples >= 1");
  }
  ExperimentReport rep;
  rep.name = "generalization";
  rep.columns = {"region", "scale", "sample", "i0", "i1", "verdict", "f0", "f1", "ff0", "ff1", "error"};
  rep.config_snapshot = base_snapshot("generalization", net, &ff, fcfg);
  rep.config_snapshot.update(json{{"scale_max", scale_max}, {"n_samples", n_samples}, {"seed", seed}});

  std::vector<double> scales{0.0};  // 0 marks the interior baseline
  for (double s = 1.0; s <= scale_max + 1e-9; s += 0.5) scales.push_back(s);
  for (std::size_t g = 0; g < scales.size(); ++g) {
    const double s = scales[g];
    const bool interior = g == 0;
    std::vector<double> errors;
    std::size_t discarded = 0;
    for (std::size_t k = 0; k < n_samples; ++k) {
      CounterRng rng(seed, derive_stream({kTagShell, g, k}));
      Vector input(2);
      if (interior) {
        input[0] = rng.uniform(-1.0, 1.0);
        input[1] = rng.uniform(-1.0, 1.0);
      } else {
        const double u = rng.uniform(0.0, 4.0);
        const int side = std::min(3, static_cast<int>(u));
        const double pos = -s + 2.0 * s * (u - side);
        switch (side) {
          case 0: input = {pos, -s}; break;
          case 1: input = {s, pos}; break;
          case 2: input = {-pos, s}; break;
          default: input = {-s, -pos}; break;
        }
      }
      const Solve sol = solve(net, input, fcfg);
      const Vector y = forward(ff, input).act2;
      std::vector<Cell> row{std::string(interior ? "interior" : "shell"), s, static_cast<std::int64_t>(k), input[0],
                            input[1], std::string(to_string(sol.verdict))};
      if (sol.verdict == Verdict::Converged) {
        const double e = sample_error(y, sol.fr);
        errors.push_back(e);
        row.insert(row.end(), {sol.f[0], sol.f[1], y[0], y[1], e});
      } else {
        ++discarded;
        row.insert(row.end(), {kBlank, kBlank, y[0], y[1], kBlank});
      }
      rep.add_row(std::move(row));
    }
    const std::string group = interior ? std::string("interior/") : "scale=" + format_double(s) + "/";
    rep.summary[group + "mean_error"] = mean_of(errors);
    rep.summary[group + "median_error"] = median_of(errors);
    rep.summary[group + "discarded"] = static_cast<double>(discarded);
  }
  rep.plots.push_back({"generalization", PlotKind::Scatter, "Error on square shells around the training region",
                       "shell half-width (0 = interior)", "mean absolute error",
                       {{"samples", "scale", "error", "", std::int64_t{0}}}});
  return rep;
}

ExperimentReport threshold_error_experiment(const RecurrentNet& net, const FeedForwardNet& ff,
                                            std::size_t n_samples, std::uint64_t seed,
                                            const FixedPointConfig& fcfg) {
  check_nets(net, ff, "threshold_error_experiment");
  if (net.size() != 2) throw DimensionMismatch("threshold_error_experiment: needs a 2-neuron net");
  ExperimentReport rep;
  rep.name = "threshold_error";
  rep.columns = {"sample", "i0", "i1", "verdict", "f0", "f1", "min_f", "error", "category"};
  rep.config_snapshot = base_snapshot("threshold-error", net, &ff, fcfg);
  rep.config_snapshot.update(json{{"n_samples", n_samples}, {"seed", seed}});

  std::map<std::string, std::vector<double>> by_cat;
  std::map<std::string, std::size_t> counts{{"above", 0}, {"near-threshold", 0}, {"other", 0}, {"discarded", 0}};
  for (std::size_t k = 0; k < n_samples; ++k) {
    CounterRng rng(seed, derive_stream({kTagThresh, k}));
    Vector input{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const Solve sol = solve(net, input, fcfg);
    std::vector<Cell> row{static_cast<std::int64_t>(k), input[0], input[1], std::string(to_string(sol.verdict))};
    std::string cat = "discarded";
    if (sol.verdict == Verdict::Converged) {
      const bool near = std::any_of(sol.f.begin(), sol.f.end(), [](double v) { return v > -0.1 && v < 0.1; });
      const bool above = std::all_of(sol.f.begin(), sol.f.end(), [](double v) { return v > 0.5; });
      cat = near ? "near-threshold" : above ? "above" : "other";
      const double e = sample_error(forward(ff, input).act2, sol.fr);
      by_cat[cat].push_back(e);
      row.insert(row.end(), {sol.f[0], sol.f[1], std::min(sol.f[0], sol.f[1]), e});
    } else {
      append_blanks(row, 4);
    }
    ++counts[cat];
    row.emplace_back(cat);
    rep.add_row(std::move(row));
  }
  for (const auto& [cat, count] : counts) {
    rep.summary[cat + "/count"] = static_cast<double>(count);
    if (cat == "discarded") continue;
    const auto& e = by_cat[cat];
    rep.summary[cat + "/mean_error"] = mean_of(e);
    rep.summary[cat + "/median_error"] = median_of(e);
    rep.summary[cat + "/p90_error"] = quantile_of(e, 0.9);
    rep.summary[cat + "/max_error"] = e.empty() ? std::nan("") : *std::max_element(e.begin(), e.end());
  }
  rep.plots.push_back({"threshold_error", PlotKind::Scatter, "Error against the lower fixed-point coordinate",
                       "min_j f_j", "mean absolute error",
                       {{"near-threshold", "min_f", "error", "category", std::string("near-threshold")},
                        {"above", "min_f", "error", "category", std::string("above")},
                        {"other", "min_f", "error", "category", std::string("other")}}});
  return rep;
}

ExperimentReport rerun_experiment(const json& snapshot) {
  const auto name = snapshot.at("experiment").get<std::string>();
  const RecurrentNet net = recurrent_from_json(snapshot.at("recurrent"));
  const FixedPointConfig fcfg = fixed_point_config_from_json(snapshot.at("fixed_point"));
  if (name == "trajectories") {
    return trajectory_experiment(net, snapshot.at("grid"), snapshot.at("lo"), snapshot.at("hi"),
                                 snapshot.at("t_end"), snapshot.at("points_per_trace"), fcfg);
  }
  const FeedForwardNet ff = feedforward_from_json(snapshot.at("ff"));
  const auto& s = snapshot;
  if (name == "mapping") {
    return mapping_experiment(net, ff, sampler_from_json(s.at("sampler")), s.at("n_samples"), s.at("seed"), fcfg);
  }
  if (name == "competition") {
    return competition_sweep(net, ff, partition_spec_from(s.at("spec")), s.at("steps"), fcfg);
  }
  if (name == "decision-boundary") {
    return decision_boundary_experiment(net, ff, partition_spec_from(s.at("spec")), s.at("n_samples"), s.at("seed"),
                                        s.at("band"), fcfg);
  }
  if (name == "sharpening") {
    return sharpening_experiment(net, ff, ring_spec_from(s.at("spec")), s.at("kappas"), s.at("thetas_per_kappa"),
                                 s.at("gamma"), s.at("seed"), fcfg);
  }
  if (name == "profiles") {
    return ring_profiles(net, ff, ring_spec_from(s.at("spec")), s.at("kappas"), s.at("theta"), s.at("gamma"), fcfg);
  }
  if (name == "noise") {
    return noise_experiment(net, ff, ring_spec_from(s.at("spec")), s.at("zetas"), s.at("trials"), s.at("kappa"),
                            s.at("gamma"), s.at("seed"), fcfg);
  }
  if (name == "common-mode") {
    return common_mode_experiment(net, ff, ring_spec_from(s.at("spec")), s.at("gammas"), s.at("trials"),
                                  s.at("kappa"), s.at("zeta"), s.at("seed"), fcfg);
  }
  if (name == "generalization") {
    return generalization_experiment(net, ff, s.at("scale_max"), s.at("n_samples"), s.at("seed"), fcfg);
  }
  if (name == "threshold-error") {
    return threshold_error_experiment(net, ff, s.at("n_samples"), s.at("seed"), fcfg);
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

}  // namespace fpnet
