#include "fpnet/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <filesystem>
#include <sstream>

#include "fpnet/errors.hpp"
#include "fpnet/experiments.hpp"
#include "fpnet/generators.hpp"
#include "fpnet/io.hpp"
#include "fpnet/presets.hpp"
#include "fpnet/svg.hpp"

#ifndef FPNET_VERSION
#define FPNET_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;

namespace fpnet {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

Vector parse_vector(const std::string& text) {
  Vector v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw UsageError("empty entry in vector '" + text + "'");
    double x = 0;
    const char* first = item.data() + b;
    const char* last = item.data() + e + 1;
    if (*first == '+') ++first;
    auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last) throw UsageError("not a number: '" + item + "'");
    v.push_back(x);
  }
  if (v.empty()) throw UsageError("empty vector");
  return v;
}

RecurrentNet load_recurrent(const std::string& path) {
  const json j = read_json_file(path);
  if (j.value("kind", "") != "recurrent") throw UsageError(path + " is not a recurrent net file");
  return recurrent_from_json(j);
}

FeedForwardNet load_feedforward(const std::string& path) {
  const json j = read_json_file(path);
  if (j.value("kind", "") != "feedforward") throw UsageError(path + " is not a feed-forward net file");
  return feedforward_from_json(j);
}

void emit_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << j.dump(2) << "\n";
  } else {
    write_json_file(path, j);
  }
}

// Options shared by `dataset` and `train` for describing the input sampler.
struct SamplerOptions {
  std::string kind = "uniform";
  double lo = -1.0, hi = 1.0;
  std::size_t driven = 0;  // 0: all neurons
  double kappa = -1.0;     // >= 0: fixed kappa
  double kappa_lo = 0.0, kappa_hi = 8.0;
  double gamma = 0.5, zeta = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--sampler", kind, "uniform or ring")->check(CLI::IsMember({"uniform", "ring"}));
    cmd->add_option("--lo", lo, "uniform sampler lower bound")->capture_default_str();
    cmd->add_option("--hi", hi, "uniform sampler upper bound")->capture_default_str();
    cmd->add_option("--driven", driven, "number of leading neurons receiving input (default: all)");
    cmd->add_option("--kappa", kappa, "fixed ring tuning sharpness (default: drawn from [kappa-lo, kappa-hi])");
    cmd->add_option("--kappa-lo", kappa_lo)->capture_default_str();
    cmd->add_option("--kappa-hi", kappa_hi)->capture_default_str();
    cmd->add_option("--gamma", gamma, "ring common-mode input")->capture_default_str();
    cmd->add_option("--zeta", zeta, "ring noise amplitude")->capture_default_str();
  }

  InputSampler build(const RecurrentNet& net) const {
    if (kind == "uniform") {
      const std::size_t d = driven == 0 ? net.size() : driven;
      if (d > net.size()) throw UsageError("--driven exceeds the network size");
      if (!(hi >= lo)) throw UsageError("--hi must be >= --lo");
      return UniformSampler{net.size(), lo, hi, d};
    }
    if (net.size() < 3) throw UsageError("ring sampler needs a ring net (n >= 3)");
    RingSampler r;
    r.spec.n = net.size();
    r.kappa_lo = kappa >= 0 ? kappa : kappa_lo;
    r.kappa_hi = kappa >= 0 ? kappa : kappa_hi;
    r.gamma = gamma;
    r.zeta = zeta;
    if (!(r.kappa_hi >= r.kappa_lo) || r.kappa_lo < 0 || r.zeta < 0) throw UsageError("invalid ring sampler range");
    return r;
  }
};

json parse_override_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;
  }
}

json overrides_from(const std::vector<std::string>& sets) {
  json o = json::object();
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key.path=value, got '" + s + "'");
    json* node = &o;
    std::stringstream path(s.substr(0, eq));
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(path, part, '.')) parts.push_back(part);
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) node = &(*node)[parts[k]];
    (*node)[parts.back()] = parse_override_value(s.substr(eq + 1));
  }
  return o;
}

json write_preset_outputs(const PresetOutput& po, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<std::string> files;
  for (const auto& rep : po.reports) {
    write_text_file(dir / (rep.name + ".csv"), to_csv(rep));
    files.push_back(rep.name + ".csv");
    for (const auto& plot : rep.plots) {
      write_text_file(dir / (plot.name + ".svg"), render_svg(rep, plot));
      files.push_back(plot.name + ".svg");
    }
  }
  json meta{{"generator", po.preset}, {"params", po.config.at("net")}};
  write_json_file(dir / "net.json", net_to_json(po.net, meta));
  files.push_back("net.json");
  if (po.ff) {
    write_json_file(dir / "ff.json", net_to_json(*po.ff, json{{"trained_on", po.preset}}));
    files.push_back("ff.json");
  }
  write_json_file(dir / "summary.json", po.summary);
  files.push_back("summary.json");
  json digests = json::object();
  for (const auto& f : files) digests[f] = sha256_file(dir / f);
  return digests;
}

json seeds_of(const json& config) {
  json s{{"train", config.at("train").at("seed")}};
  if (config.at("eval").contains("seed")) s["eval"] = config.at("eval").at("seed");
  return s;
}

TrainLogger progress_logger(bool verbose, std::ostream& err) {
  if (!verbose) return {};
  return [&err](const TrainLogRecord& r) {
    if (r.iteration % 1000 == 0) {
      err << "iteration " << r.iteration << " smoothed loss " << format_double(r.smoothed_loss) << "\n";
    }
  };
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fixed points of linear-threshold recurrent networks and their feed-forward approximations", "fpnet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FPNET_VERSION);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a recurrent network");
  gen->require_subcommand(1);
  std::string gen_out;
  std::uint64_t gen_seed = 0;
  std::size_t gen_n = 2;
  auto* gen_random = gen->add_subcommand("random", "W_ji ~ U(-2, 2)");
  gen_random->add_option("--n", gen_n, "number of neurons")->capture_default_str();
  gen_random->add_option("--seed", gen_seed, "random seed")->capture_default_str();
  gen_random->add_option("--out", gen_out, "output file (default: stdout)");
  PartitionSpec pspec;
  auto* gen_part = gen->add_subcommand("partition", "Planted-partition network with one inhibitory neuron");
  gen_part->add_option("--partitions", pspec.partitions)->capture_default_str();
  gen_part->add_option("--per-partition", pspec.per_partition)->capture_default_str();
  gen_part->add_option("--w-e", pspec.w_e, "excitatory weight")->capture_default_str();
  gen_part->add_option("--w-i", pspec.w_i, "inhibitory weight")->capture_default_str();
  gen_part->add_option("--out", gen_out, "output file (default: stdout)");
  RingSpec rspec;
  auto* gen_ring = gen->add_subcommand("ring", "Ring network with one inhibitory neuron");
  gen_ring->add_option("--n", rspec.n, "neurons including the inhibitory one")->capture_default_str();
  gen_ring->add_option("--w-e", rspec.w_e, "total excitatory weight per neuron")->capture_default_str();
  gen_ring->add_option("--w-i", rspec.w_i, "total inhibitory weight")->capture_default_str();
  gen_ring->add_option("--out", gen_out, "output file (default: stdout)");

  // fixpoint
  auto* fix = app.add_subcommand("fixpoint", "Find the fixed point for one input");
  std::string net_path, input_text;
  fix->add_option("--net", net_path, "recurrent net file")->required();
  fix->add_option("--input", input_text, "comma-separated input vector")->required();

  // dataset
  auto* dset = app.add_subcommand("dataset", "Sample inputs and their rectified fixed points");
  SamplerOptions sopt;
  std::size_t count = 500;
  std::uint64_t seed = 0;
  std::string out_path;
  dset->add_option("--net", net_path, "recurrent net file")->required();
  sopt.attach(dset);
  dset->add_option("--count", count, "number of converged samples")->capture_default_str();
  dset->add_option("--seed", seed, "random seed")->capture_default_str();
  dset->add_option("--out", out_path, "output file (default: stdout)");

  // train
  auto* trn = app.add_subcommand("train", "Train a feed-forward approximation");
  TrainConfig tcfg;
  AdamConfig acfg;
  std::string log_path, dataset_path, filter = "all-positive";
  bool verbose = false;
  trn->add_option("--net", net_path, "recurrent net file")->required();
  trn->add_option("--seed", tcfg.seed, "random seed")->capture_default_str();
  trn->add_option("--batch", tcfg.batch_size, "batch size M")->capture_default_str();
  trn->add_option("--max-iter", tcfg.max_iterations)->capture_default_str();
  trn->add_option("--smoothing", tcfg.smoothing_window, "loss smoothing window")->capture_default_str();
  trn->add_option("--rel-tol", tcfg.convergence_rel_tol, "stopping tolerance")->capture_default_str();
  trn->add_option("--jitter", tcfg.jitter_std, "std of zero-gradient jitter")->capture_default_str();
  trn->add_option("--alpha", acfg.alpha, "Adam step size")->capture_default_str();
  trn->add_option("--filter", filter, "training target filter")
      ->check(CLI::IsMember({"all-positive", "any-positive", "none"}))
      ->capture_default_str();
  trn->add_option("--dataset", dataset_path, "train on a fixed dataset instead of fresh batches");
  sopt.attach(trn);
  trn->add_option("--out", out_path, "output ff net file (default: stdout)");
  trn->add_option("--log", log_path, "per-iteration loss CSV");
  trn->add_flag("--verbose", verbose, "progress on stderr");

  // eval
  auto* evl = app.add_subcommand("eval", "Compare a feed-forward net with a dataset");
  std::string ff_path;
  evl->add_option("--net", net_path, "recurrent net file")->required();
  evl->add_option("--ff", ff_path, "feed-forward net file")->required();
  evl->add_option("--dataset", dataset_path, "dataset file")->required();
  evl->add_option("--out", out_path, "report CSV (default: stdout)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a preset pipeline end to end");
  std::string preset, out_dir;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> exp_seed;
  std::optional<std::size_t> exp_iters;
  exp->add_option("name", preset, "preset")->required()->check(CLI::IsMember(preset_names()));
  exp->add_option("--out", out_dir, "output directory")->required();
  exp->add_option("--seed", exp_seed, "training seed (default from preset)");
  exp->add_option("--max-iter", exp_iters, "training iteration cap (default from preset)");
  exp->add_option("--set", sets, "config override key.path=value (repeatable)");
  exp->add_flag("--verbose", verbose, "progress on stderr");
  bool show_config = false;
  exp->add_flag("--show-config", show_config, "print the effective config and exit");

  // rerun
  auto* rer = app.add_subcommand("rerun", "Re-run a preset from its manifest and compare outputs");
  std::string manifest_path;
  rer->add_option("--manifest", manifest_path, "manifest.json of an earlier run")->required();
  rer->add_option("--out", out_dir, "output directory")->required();
  rer->add_flag("--verbose", verbose, "progress on stderr");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << FPNET_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (gen->parsed()) {
    RecurrentNet net(Matrix(1, 1));
    json params;
    if (gen_random->parsed()) {
      if (gen_n == 0) throw UsageError("--n must be >= 1");
      net = gen_random_net(gen_n, gen_seed);
      params = {{"n", gen_n}};
      emit_json(net_to_json(net, {{"generator", "random"}, {"seed", gen_seed}, {"params", params}}), gen_out, out);
    } else if (gen_part->parsed()) {
      net = gen_partition_net(pspec);
      params = {{"partitions", pspec.partitions}, {"per_partition", pspec.per_partition},
                {"w_e", pspec.w_e},               {"w_i", pspec.w_i}};
      emit_json(net_to_json(net, {{"generator", "partition"}, {"seed", nullptr}, {"params", params}}), gen_out, out);
    } else {
      net = gen_ring_net(rspec);
      params = {{"n", rspec.n}, {"w_e", rspec.w_e}, {"w_i", rspec.w_i}};
      emit_json(net_to_json(net, {{"generator", "ring"}, {"seed", nullptr}, {"params", params}}), gen_out, out);
    }
    return 0;
  }

  if (fix->parsed()) {
    const RecurrentNet net = load_recurrent(net_path);
    const Vector input = parse_vector(input_text);
    if (input.size() != net.size()) throw UsageError("input length does not match the network size");
    const auto o = find_fixed_point(net, input);
    json j{{"verdict", to_string(o.verdict)},
           {"f", o.f ? json(*o.f) : json(nullptr)},
           {"f_rectified", o.f ? json(relu(*o.f)) : json(nullptr)},
           {"lambda_plus", o.lambda_plus ? json(*o.lambda_plus) : json(nullptr)},
           {"t_solved", o.t_solved},
           {"diagnostic", o.diagnostic}};
    out << j.dump() << "\n";
    return 0;
  }

  if (dset->parsed()) {
    const RecurrentNet net = load_recurrent(net_path);
    if (count == 0) throw UsageError("--count must be >= 1");
    const Dataset ds = build_dataset(net, sopt.build(net), count, FixedPointConfig{}, seed);
    emit_json(to_json(ds), out_path, out);
    return 0;
  }

  if (trn->parsed()) {
    const RecurrentNet net = load_recurrent(net_path);
    tcfg.filter = target_filter_from_string(filter);
    if (tcfg.batch_size == 0 || tcfg.smoothing_window == 0) throw UsageError("--batch and --smoothing must be >= 1");
    const FeedForwardNet ff0 = init_ffnet(net.size(), tcfg.seed);
    TrainReport rep;
    json source;
    if (!dataset_path.empty()) {
      const Dataset ds = dataset_from_json(read_json_file(dataset_path));
      std::vector<TrainingPair> pairs;
      for (std::size_t k = 0; k < ds.inputs.size(); ++k) {
        if (ds.inputs[k].size() != net.size()) throw UsageError("dataset does not match the network size");
        if (tcfg.filter == TargetFilter::AllPositive && !ds.all_positive[k]) continue;
        if (tcfg.filter == TargetFilter::AnyPositive && !passes(TargetFilter::AnyPositive, ds.targets[k])) continue;
        pairs.push_back({ds.inputs[k], ds.targets[k]});
      }
      rep = train_on_dataset(pairs, ff0, tcfg, acfg, progress_logger(verbose, err));
      source = {{"dataset", dataset_path}};
    } else {
      const InputSampler sampler = sopt.build(net);
      rep = train(net, ff0, sampler, tcfg, acfg, FixedPointConfig{}, progress_logger(verbose, err));
      source = {{"sampler", to_json(sampler)}};
    }
    if (!log_path.empty()) write_text_file(log_path, to_csv(training_report(rep)));
    json meta{{"train", to_json(tcfg)},
              {"adam", to_json(acfg)},
              {"source", source},
              {"stop_reason", to_string(rep.stop_reason)},
              {"iterations_run", rep.iterations_run},
              {"best_iteration", rep.best_iteration},
              {"best_smoothed_loss", rep.best_smoothed_loss}};
    emit_json(net_to_json(rep.best_net, meta), out_path, out);
    if (!out_path.empty() && out_path != "-") {
      out << json{{"stop_reason", to_string(rep.stop_reason)},
                  {"iterations_run", rep.iterations_run},
                  {"best_smoothed_loss", rep.best_smoothed_loss}}
                 .dump()
          << "\n";
    }
    return 0;
  }

  if (evl->parsed()) {
    const RecurrentNet net = load_recurrent(net_path);
    const FeedForwardNet ff = load_feedforward(ff_path);
    const Dataset ds = dataset_from_json(read_json_file(dataset_path));
    if (ff.n_in() != net.size() || ff.n_out() != net.size()) throw UsageError("ff net does not match the net");
    ExperimentReport rep;
    rep.name = "eval";
    const std::size_t n = net.size();
    rep.columns = {"sample"};
    for (const char* p : {"i", "target", "ff"}) {
      for (std::size_t j = 0; j < n; ++j) rep.columns.push_back(p + std::to_string(j));
    }
    rep.columns.push_back("all_positive");
    rep.columns.push_back("error");
    const ApproxError ae = approx_error(ff, ds);
    for (std::size_t k = 0; k < ds.inputs.size(); ++k) {
      if (ds.inputs[k].size() != n) throw UsageError("dataset does not match the network size");
      std::vector<Cell> row{static_cast<std::int64_t>(k)};
      for (double v : ds.inputs[k]) row.emplace_back(v);
      for (double v : ds.targets[k]) row.emplace_back(v);
      for (double v : forward(ff, ds.inputs[k]).act2) row.emplace_back(v);
      row.emplace_back(std::int64_t{ds.all_positive[k]});
      row.emplace_back(ae.per_sample[k]);
      rep.add_row(std::move(row));
    }
    if (out_path.empty() || out_path == "-") {
      out << to_csv(rep);
    } else {
      write_text_file(out_path, to_csv(rep));
      out << json{{"samples", ds.inputs.size()}, {"mean_error", ae.mean}}.dump() << "\n";
    }
    return 0;
  }

  if (exp->parsed()) {
    json overrides = overrides_from(sets);
    if (exp_seed) overrides["train"]["seed"] = *exp_seed;
    if (exp_iters) overrides["train"]["max_iterations"] = *exp_iters;
    json config;
    try {
      config = merge_preset_config(preset, overrides);
      (void)train_config_from_json(config.at("train"));
      (void)fixed_point_config_from_json(config.at("fixed_point"));
      (void)sampler_from_json(config.at("sampler"));
    } catch (const json::exception& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
    if (show_config) {
      out << config.dump(2) << "\n";
      return 0;
    }
    const PresetOutput po = run_preset(preset, config, progress_logger(verbose, err));
    const json digests = write_preset_outputs(po, out_dir);
    json manifest{{"program", "fpnet"},
                  {"version", FPNET_VERSION},
                  {"command", args},
                  {"preset", preset},
                  {"config", config},
                  {"seeds", seeds_of(config)},
                  {"inputs", json::object()},
                  {"outputs", digests}};
    write_json_file(fs::path(out_dir) / "manifest.json", manifest);
    out << json{{"preset", preset}, {"out", out_dir}, {"summary", po.summary}}.dump() << "\n";
    return 0;
  }

  if (rer->parsed()) {
    const json manifest = read_json_file(manifest_path);
    const auto name = manifest.at("preset").get<std::string>();
    const json& config = manifest.at("config");
    const PresetOutput po = run_preset(name, config, progress_logger(verbose, err));
    const json digests = write_preset_outputs(po, out_dir);
    json rerun_manifest{{"program", "fpnet"},
                        {"version", FPNET_VERSION},
                        {"command", args},
                        {"preset", name},
                        {"config", config},
                        {"seeds", seeds_of(config)},
                        {"inputs", json{{fs::path(manifest_path).filename().string(), sha256_file(manifest_path)}}},
                        {"outputs", digests}};
    write_json_file(fs::path(out_dir) / "manifest.json", rerun_manifest);
    json files = json::object();
    bool identical = true;
    for (const auto& [file, digest] : manifest.at("outputs").items()) {
      const bool same = digests.contains(file) && digests.at(file) == digest;
      identical = identical && same;
      files[file] = same ? "identical" : "differs";
    }
    out << json{{"preset", name}, {"identical", identical}, {"files", files}}.dump() << "\n";
    if (!identical) throw ComputationError("NotReproduced", "rerun outputs differ from the manifest");
    return 0;
  }
  return 1;
}

void error_line(std::ostream& err, const std::string& code, const std::string& message) {
  err << json{{"error", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return run(args, out, err);
  } catch (const ComputationError& e) {
    error_line(err, e.code(), e.what());
    return 2;
  } catch (const DimensionMismatch& e) {
    error_line(err, "DimensionMismatch", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    error_line(err, "UsageError", e.what());
    return 1;
  } catch (const json::exception& e) {
    error_line(err, "UsageError", e.what());
    return 1;
  } catch (const std::exception& e) {
    error_line(err, "IOError", e.what());
    return 1;
  }
}

}  // namespace fpnet
