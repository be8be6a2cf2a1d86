#include "fpnet/presets.hpp"

#include <stdexcept>

#include "fpnet/generators.hpp"

namespace fpnet {

namespace {

json fixed_point_defaults() { return to_json(FixedPointConfig{}); }

json train_defaults(std::size_t max_iterations, TargetFilter filter, double rel_tol = 1e-4) {
  TrainConfig t;
  t.seed = 1;
  t.max_iterations = max_iterations;
  t.filter = filter;
  t.convergence_rel_tol = rel_tol;
  return to_json(t);
}

json two_neuron(const Matrix& w, const json& eval) {
  return json{{"net", {{"kind", "matrix"}, {"weights", to_json(w)}}},
              {"sampler", to_json(UniformSampler{2, -1.0, 1.0, 2})},
              {"train", train_defaults(50000, TargetFilter::AllPositive)},
              {"adam", to_json(AdamConfig{})},
              {"fixed_point", fixed_point_defaults()},
              {"eval", eval}};
}

json partition_preset(const json& eval) {
  const PartitionSpec spec{2, 2, 2.5, 8.0};
  return json{{"net", {{"kind", "partition"},
                       {"partitions", spec.partitions},
                       {"per_partition", spec.per_partition},
                       {"w_e", spec.w_e},
                       {"w_i", spec.w_i}}},
              {"sampler", to_json(UniformSampler{spec.size(), 0.0, 1.0, spec.size() - 1})},
              // the winner-take-all loss is too noisy for the relative stop rule, it
              // fires within the first thousand batches; train a fixed budget instead
              {"train", train_defaults(20000, TargetFilter::AnyPositive, 0.0)},
              {"adam", to_json(AdamConfig{})},
              {"fixed_point", fixed_point_defaults()},
              {"eval", eval}};
}

json ring_preset(const json& eval) {
  RingSpec spec;
  spec.n = 20;
  RingSampler sampler{spec, 0.0, 8.0, 0.5, 0.0};
  return json{{"net", {{"kind", "ring"}, {"n", spec.n}, {"w_e", spec.w_e}, {"w_i", spec.w_i}}},
              {"sampler", to_json(sampler)},
              // same early-stop problem as the partition presets
              {"train", train_defaults(20000, TargetFilter::AnyPositive, 0.0)},
              {"adam", to_json(AdamConfig{})},
              {"fixed_point", fixed_point_defaults()},
              {"eval", eval}};
}

void check_against(const json& defaults, const json& overrides, const std::string& path) {
  if (!overrides.is_object()) throw std::invalid_argument("config" + path + ": expected an object");
  for (const auto& [k, v] : overrides.items()) {
    if (!defaults.contains(k)) throw std::invalid_argument("config: unknown key '" + path + "/" + k + "'");
    if (k == "sampler" && path.empty()) continue;
    if (defaults.at(k).is_object()) check_against(defaults.at(k), v, path + "/" + k);
  }
}

PartitionSpec partition_spec_of(const json& net) {
  return PartitionSpec{net.at("partitions").get<std::size_t>(), net.at("per_partition").get<std::size_t>(),
                       net.at("w_e").get<double>(), net.at("w_i").get<double>()};
}

RingSpec ring_spec_of(const json& net) {
  RingSpec spec;
  spec.n = net.at("n").get<std::size_t>();
  spec.w_e = net.at("w_e").get<double>();
  spec.w_i = net.at("w_i").get<double>();
  return spec;
}

json training_summary(const TrainReport& rep) {
  return json{{"iterations_run", rep.iterations_run},
              {"stop_reason", to_string(rep.stop_reason)},
              {"best_iteration", rep.best_iteration},
              {"best_smoothed_loss", rep.best_smoothed_loss}};
}

ExperimentReport with_line_plot(ExperimentReport rep, const std::string& plot, const std::string& title,
                                const std::string& x, const std::vector<std::pair<std::string, std::string>>& ys,
                                const std::string& y_label) {
  PlotSpec spec{plot, PlotKind::Line, title, x, y_label, {}};
  for (const auto& [label, col] : ys) spec.series.push_back({label, x, col, "", std::int64_t{0}});
  rep.plots.push_back(std::move(spec));
  return rep;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2",       "fig4",  "competition", "decision-boundary",
                                              "sharpening", "noise", "common-mode", "generalization",
                                              "threshold-error"};
  return names;
}

json default_preset_config(const std::string& name) {
  if (name == "fig2") {
    return two_neuron(Matrix{{0.4, 0.2}, {0.8, 0.5}},
                      {{"samples", 500}, {"seed", 1001}, {"trajectory_grid", 9}, {"trajectory_t_end", 40.0},
                       {"trajectory_points", 60}});
  }
  if (name == "fig4") {
    return two_neuron(Matrix{{0.70, 0.11}, {-0.54, 0.98}},
                      {{"samples", 500}, {"seed", 1001}, {"trajectory_grid", 9}, {"trajectory_t_end", 40.0},
                       {"trajectory_points", 60}});
  }
  if (name == "threshold-error") {
    return two_neuron(Matrix{{0.4, 0.2}, {0.8, 0.5}}, {{"samples", 2000}, {"seed", 1002}});
  }
  if (name == "generalization") {
    return two_neuron(Matrix{{0.4, 0.2}, {0.8, 0.5}}, {{"scale_max", 3.0}, {"samples", 500}, {"seed", 1003}});
  }
  if (name == "competition") return partition_preset({{"steps", 201}});
  if (name == "decision-boundary") return partition_preset({{"samples", 2000}, {"seed", 1004}, {"band", 0.3}});
  if (name == "sharpening") {
    return ring_preset({{"kappas", {0.0, 1.0, 2.0, 4.0, 8.0}},
                        {"thetas_per_kappa", 100},
                        {"gamma", 0.5},
                        {"seed", 1005},
                        {"profile_theta", 0.5}});
  }
  if (name == "noise") {
    return ring_preset(
        {{"zetas", {0.0, 0.5, 1.0, 2.0}}, {"trials", 100}, {"kappa", 4.0}, {"gamma", 0.5}, {"seed", 1006}});
  }
  if (name == "common-mode") {
    return ring_preset({{"gammas", {0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0}},
                        {"trials", 100},
                        {"kappa", 4.0},
                        {"zeta", 0.0},
                        {"seed", 1007}});
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

json merge_preset_config(const std::string& name, const json& overrides) {
  json config = default_preset_config(name);
  if (overrides.is_null()) return config;
  check_against(config, overrides, "");
  if (overrides.contains("sampler")) config["sampler"] = overrides.at("sampler");
  json rest = overrides;
  rest.erase("sampler");
  config.merge_patch(rest);
  return config;
}

RecurrentNet build_net(const json& net) {
  const auto kind = net.at("kind").get<std::string>();
  if (kind == "matrix") return RecurrentNet(matrix_from_json(net.at("weights")));
  if (kind == "partition") return gen_partition_net(partition_spec_of(net));
  if (kind == "ring") return gen_ring_net(ring_spec_of(net));
  if (kind == "random") return gen_random_net(net.at("n").get<std::size_t>(), net.at("seed").get<std::uint64_t>());
  throw std::invalid_argument("unknown net kind '" + kind + "'");
}

ExperimentReport training_report(const TrainReport& rep) {
  ExperimentReport out;
  out.name = "training";
  out.columns = {"iteration", "batch_loss", "smoothed_loss"};
  for (std::size_t k = 0; k < rep.loss_history.size(); ++k) {
    out.add_row({static_cast<std::int64_t>(k + 1), rep.loss_history[k], rep.smoothed_history[k]});
  }
  out.summary = {{"iterations_run", static_cast<double>(rep.iterations_run)},
                 {"best_iteration", static_cast<double>(rep.best_iteration)},
                 {"best_smoothed_loss", rep.best_smoothed_loss},
                 {"converged", rep.stop_reason == StopReason::Converged ? 1.0 : 0.0}};
  out.plots.push_back({"training", PlotKind::Line, "Training loss", "iteration", "loss",
                       {{"batch loss", "iteration", "batch_loss", "", std::int64_t{0}},
                        {"smoothed loss", "iteration", "smoothed_loss", "", std::int64_t{0}}}});
  return out;
}

PresetOutput run_preset(const std::string& name, const json& config, const TrainLogger& log) {
  (void)default_preset_config(name);  // rejects unknown names
  PresetOutput out{name, config, build_net(config.at("net")), std::nullopt, std::nullopt, {}, json::object()};
  const RecurrentNet& net = out.net;
  const FixedPointConfig fcfg = fixed_point_config_from_json(config.at("fixed_point"));
  const TrainConfig tcfg = train_config_from_json(config.at("train"));
  const AdamConfig acfg = adam_config_from_json(config.at("adam"));
  const InputSampler sampler = sampler_from_json(config.at("sampler"));
  const json& ev = config.at("eval");

  TrainReport tr = train(net, init_ffnet(net.size(), tcfg.seed), sampler, tcfg, acfg, fcfg, log);
  const FeedForwardNet ff = tr.best_net;
  out.summary["training"] = training_summary(tr);
  out.reports.push_back(training_report(tr));
  out.ff = ff;
  out.training = std::move(tr);

  if (name == "fig2" || name == "fig4") {
    out.reports.push_back(mapping_experiment(net, ff, sampler, ev.at("samples"), ev.at("seed"), fcfg));
    const auto& m = out.reports.back().summary;
    out.summary["median_error_ratio_all_positive"] =
        m.at("median_error_all_positive") / m.at("median_target_all_positive");
    out.reports.push_back(trajectory_experiment(net, ev.at("trajectory_grid"), -1.0, 1.0, ev.at("trajectory_t_end"),
                                                ev.at("trajectory_points"), fcfg));
    json eig = json::array();
    for (const auto& e : eigenvalues(net.weights())) eig.push_back(json::array({e.real(), e.imag()}));
    out.summary["eigenvalues"] = eig;
  } else if (name == "threshold-error") {
    out.reports.push_back(threshold_error_experiment(net, ff, ev.at("samples"), ev.at("seed"), fcfg));
  } else if (name == "generalization") {
    auto rep = generalization_experiment(net, ff, ev.at("scale_max"), ev.at("samples"), ev.at("seed"), fcfg);
    auto agg = aggregate(rep, "scale", {"error"}, "generalization_by_scale");
    out.reports.push_back(std::move(rep));
    out.reports.push_back(with_line_plot(std::move(agg), "generalization_by_scale", "Mean error per shell", "scale",
                                         {{"mean", "error_mean"}, {"median", "error_median"}},
                                         "mean absolute error"));
  } else if (name == "competition") {
    out.reports.push_back(competition_sweep(net, ff, partition_spec_of(config.at("net")), ev.at("steps"), fcfg));
  } else if (name == "decision-boundary") {
    out.reports.push_back(decision_boundary_experiment(net, ff, partition_spec_of(config.at("net")),
                                                       ev.at("samples"), ev.at("seed"), ev.at("band"), fcfg));
  } else if (name == "sharpening") {
    const RingSpec spec = ring_spec_of(config.at("net"));
    const std::vector<double> kappas = ev.at("kappas");
    auto rep = sharpening_experiment(net, ff, spec, kappas, ev.at("thetas_per_kappa"), ev.at("gamma"),
                                     ev.at("seed"), fcfg);
    auto agg = aggregate(rep, "kappa", {"width_in", "width_R", "width_FF"}, "sharpening_by_kappa");
    out.reports.push_back(std::move(rep));
    out.reports.push_back(with_line_plot(std::move(agg), "sharpening_by_kappa", "Tuning width against kappa",
                                         "kappa",
                                         {{"input", "width_in_mean"},
                                          {"recurrent", "width_R_mean"},
                                          {"feed-forward", "width_FF_mean"}},
                                         "circular variance"));
    out.reports.push_back(ring_profiles(net, ff, spec, kappas, ev.at("profile_theta"), ev.at("gamma"), fcfg));
  } else if (name == "noise") {
    auto rep = noise_experiment(net, ff, ring_spec_of(config.at("net")), ev.at("zetas"), ev.at("trials"),
                                ev.at("kappa"), ev.at("gamma"), ev.at("seed"), fcfg);
    ExperimentReport agg = aggregate(rep, "zeta", {"error", "err_Theta_R", "err_R_FF"}, "noise_by_zeta");
    out.reports.push_back(std::move(rep));
    out.reports.push_back(with_line_plot(std::move(agg), "noise_by_zeta", "Approximation error against noise",
                                         "zeta", {{"mean error", "error_mean"}, {"median error", "error_median"}},
                                         "mean absolute error"));
  } else if (name == "common-mode") {
    auto rep = common_mode_experiment(net, ff, ring_spec_of(config.at("net")), ev.at("gammas"), ev.at("trials"),
                                      ev.at("kappa"), ev.at("zeta"), ev.at("seed"), fcfg);
    ExperimentReport agg = aggregate(rep, "gamma", {"error", "ff_scale"}, "common_mode_by_gamma");
    out.reports.push_back(std::move(rep));
    out.reports.push_back(with_line_plot(std::move(agg), "common_mode_by_gamma",
                                         "Approximation error against common-mode input", "gamma",
                                         {{"mean error", "error_mean"}, {"median error", "error_median"}},
                                         "mean absolute error"));
  }
  json reports = json::object();
  for (const auto& r : out.reports) reports[r.name] = r.summary;
  out.summary["reports"] = reports;
  return out;
}

}  // namespace fpnet
