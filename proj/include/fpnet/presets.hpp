#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpnet/experiments.hpp"
#include "fpnet/optim.hpp"

namespace fpnet {

struct PresetOutput {
  std::string preset;
  json config;  // effective configuration after overrides
  RecurrentNet net;
  std::optional<FeedForwardNet> ff;
  std::optional<TrainReport> training;
  std::vector<ExperimentReport> reports;
  json summary = json::object();
};

const std::vector<std::string>& preset_names();

/// Built-in configuration of a preset: network, sampler, training and
/// evaluation parameters. Throws std::invalid_argument for unknown names.
json default_preset_config(const std::string& name);

/// Deep-merges `overrides` into the defaults. Keys absent from the defaults
/// are rejected, except inside "sampler", which may be replaced wholesale.
json merge_preset_config(const std::string& name, const json& overrides);

/// Runs a preset end to end from a full configuration (as returned by
/// merge_preset_config): build the net, train, evaluate.
PresetOutput run_preset(const std::string& name, const json& config, const TrainLogger& log = {});

/// The recurrent net described by a preset's "net" entry.
RecurrentNet build_net(const json& net_config);

/// Training log as a report (iteration, batch loss, smoothed loss).
ExperimentReport training_report(const TrainReport& rep);

}  // namespace fpnet
