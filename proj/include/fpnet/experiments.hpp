#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fpnet/ffnet.hpp"
#include "fpnet/generators.hpp"
#include "fpnet/io.hpp"
#include "fpnet/recurrent.hpp"
#include "fpnet/sampler.hpp"

namespace fpnet {

struct Dataset {
  std::vector<Vector> inputs;
  std::vector<Vector> targets;  // rectified fixed points
  std::vector<bool> all_positive;
  json provenance = json::object();
};

/// Samples inputs until `count` of them reach a Converged fixed point.
/// Unstable and timed-out inputs are dropped and counted in the provenance.
Dataset build_dataset(const RecurrentNet& net, const InputSampler& sampler, std::size_t count,
                      const FixedPointConfig& fcfg, std::uint64_t seed);

json to_json(const Dataset& ds);
Dataset dataset_from_json(const json& j);
json to_json(const InputSampler& sampler);
InputSampler sampler_from_json(const json& j);

/// Mean over coordinates of |output - target|.
double sample_error(std::span<const double> output, std::span<const double> target);

struct ApproxError {
  std::vector<double> per_sample;
  double mean = 0.0;
};
ApproxError approx_error(const FeedForwardNet& ff, const Dataset& ds);

/// Preferred orientation of the excitatory neuron with the largest response
/// (lowest index on ties). Throws AllZeroResponse if no entry is positive.
double peak_angle(std::span<const double> response, const RingSpec& spec);

/// a - b wrapped into (-pi, pi].
double circular_error(double a, double b);

/// Circular variance 1 - |sum r_j e^{i theta_j}| / sum r_j over the
/// rectified excitatory responses; nullopt if they sum to zero.
std::optional<double> tuning_width(std::span<const double> response, const RingSpec& spec);

/// Partition with the largest summed rectified activity (lowest index on
/// ties), or nullopt if every sum is below 1e-9.
std::optional<std::size_t> partition_winner(std::span<const double> response, const PartitionSpec& spec);

using Cell = std::variant<std::int64_t, double, std::string>;

enum class PlotKind { Scatter, Line, Polar };
const char* to_string(PlotKind k);

struct PlotSeries {
  std::string label;
  std::string x;  // column name (angle for polar plots)
  std::string y;  // column name (radius for polar plots)
  std::string filter_column;  // optional: keep rows whose filter_column equals filter_value
  Cell filter_value = std::int64_t{0};
};

struct PlotSpec {
  std::string name;
  PlotKind kind = PlotKind::Scatter;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

struct ExperimentReport {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::map<std::string, double> summary;
  json config_snapshot = json::object();
  std::vector<PlotSpec> plots;

  void add_row(std::vector<Cell> row);
  std::size_t column(const std::string& name) const;  // throws std::out_of_range
  /// Numeric value of a cell, nullopt for strings.
  static std::optional<double> number(const Cell& c);
};

std::string to_csv(const ExperimentReport& report);

/// Per-group mean and median of the numeric value columns, one row per
/// distinct value of group_column in order of first appearance.
ExperimentReport aggregate(const ExperimentReport& report, const std::string& group_column,
                           const std::vector<std::string>& value_columns, const std::string& name);

// Fixed-point map on sampled inputs: signed and rectified fixed points next
// to the feed-forward output, one row per sample.
ExperimentReport mapping_experiment(const RecurrentNet& net, const FeedForwardNet& ff,
                                    const InputSampler& sampler, std::size_t n_samples,
                                    std::uint64_t seed, const FixedPointConfig& fcfg = {});

// Trajectories of a 2-neuron net from a grid of inputs on (lo, hi)^2.
ExperimentReport trajectory_experiment(const RecurrentNet& net, std::size_t grid, double lo, double hi,
                                       double t_end, std::size_t points_per_trace,
                                       const FixedPointConfig& fcfg = {});

ExperimentReport competition_sweep(const RecurrentNet& net, const FeedForwardNet& ff,
                                   const PartitionSpec& spec, std::size_t steps,
                                   const FixedPointConfig& fcfg = {});

/// Inputs with every excitatory entry ~ U(0, 1), kept when the summed drive of
/// the first two partitions differs by at most band * sum(i).
ExperimentReport decision_boundary_experiment(const RecurrentNet& net, const FeedForwardNet& ff,
                                              const PartitionSpec& spec, std::size_t n_samples,
                                              std::uint64_t seed, double band = 0.3,
                                              const FixedPointConfig& fcfg = {});

ExperimentReport sharpening_experiment(const RecurrentNet& net, const FeedForwardNet& ff,
                                       const RingSpec& spec, const std::vector<double>& kappas,
                                       std::size_t thetas_per_kappa, double gamma, std::uint64_t seed,
                                       const FixedPointConfig& fcfg = {});

/// Response profiles for one stimulus orientation per kappa, for polar plots.
ExperimentReport ring_profiles(const RecurrentNet& net, const FeedForwardNet& ff, const RingSpec& spec,
                               const std::vector<double>& kappas, double theta, double gamma,
                               const FixedPointConfig& fcfg = {});

/// The stimulus orientation and noise pattern of trial k are shared across
/// zeta values, so only the noise amplitude changes along the sweep.
ExperimentReport noise_experiment(const RecurrentNet& net, const FeedForwardNet& ff, const RingSpec& spec,
                                  const std::vector<double>& zetas, std::size_t trials, double kappa,
                                  double gamma, std::uint64_t seed, const FixedPointConfig& fcfg = {});

ExperimentReport common_mode_experiment(const RecurrentNet& net, const FeedForwardNet& ff,
                                        const RingSpec& spec, const std::vector<double>& gammas,
                                        std::size_t trials, double kappa, double zeta,
                                        std::uint64_t seed, const FixedPointConfig& fcfg = {});

/// Square shells |i|_inf = s for s = 1, 1.5, ..., scale_max (n_samples each,
/// uniform on the perimeter) plus an interior baseline on (-1, 1)^2.
ExperimentReport generalization_experiment(const RecurrentNet& net, const FeedForwardNet& ff,
                                           double scale_max, std::size_t n_samples, std::uint64_t seed,
                                           const FixedPointConfig& fcfg = {});

/// Inputs ~ U(-1, 1)^2 labelled by where the fixed point sits relative to
/// threshold: "near-threshold" (some f_j in (-0.1, 0.1)), "above" (every
/// f_j > 0.5), "other", or "discarded" if no fixed point was found.
ExperimentReport threshold_error_experiment(const RecurrentNet& net, const FeedForwardNet& ff,
                                            std::size_t n_samples, std::uint64_t seed,
                                            const FixedPointConfig& fcfg = {});

/// Recomputes a report from its own config_snapshot.
ExperimentReport rerun_experiment(const json& snapshot);

}  // namespace fpnet
