#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fpnet/ffnet.hpp"
#include "fpnet/recurrent.hpp"
#include "fpnet/rng.hpp"
#include "fpnet/sampler.hpp"

namespace fpnet {

struct AdamConfig {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1.5e-8;
};

struct AdamState {
  std::uint64_t step = 0;
  std::vector<double> m;
  std::vector<double> v;

  AdamState() = default;
  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               const AdamConfig& cfg = {});

/// Replaces every exactly-zero gradient entry with an N(0, stddev) draw.
void jitter_zero_grads(std::span<double> grads, double stddev, CounterRng& rng);

struct TrainConfig {
  std::size_t batch_size = 50;
  std::size_t max_iterations = 100000;
  std::size_t smoothing_window = 100;
  double convergence_rel_tol = 1e-4;
  double jitter_std = 1e-5;
  std::uint64_t seed = 0;
  TargetFilter filter = TargetFilter::AllPositive;
};

enum class StopReason { Converged, MaxIterations, DataExhausted };
const char* to_string(StopReason r);

struct TrainReport {
  std::size_t iterations_run = 0;
  std::vector<double> loss_history;      // per-batch loss
  std::vector<double> smoothed_history;  // moving average over the smoothing window
  FeedForwardNet best_net;
  double best_smoothed_loss = 0.0;
  std::size_t best_iteration = 0;  // 1-based; 0 means the initial network
  StopReason stop_reason = StopReason::MaxIterations;
};

struct TrainLogRecord {
  std::size_t iteration;  // 1-based
  double batch_loss;
  double smoothed_loss;
};
using TrainLogger = std::function<void(const TrainLogRecord&)>;

/// Collects M (input, [f]^+) pairs by sampling inputs from the stream
/// derived from (seed, batch_index) and keeping Converged fixed points that
/// pass `filter`. Throws DataExhausted after 1000*M consecutive rejects.
std::vector<TrainingPair> make_training_batch(const RecurrentNet& net, const InputSampler& sampler,
                                              std::size_t m, const FixedPointConfig& fcfg,
                                              std::uint64_t seed, std::uint64_t batch_index,
                                              TargetFilter filter = TargetFilter::AllPositive);

/// Online distillation: fresh batch each iteration, backprop, jitter, Adam.
/// Stops when consecutive smoothing-window loss averages differ by at most
/// convergence_rel_tol (relative), or at max_iterations. Returns the
/// parameters with the lowest smoothed loss.
TrainReport train(const RecurrentNet& net, const FeedForwardNet& ff0, const InputSampler& sampler,
                  const TrainConfig& tcfg, const AdamConfig& acfg = {},
                  const FixedPointConfig& fcfg = {}, const TrainLogger& log = {});

/// Fixed-dataset mode: batches drawn with replacement from `data`.
TrainReport train_on_dataset(std::span<const TrainingPair> data, const FeedForwardNet& ff0,
                             const TrainConfig& tcfg, const AdamConfig& acfg = {},
                             const TrainLogger& log = {});

}  // namespace fpnet
