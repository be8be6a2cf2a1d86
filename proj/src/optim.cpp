#include "fpnet/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fpnet/errors.hpp"

namespace fpnet {

namespace {

constexpr std::uint64_t kTagJitter = 0x4A495454;  // "JITT"
constexpr std::uint64_t kTagBatch = 0x42415443;   // "BATC"
constexpr std::uint64_t kTagPick = 0x5049434B;    // "PICK"

using BatchSource = std::function<std::vector<TrainingPair>(std::size_t iteration)>;

double window_mean(const std::vector<double>& xs, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t k = begin; k < end; ++k) s += xs[k];
  return s / static_cast<double>(end - begin);
}

TrainReport run_training(const BatchSource& next_batch, const FeedForwardNet& ff0,
                         const TrainConfig& tcfg, const AdamConfig& acfg, const TrainLogger& log) {
  if (tcfg.smoothing_window == 0) throw std::invalid_argument("train: smoothing_window must be >= 1");
  TrainReport rep;
  rep.best_net = ff0;
  rep.stop_reason = StopReason::MaxIterations;

  FeedForwardNet net = ff0;
  std::vector<double> params = flatten_parameters(net);
  AdamState adam(params.size());
  const std::size_t window = tcfg.smoothing_window;
  double best = std::numeric_limits<double>::infinity();

  for (std::size_t it = 0; it < tcfg.max_iterations; ++it) {
    std::vector<TrainingPair> batch;
    try {
      batch = next_batch(it);
    } catch (const DataExhausted&) {
      if (it == 0) throw;
      rep.stop_reason = StopReason::DataExhausted;
      break;
    }

    std::vector<Vector> outputs, targets;
    outputs.reserve(batch.size());
    targets.reserve(batch.size());
    for (const auto& s : batch) {
      outputs.push_back(forward(net, s.input).act2);
      targets.push_back(s.target);
    }
    const double c = loss(outputs, targets);
    rep.loss_history.push_back(c);
    const std::size_t count = rep.loss_history.size();
    const double smoothed =
        window_mean(rep.loss_history, count > window ? count - window : 0, count);
    rep.smoothed_history.push_back(smoothed);
    if (smoothed < best) {
      best = smoothed;
      rep.best_net = net;
      rep.best_smoothed_loss = smoothed;
      rep.best_iteration = count;
    }
    if (log) log({count, c, smoothed});

    std::vector<double> grads = flatten_gradients(backprop(net, batch));
    CounterRng jitter(tcfg.seed, derive_stream({kTagJitter, it}));
    jitter_zero_grads(grads, tcfg.jitter_std, jitter);
    adam_step(adam, params, grads, acfg);
    assign_parameters(net, params);
    rep.iterations_run = count;

    if (count >= 2 * window) {
      const double recent = window_mean(rep.loss_history, count - window, count);
      const double previous = window_mean(rep.loss_history, count - 2 * window, count - window);
      if (std::abs(recent - previous) <= tcfg.convergence_rel_tol * std::max(previous, 1e-12)) {
        rep.stop_reason = StopReason::Converged;
        break;
      }
    }
  }
  return rep;
}

}  // namespace

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Converged: return "Converged";
    case StopReason::MaxIterations: return "MaxIterations";
    case StopReason::DataExhausted: return "DataExhausted";
  }
  return "?";
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads,
               const AdamConfig& cfg) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw DimensionMismatch("adam_step: parameter, gradient and state sizes differ");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(cfg.beta1, t);
  const double c2 = 1.0 - std::pow(cfg.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    state.m[k] = cfg.beta1 * state.m[k] + (1.0 - cfg.beta1) * g;
    state.v[k] = cfg.beta2 * state.v[k] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = state.m[k] / c1;
    const double v_hat = state.v[k] / c2;
    params[k] -= cfg.alpha * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
  }
}

void jitter_zero_grads(std::span<double> grads, double stddev, CounterRng& rng) {
  if (stddev < 0) throw std::invalid_argument("jitter_zero_grads: stddev must be >= 0");
  if (stddev == 0) return;
  for (double& g : grads) {
    if (g == 0.0) {
      // A normal draw of exactly 0 is possible in principle; redraw.
      do {
        g = rng.normal(0.0, stddev);
      } while (g == 0.0);
    }
  }
}

std::vector<TrainingPair> make_training_batch(const RecurrentNet& net, const InputSampler& sampler,
                                              std::size_t m, const FixedPointConfig& fcfg,
                                              std::uint64_t seed, std::uint64_t batch_index,
                                              TargetFilter filter) {
  if (m == 0) throw std::invalid_argument("make_training_batch: M must be >= 1");
  if (sampler_dimension(sampler) != net.size()) {
    throw DimensionMismatch("make_training_batch: sampler dimension does not match network");
  }
  const std::uint64_t stream_seed = derive_stream({seed, kTagBatch, batch_index});
  std::vector<TrainingPair> batch;
  batch.reserve(m);
  std::size_t rejects = 0;
  for (std::uint64_t attempt = 0; batch.size() < m; ++attempt) {
    Vector input = sample_input(sampler, stream_seed, attempt);
    const auto out = find_fixed_point(net, input, fcfg);
    if (out.verdict == Verdict::Converged && passes(filter, *out.f)) {
      batch.push_back({std::move(input), relu(*out.f)});
      rejects = 0;
    } else if (++rejects >= 1000 * m) {
      throw DataExhausted("no qualifying fixed point in " + std::to_string(rejects) +
                          " consecutive samples");
    }
  }
  return batch;
}

TrainReport train(const RecurrentNet& net, const FeedForwardNet& ff0, const InputSampler& sampler,
                  const TrainConfig& tcfg, const AdamConfig& acfg, const FixedPointConfig& fcfg,
                  const TrainLogger& log) {
  if (ff0.n_in() != net.size() || ff0.n_out() != net.size()) {
    throw DimensionMismatch("train: feed-forward net does not match recurrent net size");
  }
  BatchSource source = [&](std::size_t it) {
    return make_training_batch(net, sampler, tcfg.batch_size, fcfg, tcfg.seed, it, tcfg.filter);
  };
  return run_training(source, ff0, tcfg, acfg, log);
}

TrainReport train_on_dataset(std::span<const TrainingPair> data, const FeedForwardNet& ff0,
                             const TrainConfig& tcfg, const AdamConfig& acfg,
                             const TrainLogger& log) {
  if (data.empty()) throw DataExhausted("train_on_dataset: empty dataset");
  BatchSource source = [&](std::size_t it) {
    CounterRng pick(tcfg.seed, derive_stream({kTagPick, it}));
    std::vector<TrainingPair> batch;
    batch.reserve(tcfg.batch_size);
    for (std::size_t k = 0; k < tcfg.batch_size; ++k) {
      batch.push_back(data[pick.next_u64() % data.size()]);
    }
    return batch;
  };
  return run_training(source, ff0, tcfg, acfg, log);
}

}  // namespace fpnet
