#include <doctest.h>

#include <cmath>

#include "fpnet/errors.hpp"
#include "fpnet/optim.hpp"

using namespace fpnet;

TEST_CASE("first Adam step has magnitude alpha") {
  for (double g0 : {1e-3, 0.5, 40.0}) {
    AdamState st(2);
    std::vector<double> w{1.0, 1.0};
    const std::vector<double> g{g0, -g0};
    adam_step(st, w, g);
    CHECK(std::abs(w[0] - 1.0) == doctest::Approx(1e-3).epsilon(1e-4));
    CHECK(w[1] - 1.0 == doctest::Approx(1e-3).epsilon(1e-4));
  }
}

TEST_CASE("Adam minimizes a quadratic bowl") {
  AdamState st(2);
  std::vector<double> w{1.0, 1.0};
  for (int k = 0; k < 10000; ++k) {
    const std::vector<double> g = w;
    adam_step(st, w, g);
  }
  CHECK(std::hypot(w[0], w[1]) < 1e-3);
  CHECK(st.step == 10000);
}

TEST_CASE("zero gradient leaves Adam parameters unchanged") {
  AdamState st(3);
  std::vector<double> w{1, 2, 3};
  const std::vector<double> g(3, 0.0);
  adam_step(st, w, g);
  CHECK(w == std::vector<double>{1, 2, 3});
}

TEST_CASE("jitter touches only exact zeros") {
  std::vector<double> g{0.0, 1.0, 0.0, -2.0};
  CounterRng rng(1, 2);
  jitter_zero_grads(g, 1e-5, rng);
  CHECK(g[0] != 0.0);
  CHECK(g[2] != 0.0);
  CHECK(std::abs(g[0]) < 1e-4);
  CHECK(g[1] == 1.0);
  CHECK(g[3] == -2.0);
}

TEST_CASE("training batches are deterministic and filtered") {
  const RecurrentNet net{Matrix{{0.70, 0.11}, {-0.54, 0.98}}};
  const InputSampler sampler = UniformSampler{2, -1, 1, 2};
  const auto a = make_training_batch(net, sampler, 50, {}, 4, 3);
  const auto b = make_training_batch(net, sampler, 50, {}, 4, 3);
  const auto c = make_training_batch(net, sampler, 50, {}, 4, 4);
  REQUIRE(a.size() == 50);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].input == b[k].input);
    CHECK(a[k].target == b[k].target);
    for (double v : a[k].target) CHECK(v > 0.0);
  }
  CHECK(a[0].input != c[0].input);
}

TEST_CASE("filter with no passing fixed points exhausts the data") {
  // every fixed point is f = i <= 0
  const RecurrentNet net{Matrix{{0.0, 0.0}, {0.0, 0.0}}};
  const InputSampler sampler = UniformSampler{2, -1, -0.5, 2};
  CHECK_THROWS_AS(make_training_batch(net, sampler, 2, {}, 1, 0), DataExhausted);
}

TEST_CASE("stop rule fires at the first eligible check on a flat loss") {
  // ff0 reproduces the targets exactly and jitter is off, so the loss stays 0
  const FeedForwardNet ff{Matrix{{1, 0}, {0, 1}}, Matrix{{1, 0}, {0, 1}}, Vector{0, 0}, Vector{0, 0}};
  const std::vector<TrainingPair> data{{{1, 2}, {1, 2}}, {{0.5, 0.1}, {0.5, 0.1}}};
  TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.smoothing_window = 10;
  cfg.jitter_std = 0.0;
  const auto rep = train_on_dataset(data, ff, cfg);
  CHECK(rep.stop_reason == StopReason::Converged);
  CHECK(rep.iterations_run == 20);
  CHECK(rep.loss_history.size() == 20);
}

TEST_CASE("training reduces the loss on a fixed dataset") {
  std::vector<TrainingPair> data;
  for (int k = 0; k < 40; ++k) {
    const double x = 0.1 + 0.02 * k, y = 1.0 - 0.015 * k;
    data.push_back({{x, y}, {2 * x + y, x + 3 * y}});
  }
  TrainConfig cfg;
  cfg.batch_size = 10;
  cfg.max_iterations = 3000;
  cfg.seed = 2;
  cfg.convergence_rel_tol = 0.0;
  const auto rep = train_on_dataset(data, init_ffnet(2, 0), cfg);
  CHECK(rep.stop_reason == StopReason::MaxIterations);
  CHECK(rep.iterations_run == 3000);
  CHECK(rep.best_smoothed_loss < rep.smoothed_history.front() / 10);

  // same seed, same result
  const auto again = train_on_dataset(data, init_ffnet(2, 0), cfg);
  CHECK(again.best_net == rep.best_net);
  CHECK(again.loss_history == rep.loss_history);
}

TEST_CASE("online distillation of the linear two-neuron system descends") {
  const RecurrentNet net{Matrix{{0.4, 0.2}, {0.8, 0.5}}};
  TrainConfig cfg;
  cfg.max_iterations = 400;
  cfg.seed = 1;
  std::size_t logged = 0;
  const auto rep = train(net, init_ffnet(2, 1), UniformSampler{2, -1, 1, 2}, cfg, {}, {},
                         [&](const TrainLogRecord& r) { logged = r.iteration; });
  CHECK(logged == rep.iterations_run);
  CHECK(rep.best_smoothed_loss < rep.smoothed_history.front());
}
