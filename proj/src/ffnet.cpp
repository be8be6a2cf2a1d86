#include "fpnet/ffnet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpnet/errors.hpp"
#include "fpnet/rng.hpp"

namespace fpnet {

namespace {
constexpr std::uint64_t kTagInit = 0x494E4954;  // "INIT"
}

FeedForwardNet::FeedForwardNet(Matrix w1_, Matrix w2_, Vector b1_, Vector b2_)
    : w1(std::move(w1_)), w2(std::move(w2_)), b1(std::move(b1_)), b2(std::move(b2_)) {
  if (b1.size() != w1.rows() || w2.cols() != w1.rows() || b2.size() != w2.rows()) {
    throw DimensionMismatch("feed-forward layer shapes are inconsistent");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(b1.begin(), b1.end(), finite) || !std::all_of(b2.begin(), b2.end(), finite)) {
    throw std::invalid_argument("feed-forward biases must be finite");
  }
}

std::size_t FeedForwardNet::parameter_count() const noexcept {
  return w1.entries().size() + b1.size() + w2.entries().size() + b2.size();
}

ForwardTrace forward(const FeedForwardNet& net, std::span<const double> input) {
  if (input.size() != net.n_in()) {
    throw DimensionMismatch("forward: input length " + std::to_string(input.size()) + " != " +
                            std::to_string(net.n_in()));
  }
  ForwardTrace tr;
  tr.pre1 = multiply(net.w1, input);
  tr.act1.resize(tr.pre1.size());
  for (std::size_t j = 0; j < tr.pre1.size(); ++j) {
    tr.pre1[j] -= net.b1[j];
    tr.act1[j] = std::max(tr.pre1[j], 0.0);
  }
  tr.pre2 = multiply(net.w2, tr.act1);
  tr.act2.resize(tr.pre2.size());
  for (std::size_t j = 0; j < tr.pre2.size(); ++j) {
    tr.pre2[j] -= net.b2[j];
    tr.act2[j] = std::max(tr.pre2[j], 0.0);
  }
  return tr;
}

double loss(std::span<const Vector> outputs, std::span<const Vector> targets) {
  if (outputs.empty()) throw EmptyBatch("loss: empty batch");
  if (outputs.size() != targets.size()) throw DimensionMismatch("loss: output/target count mismatch");
  double sum = 0.0;
  for (std::size_t m = 0; m < outputs.size(); ++m) {
    if (outputs[m].size() != targets[m].size()) throw DimensionMismatch("loss: vector length mismatch");
    for (std::size_t j = 0; j < outputs[m].size(); ++j) {
      const double d = outputs[m][j] - targets[m][j];
      sum += d * d;
    }
  }
  return sum / (2.0 * static_cast<double>(outputs.size()));
}

GradientSet backprop(const FeedForwardNet& net, std::span<const TrainingPair> batch) {
  if (batch.empty()) throw EmptyBatch("backprop: empty batch");
  const std::size_t n_in = net.n_in(), n_h = net.n_hidden(), n_out = net.n_out();
  GradientSet g{Matrix(n_h, n_in), Matrix(n_out, n_h), Vector(n_h, 0.0), Vector(n_out, 0.0)};
  const double inv_m = 1.0 / static_cast<double>(batch.size());
  Vector delta2(n_out), delta1(n_h);

  for (const auto& sample : batch) {
    if (sample.target.size() != n_out) throw DimensionMismatch("backprop: target length mismatch");
    const ForwardTrace tr = forward(net, sample.input);
    for (std::size_t k = 0; k < n_out; ++k) {
      delta2[k] = tr.pre2[k] > 0 ? (tr.act2[k] - sample.target[k]) * inv_m : 0.0;
    }
    for (std::size_t h = 0; h < n_h; ++h) {
      double back = 0.0;
      for (std::size_t k = 0; k < n_out; ++k) back += net.w2(k, h) * delta2[k];
      delta1[h] = tr.pre1[h] > 0 ? back : 0.0;
    }
    for (std::size_t k = 0; k < n_out; ++k) {
      if (delta2[k] == 0.0) continue;
      for (std::size_t h = 0; h < n_h; ++h) g.g_w2(k, h) += delta2[k] * tr.act1[h];
      g.g_b2[k] -= delta2[k];
    }
    for (std::size_t h = 0; h < n_h; ++h) {
      if (delta1[h] == 0.0) continue;
      for (std::size_t c = 0; c < n_in; ++c) g.g_w1(h, c) += delta1[h] * sample.input[c];
      g.g_b1[h] -= delta1[h];
    }
  }
  return g;
}

FeedForwardNet init_ffnet(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("init_ffnet: n must be at least 1");
  CounterRng rng(seed, derive_stream({kTagInit, n}));
  auto layer = [&] {
    Matrix w = Matrix::identity(n);
    for (double& v : w.entries()) v += rng.uniform(0.0, 1e-2);
    return w;
  };
  Matrix w1 = layer();
  Matrix w2 = layer();
  return FeedForwardNet(std::move(w1), std::move(w2), Vector(n, 0.01), Vector(n, 0.01));
}

std::vector<double> flatten_parameters(const FeedForwardNet& net) {
  std::vector<double> flat;
  flat.reserve(net.parameter_count());
  flat.insert(flat.end(), net.w1.entries().begin(), net.w1.entries().end());
  flat.insert(flat.end(), net.b1.begin(), net.b1.end());
  flat.insert(flat.end(), net.w2.entries().begin(), net.w2.entries().end());
  flat.insert(flat.end(), net.b2.begin(), net.b2.end());
  return flat;
}

void assign_parameters(FeedForwardNet& net, std::span<const double> flat) {
  if (flat.size() != net.parameter_count()) throw DimensionMismatch("assign_parameters: size mismatch");
  auto it = flat.begin();
  auto take = [&](std::span<double> dst) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(dst.size()), dst.begin());
    it += static_cast<std::ptrdiff_t>(dst.size());
  };
  take(net.w1.entries());
  take(net.b1);
  take(net.w2.entries());
  take(net.b2);
}

std::vector<double> flatten_gradients(const GradientSet& g) {
  std::vector<double> flat;
  flat.insert(flat.end(), g.g_w1.entries().begin(), g.g_w1.entries().end());
  flat.insert(flat.end(), g.g_b1.begin(), g.g_b1.end());
  flat.insert(flat.end(), g.g_w2.entries().begin(), g.g_w2.entries().end());
  flat.insert(flat.end(), g.g_b2.begin(), g.g_b2.end());
  return flat;
}

}  // namespace fpnet
