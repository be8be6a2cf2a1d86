#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fpnet/linalg.hpp"

namespace fpnet {

/// Two-layer rectified-linear network:
///   x1 = [W1 i - b1]^+,  x2 = [W2 x1 - b2]^+.
struct FeedForwardNet {
  Matrix w1;  // n_hidden x n_in
  Matrix w2;  // n_out x n_hidden
  Vector b1;  // n_hidden
  Vector b2;  // n_out

  FeedForwardNet() = default;
  FeedForwardNet(Matrix w1, Matrix w2, Vector b1, Vector b2);

  std::size_t n_in() const noexcept { return w1.cols(); }
  std::size_t n_hidden() const noexcept { return w1.rows(); }
  std::size_t n_out() const noexcept { return w2.rows(); }
  std::size_t parameter_count() const noexcept;

  bool operator==(const FeedForwardNet&) const = default;
};

struct ForwardTrace {
  Vector pre1, act1, pre2, act2;
};

/// dc/d(parameter), same shapes as the network.
struct GradientSet {
  Matrix g_w1, g_w2;
  Vector g_b1, g_b2;
};

struct TrainingPair {
  Vector input;
  Vector target;
};

ForwardTrace forward(const FeedForwardNet& net, std::span<const double> input);

/// c = 1/(2M) * sum_m |output_m - target_m|^2
double loss(std::span<const Vector> outputs, std::span<const Vector> targets);

/// Exact gradient of `loss` over the batch. The ReLU derivative is 1 for a
/// strictly positive pre-activation and 0 otherwise. Samples are accumulated
/// in index order.
GradientSet backprop(const FeedForwardNet& net, std::span<const TrainingPair> batch);

/// Square n-n-n network: weights Id(n) + U(0, 1e-2), biases 0.01.
FeedForwardNet init_ffnet(std::size_t n, std::uint64_t seed);

/// Flat parameter order: w1, b1, w2, b2 (row-major).
std::vector<double> flatten_parameters(const FeedForwardNet& net);
void assign_parameters(FeedForwardNet& net, std::span<const double> flat);
std::vector<double> flatten_gradients(const GradientSet& g);

}  // namespace fpnet
