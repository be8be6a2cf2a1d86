#pragma once

#include <cstddef>
#include <cstdint>

#include "fpnet/linalg.hpp"
#include "fpnet/recurrent.hpp"

namespace fpnet {

/// Excitatory partitions sharing one global inhibitory neuron (last index).
struct PartitionSpec {
  std::size_t partitions = 2;
  std::size_t per_partition = 2;
  double w_e = 2.5;
  double w_i = 8.0;

  std::size_t size() const { return partitions * per_partition + 1; }
};

/// Ring of n-1 excitatory neurons plus one inhibitory neuron (last index).
struct RingSpec {
  std::size_t n = 40;
  double w_e = 2.0;
  double w_i = 5.0;

  std::size_t excitatory() const { return n - 1; }
  /// Preferred orientation of excitatory neuron j (0-based): -pi + 2pi(j+1)/(n-1).
  double theta(std::size_t j) const;
  double grid_spacing() const;
};

struct RingInputParams {
  double theta_big = 0.0;  // stimulus orientation
  double kappa = 0.0;      // tuning sharpness
  double gamma = 0.5;      // common-mode offset
  double zeta = 0.0;       // frozen-noise standard deviation
  std::uint64_t seed = 0;  // frozen-noise seed
};

/// W_ji ~ U(-2, 2) i.i.d.; b = 0, tau = 1.
RecurrentNet gen_random_net(std::size_t n, std::uint64_t seed);

/// Planted-partition network: dense w_e blocks (self-weights included) on the
/// diagonal, -w_i in the inhibitory column, w_e from every excitatory neuron
/// onto the inhibitory neuron.
RecurrentNet gen_partition_net(const PartitionSpec& spec);

/// Ring network: excitatory weights max(0, cos(theta_j - theta_i)) with each
/// row (self-term included) normalized to sum w_e; excitatory-to-inhibitory
/// weights 1; inhibitory column -w_i / n.
RecurrentNet gen_ring_net(const RingSpec& spec);

/// iota_j = max(0, exp(kappa cos(theta_j - Theta)) + gamma + z_j) for the
/// excitatory neurons, z_j ~ N(0, zeta) from p.seed; 0 for the inhibitory one.
Vector ring_input(const RingSpec& spec, const RingInputParams& p);

/// Independent U(lo, hi) entries, determined by seed.
Vector sample_uniform_input(std::size_t n, double lo, double hi, std::uint64_t seed);

}  // namespace fpnet
