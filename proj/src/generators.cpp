#include "fpnet/generators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fpnet/rng.hpp"

namespace fpnet {

namespace {
constexpr std::uint64_t kTagRandomNet = 0x52414E44;  // "RAND"
constexpr std::uint64_t kTagUniform = 0x554E4946;    // "UNIF"
constexpr std::uint64_t kTagRingNoise = 0x4E4F4953;  // "NOIS"
}  // namespace

double RingSpec::theta(std::size_t j) const {
  return -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j + 1) /
                                 static_cast<double>(n - 1);
}

double RingSpec::grid_spacing() const { return 2.0 * std::numbers::pi / static_cast<double>(n - 1); }

RecurrentNet gen_random_net(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_random_net: n must be at least 1");
  CounterRng rng(seed, derive_stream({kTagRandomNet, n}));
  Matrix w(n, n);
  for (double& v : w.entries()) v = rng.uniform(-2.0, 2.0);
  return RecurrentNet(std::move(w));
}

RecurrentNet gen_partition_net(const PartitionSpec& spec) {
  if (spec.partitions == 0 || spec.per_partition == 0) {
    throw std::invalid_argument("gen_partition_net: need at least one partition of one neuron");
  }
  if (spec.w_e < 0 || spec.w_i < 0) throw std::invalid_argument("gen_partition_net: negative weight");
  const std::size_t n = spec.size();
  const std::size_t inh = n - 1;
  Matrix w(n, n);
  for (std::size_t p = 0; p < spec.partitions; ++p) {
    const std::size_t lo = p * spec.per_partition;
    for (std::size_t r = lo; r < lo + spec.per_partition; ++r) {
      for (std::size_t c = lo; c < lo + spec.per_partition; ++c) w(r, c) = spec.w_e;
    }
  }
  for (std::size_t r = 0; r < n; ++r) w(r, inh) = -spec.w_i;
  for (std::size_t c = 0; c < inh; ++c) w(inh, c) = spec.w_e;
  return RecurrentNet(std::move(w));
}

RecurrentNet gen_ring_net(const RingSpec& spec) {
  if (spec.n < 3) throw std::invalid_argument("gen_ring_net: need n >= 3");
  const std::size_t n = spec.n;
  const std::size_t ne = spec.excitatory();
  Matrix w(n, n);
  for (std::size_t j = 0; j < ne; ++j) {
    double row_sum = 0.0;
    for (std::size_t i = 0; i < ne; ++i) {
      const double v = std::max(0.0, std::cos(spec.theta(j) - spec.theta(i)));
      w(j, i) = v;
      row_sum += v;
    }
    for (std::size_t i = 0; i < ne; ++i) w(j, i) *= spec.w_e / row_sum;
  }
  for (std::size_t j = 0; j < ne; ++j) w(n - 1, j) = 1.0;
  for (std::size_t j = 0; j < n; ++j) w(j, n - 1) = -spec.w_i / static_cast<double>(n);
  return RecurrentNet(std::move(w));
}

Vector ring_input(const RingSpec& spec, const RingInputParams& p) {
  if (spec.n < 3) throw std::invalid_argument("ring_input: need n >= 3");
  if (p.kappa < 0 || p.zeta < 0) throw std::invalid_argument("ring_input: kappa and zeta must be >= 0");
  Vector out(spec.n, 0.0);
  CounterRng noise(p.seed, derive_stream({kTagRingNoise}));
  for (std::size_t j = 0; j < spec.excitatory(); ++j) {
    // Always draw, so the noise pattern for a seed does not depend on zeta.
    const double z = p.zeta * noise.normal();
    out[j] = std::max(0.0, std::exp(p.kappa * std::cos(spec.theta(j) - p.theta_big)) + p.gamma + z);
  }
  return out;
}

Vector sample_uniform_input(std::size_t n, double lo, double hi, std::uint64_t seed) {
  if (!(lo < hi)) throw std::invalid_argument("sample_uniform_input: need lo < hi");
  CounterRng rng(seed, derive_stream({kTagUniform}));
  Vector out(n);
  for (double& v : out) v = rng.uniform(lo, hi);
  return out;
}

}  // namespace fpnet
