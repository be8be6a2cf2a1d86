#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>

#include "fpnet/generators.hpp"
#include "fpnet/linalg.hpp"

namespace fpnet {

/// First `driven` coordinates U(lo, hi), the remaining ones 0 (e.g. an
/// undriven inhibitory neuron).
struct UniformSampler {
  std::size_t n = 2;
  double lo = -1.0;
  double hi = 1.0;
  std::size_t driven = 2;
};

/// Tuned ring inputs: Theta ~ U(-pi, pi), kappa ~ U(kappa_lo, kappa_hi),
/// fixed common-mode gamma and noise level zeta.
struct RingSampler {
  RingSpec spec;
  double kappa_lo = 0.0;
  double kappa_hi = 8.0;
  double gamma = 0.5;
  double zeta = 0.0;
};

using InputSampler = std::variant<UniformSampler, RingSampler>;

/// The index-th input of the stream identified by seed. Any sample can be
/// regenerated independently of the others.
Vector sample_input(const InputSampler& sampler, std::uint64_t seed, std::uint64_t index);

std::size_t sampler_dimension(const InputSampler& sampler);

/// Which converged fixed points qualify as training targets.
enum class TargetFilter {
  AllPositive,  // every f_j > 0
  AnyPositive,  // at least one f_j > 0
  None,
};

bool passes(TargetFilter filter, const Vector& f);
const char* to_string(TargetFilter filter);
TargetFilter target_filter_from_string(const std::string& s);

}  // namespace fpnet
