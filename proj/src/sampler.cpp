#include "fpnet/sampler.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

#include "fpnet/rng.hpp"

namespace fpnet {

namespace {
constexpr std::uint64_t kTagSample = 0x53414D50;  // "SAMP"
}

Vector sample_input(const InputSampler& sampler, std::uint64_t seed, std::uint64_t index) {
  CounterRng rng(seed, derive_stream({kTagSample, index}));
  if (const auto* u = std::get_if<UniformSampler>(&sampler)) {
    if (u->driven > u->n) throw std::invalid_argument("UniformSampler: driven > n");
    Vector out(u->n, 0.0);
    for (std::size_t j = 0; j < u->driven; ++j) out[j] = rng.uniform(u->lo, u->hi);
    return out;
  }
  const auto& r = std::get<RingSampler>(sampler);
  RingInputParams p;
  p.theta_big = rng.uniform(-std::numbers::pi, std::numbers::pi);
  p.kappa = rng.uniform(r.kappa_lo, r.kappa_hi);
  p.gamma = r.gamma;
  p.zeta = r.zeta;
  p.seed = rng.next_u64();
  return ring_input(r.spec, p);
}

std::size_t sampler_dimension(const InputSampler& sampler) {
  if (const auto* u = std::get_if<UniformSampler>(&sampler)) return u->n;
  return std::get<RingSampler>(sampler).spec.n;
}

bool passes(TargetFilter filter, const Vector& f) {
  switch (filter) {
    case TargetFilter::AllPositive:
      return std::all_of(f.begin(), f.end(), [](double v) { return v > 0; });
    case TargetFilter::AnyPositive:
      return std::any_of(f.begin(), f.end(), [](double v) { return v > 0; });
    case TargetFilter::None:
      return true;
  }
  return false;
}

const char* to_string(TargetFilter filter) {
  switch (filter) {
    case TargetFilter::AllPositive: return "all-positive";
    case TargetFilter::AnyPositive: return "any-positive";
    case TargetFilter::None: return "none";
  }
  return "?";
}

TargetFilter target_filter_from_string(const std::string& s) {
  if (s == "all-positive") return TargetFilter::AllPositive;
  if (s == "any-positive") return TargetFilter::AnyPositive;
  if (s == "none") return TargetFilter::None;
  throw std::invalid_argument("unknown target filter '" + s + "'");
}

}  // namespace fpnet
