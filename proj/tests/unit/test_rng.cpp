#include <doctest.h>

#include <cmath>
#include <set>

#include "fpnet/rng.hpp"

using namespace fpnet;

// known-answer vectors from the Random123 distribution (kat_vectors)
TEST_CASE("philox4x32-10 known answers") {
  auto r = philox4x32_10({0, 0, 0, 0}, {0, 0});
  CHECK(r == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

  r = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(r == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

  r = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(r == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("same seed and stream give the same draws") {
  CounterRng a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    if (x != c.uniform()) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("derive_stream is order sensitive") {
  CHECK(derive_stream({1, 2, 3}) == derive_stream({1, 2, 3}));
  CHECK(derive_stream({1, 2, 3}) != derive_stream({3, 2, 1}));
  CHECK(derive_stream({1, 2}) != derive_stream({1, 2, 0}));
}

TEST_CASE("uniform and normal moments") {
  CounterRng rng(3, 0);
  const int n = 200000;
  double s = 0, s2 = 0, lo = 1, hi = 0;
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    s += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(s / n == doctest::Approx(0.5).epsilon(0.01));

  s = 0;
  for (int k = 0; k < n; ++k) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}
