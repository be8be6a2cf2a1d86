#include <doctest.h>

#include <cmath>

#include "fpnet/errors.hpp"
#include "fpnet/generators.hpp"
#include "fpnet/recurrent.hpp"

using namespace fpnet;

namespace {

const RecurrentNet kLinear{Matrix{{0.4, 0.2}, {0.8, 0.5}}};
const RecurrentNet kSpiral{Matrix{{0.70, 0.11}, {-0.54, 0.98}}};
const RecurrentNet kRunaway{Matrix{{1.2, 0.1}, {0.1, 1.2}}};

// closed-form solution on the active set the integrator ended up in
std::optional<Vector> closed_form_on_active_set(const RecurrentNet& net, const Vector& i, const Vector& guess) {
  const std::size_t n = net.size();
  std::vector<std::size_t> act;
  for (std::size_t j = 0; j < n; ++j)
    if (guess[j] > 0) act.push_back(j);
  return analytic_partition_fixed_point(net, i, act);
}

}  // namespace

TEST_CASE("relu and derivative") {
  const Vector x{-1, 0, 2};
  CHECK(relu(x) == Vector{0, 0, 2});
  const Vector xi{1, 1};
  const auto d = derivative(kLinear, xi, xi);
  CHECK(d[0] == doctest::Approx(0.6));
  CHECK(d[1] == doctest::Approx(1.3));
}

TEST_CASE("integrate matches the closed-form linear decay") {
  const RecurrentNet single{Matrix{{0.0}}};
  const Vector x0{0.0}, in{1.0};
  const auto tr = integrate(single, x0, in, 1.0);
  CHECK(tr.t.front() == 0.0);
  CHECK(tr.t.back() == doctest::Approx(1.0));
  CHECK(tr.x.back()[0] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-6));

  // tau scales time
  const RecurrentNet slow{Matrix{{0.0}}, Vector{0.0}, 2.0};
  const auto ts = integrate(slow, x0, in, 2.0);
  CHECK(ts.x.back()[0] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("integration is insensitive to tighter tolerances") {
  const Vector x0{0.3, -0.2}, in{1.0, 0.4};
  FixedPointConfig tight;
  tight.rel_tol /= 2;
  tight.abs_tol /= 2;
  const auto a = integrate(kSpiral, x0, in, 20.0);
  const auto b = integrate(kSpiral, x0, in, 20.0, tight);
  CHECK(std::abs(a.x.back()[0] - b.x.back()[0]) < 1e-5);
  CHECK(std::abs(a.x.back()[1] - b.x.back()[1]) < 1e-5);
}

TEST_CASE("linear two-neuron system converges to (5, 10)") {
  const Vector in{1, 1};
  const auto o = find_fixed_point(kLinear, in);
  REQUIRE(o.verdict == Verdict::Converged);
  CHECK(std::abs((*o.f)[0] - 5.0) < 1e-3);
  CHECK(std::abs((*o.f)[1] - 10.0) < 1e-3);
  CHECK_FALSE(o.lambda_plus.has_value());
}

TEST_CASE("starting from rest reaches the same fixed point") {
  FixedPointConfig cfg;
  cfg.start_from_input = false;
  cfg.t_limit = 100;
  const Vector in{1, 1};
  const auto o = find_fixed_point(kLinear, in, cfg);
  REQUIRE(o.verdict == Verdict::Converged);
  CHECK(std::abs((*o.f)[0] - 5.0) < 1e-3);
  CHECK(std::abs((*o.f)[1] - 10.0) < 1e-3);
}

TEST_CASE("spiral system settles on one side of threshold") {
  const Vector in{1, 1};
  const auto o = find_fixed_point(kSpiral, in);
  REQUIRE(o.verdict == Verdict::Converged);
  CHECK(std::abs((*o.f)[0] - 10.0 / 3.0) < 1e-3);
  CHECK(std::abs((*o.f)[1] - (-1.8 + 1.0)) < 1e-3);
  const auto r = relu(*o.f);
  CHECK(r[1] == 0.0);
}

TEST_CASE("runaway excitation is gated") {
  const Vector in{1, 1};
  const auto o = find_fixed_point(kRunaway, in);
  CHECK(o.verdict == Verdict::Unstable);
  REQUIRE(o.lambda_plus.has_value());
  CHECK(std::abs(*o.lambda_plus - 1.3) < 1e-6);
  CHECK_FALSE(o.f.has_value());

  const auto s = stability_report(kRunaway, in);
  CHECK(s.unstable);
  CHECK(s.active_indices.size() == 2);
  for (double v : s.v_plus) CHECK(v > 0);
}

TEST_CASE("stability report on an inactive state") {
  const Vector x{-1, -1};
  const auto s = stability_report(kRunaway, x);
  CHECK(s.active_indices.empty());
  CHECK_FALSE(s.unstable);
}

TEST_CASE("analytic fixed point rejects inconsistent active sets") {
  const Vector in{1, 1};
  const std::vector<std::size_t> both{0, 1}, first{0}, none{};
  CHECK(analytic_partition_fixed_point(kLinear, in, both).has_value());
  CHECK_FALSE(analytic_partition_fixed_point(kSpiral, in, both).has_value());
  const auto f = analytic_partition_fixed_point(kSpiral, in, first);
  REQUIRE(f.has_value());
  CHECK((*f)[0] == doctest::Approx(10.0 / 3.0));
  // nothing active: f = i, consistent only if i <= 0
  CHECK_FALSE(analytic_partition_fixed_point(kSpiral, in, none).has_value());
  const Vector neg{-1, -0.5};
  CHECK(*analytic_partition_fixed_point(kSpiral, neg, none) == neg);
}

TEST_CASE("converged outcomes agree with the analytic solution on random nets") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto net = gen_random_net(3, seed);
    for (std::uint64_t k = 0; k < 10; ++k) {
      const auto in = sample_uniform_input(3, -1, 1, 1000 * seed + k);
      const auto o = find_fixed_point(net, in);
      if (o.verdict != Verdict::Converged) {
        if (o.verdict == Verdict::Unstable) CHECK(*o.lambda_plus > 1.0);
        continue;
      }
      const auto s = stability_report(net, *o.f);
      CHECK_FALSE(s.unstable);
      CHECK(norm_inf(derivative(net, *o.f, in)) <= 1e-3);
      const auto g = closed_form_on_active_set(net, in, *o.f);
      REQUIRE(g.has_value());
      for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs((*g)[j] - (*o.f)[j]) < 1e-3);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("size mismatches are rejected") {
  const Vector in{1, 1, 1};
  CHECK_THROWS_AS(find_fixed_point(kLinear, in), DimensionMismatch);
  CHECK_THROWS_AS(RecurrentNet(Matrix(2, 3)), DimensionMismatch);
}
