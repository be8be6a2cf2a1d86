#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "fpnet/errors.hpp"
#include "fpnet/linalg.hpp"
#include "fpnet/rng.hpp"

using namespace fpnet;

namespace {

Matrix random_matrix(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed, 99);
  Matrix m(n, n);
  for (auto& v : m.entries()) v = rng.uniform(-2, 2);
  return m;
}

// cofactor expansion, fine for tiny n
double det(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  double d = 0;
  for (std::size_t c = 0; c < n; ++c) {
    Matrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t k = 0, kk = 0; k < n; ++k)
        if (k != c) minor(r - 1, kk++) = a(r, k);
    d += (c % 2 ? -1.0 : 1.0) * a(0, c) * det(minor);
  }
  return d;
}

}  // namespace

TEST_CASE("solve_linear on a 2x2 system") {
  const Matrix a{{0.6, -0.2}, {-0.8, 0.5}};
  const Vector rhs{1, 1};
  const auto x = solve_linear(a, rhs);
  CHECK(x[0] == doctest::Approx(5.0));
  CHECK(x[1] == doctest::Approx(10.0));
}

TEST_CASE("solve_linear residual on random systems") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Matrix a = random_matrix(6, s);
    CounterRng rng(s, 1);
    Vector b(6);
    for (auto& v : b) v = rng.uniform(-1, 1);
    const auto x = solve_linear(a, b);
    const auto ax = multiply(a, x);
    for (std::size_t k = 0; k < 6; ++k) CHECK(ax[k] == doctest::Approx(b[k]).epsilon(1e-9));
  }
}

TEST_CASE("singular matrix is reported") {
  const Matrix a{{1, 2}, {2, 4}};
  const Vector b{1, 1};
  CHECK_THROWS_AS(solve_linear(a, b), SingularMatrix);
}

TEST_CASE("2x2 eigenvalues match the quadratic formula") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Matrix a = random_matrix(2, s);
    const double tr = a(0, 0) + a(1, 1);
    const double dt = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const std::complex<double> root = std::sqrt(std::complex<double>(tr * tr / 4 - dt, 0));
    std::complex<double> l1 = tr / 2 + root, l2 = tr / 2 - root;
    if (l1.real() < l2.real() || (l1.real() == l2.real() && l1.imag() < l2.imag())) std::swap(l1, l2);
    const auto ev = eigenvalues(a);
    REQUIRE(ev.size() == 2);
    CHECK(std::abs(ev[0] - l1) < 1e-10);
    CHECK(std::abs(ev[1] - l2) < 1e-10);
  }
}

TEST_CASE("complex pair of the oscillatory two-neuron system") {
  const Matrix a{{0.70, 0.11}, {-0.54, 0.98}};
  const auto ev = eigenvalues(a);
  CHECK(ev[0].real() == doctest::Approx(0.84).epsilon(1e-12));
  CHECK(ev[0].imag() == doctest::Approx(std::sqrt(0.0398)).epsilon(1e-12));
  CHECK(ev[1].imag() == doctest::Approx(-std::sqrt(0.0398)).epsilon(1e-12));
}

TEST_CASE("eigenvalue sum and product equal trace and determinant") {
  for (std::size_t n : {3u, 4u, 5u}) {
    for (std::uint64_t s = 0; s < 30; ++s) {
      const Matrix a = random_matrix(n, 1000 * n + s);
      const auto ev = eigenvalues(a);
      REQUIRE(ev.size() == n);
      std::complex<double> sum = 0, prod = 1;
      for (const auto& l : ev) {
        sum += l;
        prod *= l;
      }
      double tr = 0;
      for (std::size_t k = 0; k < n; ++k) tr += a(k, k);
      CHECK(std::abs(sum - tr) < 1e-9);
      CHECK(std::abs(prod - det(a)) < 1e-8 * std::max(1.0, std::abs(det(a))));
      for (std::size_t k = 1; k < n; ++k) CHECK(ev[k - 1].real() >= ev[k].real() - 1e-10);
    }
  }
}

TEST_CASE("eigenvalues of larger symmetric matrices are real and sum to the trace") {
  const std::size_t n = 30;
  Matrix a = random_matrix(n, 5);
  const Matrix s = [&] {
    Matrix t(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) t(r, c) = a(r, c) + a(c, r);
    return t;
  }();
  const auto ev = eigenvalues(s);
  double sum = 0, tr = 0;
  for (const auto& l : ev) {
    CHECK(std::abs(l.imag()) < 1e-9);
    sum += l.real();
  }
  for (std::size_t k = 0; k < n; ++k) tr += s(k, k);
  CHECK(sum == doctest::Approx(tr).epsilon(1e-9));
}

TEST_CASE("dominant eigenpair satisfies A v = lambda v") {
  const Matrix a{{1.2, 0.1}, {0.1, 1.2}};
  const auto p = dominant_real_eigenpair(a);
  CHECK(p.value_re == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(p.value_im == 0.0);
  CHECK(p.vector[0] == doctest::Approx(std::sqrt(0.5)));
  CHECK(p.vector[1] == doctest::Approx(std::sqrt(0.5)));

  for (std::uint64_t s = 0; s < 50; ++s) {
    const Matrix m = random_matrix(4, 700 + s);
    const auto q = dominant_real_eigenpair(m);
    CHECK(norm2(q.vector) == doctest::Approx(1.0));
    if (q.value_im != 0.0) continue;
    const auto mv = multiply(m, q.vector);
    for (std::size_t k = 0; k < 4; ++k) CHECK(mv[k] == doctest::Approx(q.value_re * q.vector[k]).epsilon(1e-7));
  }
}

TEST_CASE("matrix helpers") {
  const Matrix a{{1, 2, 3}, {4, 5, 6}};
  const Matrix t = transpose(a);
  CHECK(t.rows() == 3);
  CHECK(t(2, 1) == 6);
  CHECK(a.norm_inf() == 15);
  const Matrix sq{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  const std::vector<std::size_t> idx{0, 2};
  const Matrix sub = submatrix(sq, idx);
  CHECK(sub == Matrix{{1, 3}, {7, 9}});
  CHECK(multiply(Matrix::identity(3), sq) == sq);
  CHECK_THROWS_AS(multiply(a, a), DimensionMismatch);
}
