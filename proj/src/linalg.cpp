#include "fpnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fpnet/errors.hpp"

namespace fpnet {

namespace {

void require_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("matrix entries must be finite");
  }
}

void require_square(const Matrix& a, const char* op) {
  if (!a.square()) {
    throw DimensionMismatch(std::string(op) + ": matrix is " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + ", expected square");
  }
}

constexpr double kTieTolerance = 1e-10;

bool eigen_order(const std::complex<double>& a, const std::complex<double>& b) {
  if (std::abs(a.real() - b.real()) > kTieTolerance) return a.real() > b.real();
  const bool a_real = a.imag() == 0.0;
  const bool b_real = b.imag() == 0.0;
  if (a_real != b_real) return a_real;
  return a.imag() > b.imag();
}

// Householder reduction to upper Hessenberg form (EISPACK orthes).
void to_hessenberg(std::vector<double>& h, std::size_t n) {
  auto at = [&](std::size_t r, std::size_t c) -> double& { return h[r * n + c]; };
  std::vector<double> ort(n, 0.0);
  const std::size_t high = n - 1;
  for (std::size_t m = 1; m + 1 <= high; ++m) {
    double scale = 0.0;
    for (std::size_t i = m; i <= high; ++i) scale += std::abs(at(i, m - 1));
    if (scale == 0.0) continue;
    double hsum = 0.0;
    for (std::size_t i = high + 1; i-- > m;) {
      ort[i] = at(i, m - 1) / scale;
      hsum += ort[i] * ort[i];
    }
    double g = std::sqrt(hsum);
    if (ort[m] > 0) g = -g;
    hsum -= ort[m] * g;
    ort[m] -= g;
    for (std::size_t j = m; j < n; ++j) {
      double f = 0.0;
      for (std::size_t i = high + 1; i-- > m;) f += ort[i] * at(i, j);
      f /= hsum;
      for (std::size_t i = m; i <= high; ++i) at(i, j) -= f * ort[i];
    }
    for (std::size_t i = 0; i <= high; ++i) {
      double f = 0.0;
      for (std::size_t j = high + 1; j-- > m;) f += ort[j] * at(i, j);
      f /= hsum;
      for (std::size_t j = m; j <= high; ++j) at(i, j) -= f * ort[j];
    }
    ort[m] *= scale;
    at(m, m - 1) = scale * g;
  }
  for (std::size_t r = 2; r < n; ++r) {
    for (std::size_t c = 0; c + 1 < r; ++c) at(r, c) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (EISPACK hqr, with
// the exceptional shifts used by JAMA). Eigenvalues only.
std::vector<std::complex<double>> hessenberg_qr(std::vector<double>& h, int nn) {
  auto H = [&](int r, int c) -> double& { return h[static_cast<std::size_t>(r) * nn + c]; };
  std::vector<double> d(nn, 0.0), e(nn, 0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  const int low = 0;
  int n = nn - 1;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, w, x, y;

  double norm = 0.0;
  for (int i = 0; i < nn; ++i) {
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(H(i, j));
  }

  const long max_sweeps = 100L * nn;
  long sweeps = 0;
  int iter = 0;
  while (n >= low) {
    int l = n;
    while (l > low) {
      s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(H(l, l - 1)) < eps * s) break;
      --l;
    }

    if (l == n) {
      H(n, n) += exshift;
      d[n] = H(n, n);
      e[n] = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = H(n, n - 1) * H(n - 1, n);
      p = (H(n - 1, n - 1) - H(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      H(n, n) += exshift;
      H(n - 1, n - 1) += exshift;
      x = H(n, n);
      if (q >= 0) {
        z = (p >= 0) ? p + z : p - z;
        d[n - 1] = x + z;
        d[n] = d[n - 1];
        if (z != 0.0) d[n] = x - w / z;
        e[n - 1] = 0.0;
        e[n] = 0.0;
      } else {
        d[n - 1] = x + p;
        d[n] = x + p;
        e[n - 1] = z;
        e[n] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      if (++sweeps > max_sweeps) {
        throw NoConvergence("QR iteration exceeded " + std::to_string(max_sweeps) + " sweeps");
      }
      x = H(n, n);
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = H(n - 1, n - 1);
        w = H(n, n - 1) * H(n - 1, n);
      }
      if (iter == 10) {
        exshift += x;
        for (int i = low; i <= n; ++i) H(i, i) -= x;
        s = std::abs(H(n, n - 1)) + std::abs(H(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (int i = low; i <= n; ++i) H(i, i) -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;

      int m = n - 2;
      while (m >= l) {
        z = H(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / H(m + 1, m) + H(m, m + 1);
        q = H(m + 1, m + 1) - z - r - s;
        r = H(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::abs(H(m, m - 1)) * (std::abs(q) + std::abs(r)) <
            eps * (std::abs(p) * (std::abs(H(m - 1, m - 1)) + std::abs(z) + std::abs(H(m + 1, m + 1))))) {
          break;
        }
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        H(i, i - 2) = 0.0;
        if (i > m + 2) H(i, i - 3) = 0.0;
      }

      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = H(k, k - 1);
          q = H(k + 1, k - 1);
          r = notlast ? H(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s == 0) continue;
        if (k != m) {
          H(k, k - 1) = -s * x;
        } else if (l != m) {
          H(k, k - 1) = -H(k, k - 1);
        }
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j < nn; ++j) {
          p = H(k, j) + q * H(k + 1, j);
          if (notlast) {
            p += r * H(k + 2, j);
            H(k + 2, j) -= p * z;
          }
          H(k, j) -= p * x;
          H(k + 1, j) -= p * y;
        }
        for (int i = 0; i <= std::min(n, k + 3); ++i) {
          p = x * H(i, k) + y * H(i, k + 1);
          if (notlast) {
            p += z * H(i, k + 2);
            H(i, k + 2) -= p * r;
          }
          H(i, k) -= p;
          H(i, k + 1) -= p * q;
        }
      }
    }
  }

  std::vector<std::complex<double>> out(nn);
  for (int i = 0; i < nn; ++i) out[i] = {d[i], e[i]};
  return out;
}

using cplx = std::complex<double>;

// In-place LU with partial pivoting on a complex matrix; near-zero pivots are
// nudged rather than rejected since inverse iteration deliberately factors a
// nearly singular matrix.
void complex_lu(std::vector<cplx>& a, std::vector<std::size_t>& piv, std::size_t n, double tiny) {
  piv.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    double best_mag = std::abs(a[k * n + k]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double mag = std::abs(a[i * n + k]);
      if (mag > best_mag) {
        best_mag = mag;
        best = i;
      }
    }
    piv[k] = best;
    if (best != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[best * n + j]);
    }
    if (std::abs(a[k * n + k]) < tiny) a[k * n + k] = tiny;
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a[i * n + k] / a[k * n + k];
      a[i * n + k] = f;
      for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
    }
  }
}

void complex_lu_solve(const std::vector<cplx>& lu, const std::vector<std::size_t>& piv,
                      std::vector<cplx>& b, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    if (piv[k] != k) std::swap(b[k], b[piv[k]]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) b[i] -= lu[i * n + j] * b[j];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) b[i] -= lu[i * n + j] * b[j];
    b[i] /= lu[i * n + i];
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  require_finite(data_);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionMismatch("matrix entry count " + std::to_string(data_.size()) + " != " +
                            std::to_string(rows) + "x" + std::to_string(cols));
  }
  require_finite(data_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged matrix initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
  require_finite(data_);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double Matrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (double v : row(r)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

Vector multiply(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw DimensionMismatch("multiply: " + std::to_string(a.cols()) + " columns vs vector of " +
                            std::to_string(x.size()));
  }
  Vector y(a.rows(), 0.0);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double acc = 0.0;
    const auto row = a.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
  }
  return t;
}

Matrix submatrix(const Matrix& a, std::span<const std::size_t> idx) {
  Matrix s(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) s(r, c) = a(idx[r], idx[c]);
  }
  return s;
}

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

Vector solve_linear(const Matrix& a, std::span<const double> rhs) {
  require_square(a, "solve_linear");
  const std::size_t n = a.rows();
  if (rhs.size() != n) throw DimensionMismatch("solve_linear: rhs length mismatch");
  std::vector<double> m(a.entries().begin(), a.entries().end());
  Vector x(rhs.begin(), rhs.end());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(m[i * n + k]) > std::abs(m[best * n + k])) best = i;
    }
    if (std::abs(m[best * n + k]) < 1e-12) {
      throw SingularMatrix("solve_linear: pivot below 1e-12 at column " + std::to_string(k));
    }
    if (best != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[best * n + j]);
      std::swap(x[k], x[best]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m[i * n + k] / m[k * n + k];
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) m[i * n + j] -= f * m[k * n + j];
      x[i] -= f * x[k];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= m[i * n + j] * x[j];
    x[i] = acc / m[i * n + i];
  }
  return x;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  require_square(a, "eigenvalues");
  const std::size_t n = a.rows();
  if (n > 64) throw std::invalid_argument("eigenvalues: matrices above 64x64 are not supported");
  if (n == 0) return {};
  std::vector<double> h(a.entries().begin(), a.entries().end());
  to_hessenberg(h, n);
  auto vals = hessenberg_qr(h, static_cast<int>(n));
  std::stable_sort(vals.begin(), vals.end(), eigen_order);
  return vals;
}

EigenPair dominant_real_eigenpair(const Matrix& a) {
  const auto vals = eigenvalues(a);
  if (vals.empty()) throw std::invalid_argument("dominant_real_eigenpair: empty matrix");
  const std::size_t n = a.rows();
  const cplx lambda = vals.front();

  const double scale = std::max(1.0, a.norm_inf());
  std::vector<cplx> lu(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) lu[r * n + c] = a(r, c);
    lu[r * n + r] -= lambda + 1e-10;
  }
  std::vector<std::size_t> piv;
  complex_lu(lu, piv, n, std::numeric_limits<double>::epsilon() * scale);

  // Deterministic, non-symmetric start so it is unlikely to be orthogonal to
  // the target eigenvector.
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i + 1) / static_cast<double>(n);

  auto normalize = [&](std::vector<cplx>& u) {
    double s = 0.0;
    for (const auto& x : u) s += std::norm(x);
    s = std::sqrt(s);
    for (auto& x : u) x /= s;
  };
  normalize(v);

  auto residual = [&](const std::vector<cplx>& u) {
    double worst = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      cplx acc = -lambda * u[r];
      for (std::size_t c = 0; c < n; ++c) acc += a(r, c) * u[c];
      worst = std::max(worst, std::abs(acc));
    }
    return worst;
  };

  constexpr int kMaxSteps = 50;
  const double tol = 1e-8 * scale;
  bool converged = false;
  for (int step = 0; step < kMaxSteps; ++step) {
    complex_lu_solve(lu, piv, v, n);
    for (const auto& x : v) {
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) {
        throw NoConvergence("inverse iteration produced a non-finite vector");
      }
    }
    normalize(v);
    if (residual(v) <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NoConvergence("inverse iteration did not converge within 50 steps");

  // Rotate so the largest component is real and positive, then keep the real part.
  std::size_t big = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(v[i]) > std::abs(v[big])) big = i;
  }
  const cplx phase = std::conj(v[big]) / std::abs(v[big]);
  EigenPair out;
  out.value_re = lambda.real();
  out.value_im = lambda.imag();
  out.vector.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.vector[i] = (v[i] * phase).real();
  const double len = norm2(out.vector);
  for (auto& x : out.vector) x /= len;

  std::size_t big_re = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(out.vector[i]) > std::abs(out.vector[big_re])) big_re = i;
  }
  if (out.vector[big_re] < 0) {
    for (auto& x : out.vector) x = -x;
  }
  return out;
}

}  // namespace fpnet
