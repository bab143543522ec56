#include "graphfilt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "graphfilt/errors.hpp"

namespace graphfilt {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw InvalidArgument("dense: matvec size mismatch");
  std::vector<double> y(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

std::vector<double> DenseMatrix::multiply_transposed(std::span<const double> x) const {
  if (x.size() != rows_) throw InvalidArgument("dense: matvec size mismatch");
  std::vector<double> y(cols_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) y[c] += (*this)(r, c) * x[r];
  }
  return y;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& other) const {
  if (cols_ != other.rows_) throw InvalidArgument("dense: product size mismatch");
  DenseMatrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(r, k);
      if (a == 0.0) continue;
      for (std::size_t c = 0; c < other.cols_; ++c) out(r, c) += a * other(k, c);
    }
  }
  return out;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  }
  return out;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

SpectralDecomposition eig_sym(const DenseMatrix& matrix) {
  const std::size_t n = matrix.rows();
  if (matrix.cols() != n) throw InvalidArgument("eig_sym: matrix is not square");
  if (n > kDenseCap) {
    throw CapacityError("eig_sym: order " + std::to_string(n) + " exceeds the dense cap of " +
                        std::to_string(kDenseCap));
  }
  const double tol = 1e-12 * std::max(1.0, matrix.max_abs());
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(matrix(i, j) - matrix(j, i)) > tol) {
        throw InvalidArgument("eig_sym: matrix is not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      }
      a(i, j) = 0.5 * (matrix(i, j) + matrix(j, i));
    }
  }
  DenseMatrix v = DenseMatrix::identity(n);

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) total += a(i, j) * a(i, j);
  }
  const double threshold = 1e-12 * std::sqrt(total);
  const auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    }
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // symmetric Schur decomposition of the (p, q) 2x2 block
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  SpectralDecomposition out{std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.eigenvalues[col] = a(src, src);
    double sign = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(v(k, src)) > 1e-12) {
        sign = v(k, src) > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, col) = sign * v(k, src);
  }
  return out;
}

DenseMatrix to_dense(const LaplacianOperator& op) {
  const std::size_t n = op.size();
  if (n > kDenseCap) throw CapacityError("to_dense: order " + std::to_string(n) + " exceeds the dense cap");
  DenseMatrix out(n, n);
  std::vector<double> unit(n, 0.0);
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n; ++j) {
    unit[j] = 1.0;
    op.apply(unit, col);
    unit[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) out(i, j) = col[i];
  }
  return out;
}

DenseMatrix adjacency_dense(const WeightedGraph& graph) {
  const std::size_t n = graph.size();
  if (n > kDenseCap) throw CapacityError("adjacency_dense: order exceeds the dense cap");
  DenseMatrix out(n, n);
  const auto loops = graph.self_loops();
  for (std::size_t i = 0; i < n; ++i) out(i, i) = loops[i];
  for (const auto& e : graph.edges()) {
    out(e.i, e.j) = e.weight;
    out(e.j, e.i) = e.weight;
  }
  return out;
}

std::vector<double> gft(const SpectralDecomposition& decomp, std::span<const double> x) {
  if (x.size() != decomp.size()) throw InvalidArgument("gft: signal length differs from the decomposition order");
  return decomp.eigenvectors.multiply_transposed(x);
}

Signal igft(const SpectralDecomposition& decomp, std::span<const double> coefficients, const Shape& shape) {
  if (coefficients.size() != decomp.size() || shape.size() != decomp.size()) {
    throw InvalidArgument("igft: coefficient count differs from the decomposition order");
  }
  return Signal(decomp.eigenvectors.multiply(coefficients), shape);
}

Signal igft(const SpectralDecomposition& decomp, std::span<const double> coefficients) {
  return igft(decomp, coefficients, Shape::length(coefficients.size()));
}

Signal ideal_lowpass(const SpectralDecomposition& decomp, const Signal& x, double cutoff) {
  if (!(cutoff >= 0.0)) throw InvalidArgument("ideal_lowpass: cutoff must be nonnegative");
  auto coefficients = gft(decomp, x.values());
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (decomp.eigenvalues[i] > cutoff) coefficients[i] = 0.0;
  }
  return igft(decomp, coefficients, x.shape());
}

}  // namespace graphfilt
