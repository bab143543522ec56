#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graphfilt/graph.hpp"
#include "graphfilt/signal.hpp"

namespace graphfilt {

/// Largest matrix order the dense routines accept.
inline constexpr std::size_t kDenseCap = 4096;

/// Row-major dense real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::vector<double> multiply(std::span<const double> x) const;
  std::vector<double> multiply_transposed(std::span<const double> x) const;
  DenseMatrix operator*(const DenseMatrix& other) const;
  DenseMatrix transposed() const;
  double max_abs() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// L = U diag(lambda) U^T with ascending eigenvalues and unit eigenvector columns.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  DenseMatrix eigenvectors;  // column i pairs with eigenvalues[i]

  std::size_t size() const noexcept { return eigenvalues.size(); }
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// The input is symmetrized by averaging; asymmetry above 1e-12 (relative to
/// max |a_ij|, at least absolute) is rejected with InvalidArgument. Orders
/// above kDenseCap raise CapacityError. Sweeps run until the off-diagonal
/// Frobenius norm is at most 1e-12 of the full norm. Each eigenvector's first
/// component with magnitude above 1e-12 is made positive.
SpectralDecomposition eig_sym(const DenseMatrix& matrix);

DenseMatrix to_dense(const LaplacianOperator& op);
DenseMatrix adjacency_dense(const WeightedGraph& graph);

/// Forward graph Fourier transform U^T x.
std::vector<double> gft(const SpectralDecomposition& decomp, std::span<const double> x);

/// Inverse transform U c, laid out with `shape`.
Signal igft(const SpectralDecomposition& decomp, std::span<const double> coefficients, const Shape& shape);
Signal igft(const SpectralDecomposition& decomp, std::span<const double> coefficients);

/// Keeps only the GFT coefficients whose eigenvalue is <= cutoff.
Signal ideal_lowpass(const SpectralDecomposition& decomp, const Signal& x, double cutoff);

}  // namespace graphfilt
