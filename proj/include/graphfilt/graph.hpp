#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graphfilt/signal.hpp"

namespace graphfilt {

/// Which pixels count as neighbors of a pixel.
enum class Neighborhood {
  kWindow,    // all pixels within half_width in every axis (box window)
  kStencil5,  // self plus the four axis neighbors (2D); same as kWindow/half_width=1 in 1D
};

/// Bilateral weights: w_ij = exp(-|p_i-p_j|^2 / (2 sigma_s^2)) * exp(-|g_i-g_j|^2 / (2 sigma_r^2)).
struct BfParams {
  double sigma_s = 1.0;
  double sigma_r = 0.1;
  std::size_t half_width = 1;
  Neighborhood neighborhood = Neighborhood::kWindow;

  void validate() const;
};

/// Guided-filter parameters: mean-filter width rho (odd) and regularizer epsilon.
struct GfParams {
  std::size_t rho = 5;
  double epsilon = 0.01;

  void validate() const;
};

/// Neighbors of vertex i (including i), ascending.
std::vector<std::size_t> neighborhood(const Shape& shape, std::size_t i, std::size_t half_width,
                                      Neighborhood kind = Neighborhood::kWindow);

struct Edge {
  std::size_t i;
  std::size_t j;
  double weight;
};

/// Symmetric weighted adjacency W with degrees d_i = sum_j w_ij.
///
/// Storage keeps the diagonal (self-loops) separately and every off-diagonal
/// pair once, compressed by row over the upper triangle, so W = W^T holds
/// structurally. Weights are not required to be nonnegative: guided-filter
/// matrices carry small negative entries.
class WeightedGraph {
 public:
  /// `self_loops` is the diagonal of W (empty means all zero). Each edge
  /// must have i != j; an unordered pair may appear at most once.
  WeightedGraph(std::size_t n, std::vector<double> self_loops, std::vector<Edge> edges);

  std::size_t size() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return cols_.size(); }
  std::span<const double> degrees() const noexcept { return degrees_; }
  std::span<const double> self_loops() const noexcept { return self_loops_; }

  /// w_ij, zero when the pair is not stored.
  double weight(std::size_t i, std::size_t j) const;

  /// Every off-diagonal pair once with i < j, in row-major order.
  std::vector<Edge> edges() const;

  /// y = W x.
  void multiply_adjacency(std::span<const double> x, std::span<double> y) const;

  /// Row sums of W recomputed from the stored weights.
  std::vector<double> recompute_degrees() const;

  bool nonnegative() const;

 private:
  std::size_t n_;
  std::vector<double> self_loops_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
  std::vector<double> degrees_;
};

/// Bilateral-filter graph over guidance pixels, self-loops w_ii = 1.
WeightedGraph bf_graph(const Signal& guidance, const BfParams& params);

/// Implicit guided-filter matrix W(g):
///   W_ij = 1/|w|^2 * sum_{k : i,j in w_k} (1 + (g_i - mu_k)(g_j - mu_k) / (var_k + eps))
/// Windows w_k are truncated at the border and mu_k/var_k use the truncated
/// window, while the prefactor keeps the full-window count |w| (rho in 1D,
/// rho^2 in 2D). Rows whose windows are all complete therefore sum to 1;
/// rows near the border do not.
WeightedGraph gf_weight_matrix(const Signal& guidance, const GfParams& params);

/// Diagonal matrix acting componentwise; used for D, D^-1 and preconditioners.
class DiagonalOperator {
 public:
  explicit DiagonalOperator(std::vector<double> diagonal) : diag_(std::move(diagonal)) {}
  static DiagonalOperator identity(std::size_t n) { return DiagonalOperator(std::vector<double>(n, 1.0)); }

  std::size_t size() const noexcept { return diag_.size(); }
  std::span<const double> values() const noexcept { return diag_; }

  void apply(std::span<const double> x, std::span<double> y) const;
  /// Throws SingularError on a zero diagonal entry.
  void solve(std::span<const double> x, std::span<double> y) const;
  DiagonalOperator inverse() const;

 private:
  std::vector<double> diag_;
};

DiagonalOperator degree_operator(const WeightedGraph& graph);

std::vector<double> degree_matvec(const WeightedGraph& graph, std::span<const double> x);
/// x_i / d_i; throws SingularError if some d_i == 0.
std::vector<double> degree_solve(const WeightedGraph& graph, std::span<const double> x);

/// True iff max_i d_i <= 2.
bool gershgorin_check(const WeightedGraph& graph);

/// Matrix-free L = D - W, or S L S with S = diag(L)^(-1/2) when normalized.
class LaplacianOperator {
 public:
  /// Throws SingularError for a normalized operator when some diag(L)_i <= 0.
  LaplacianOperator(WeightedGraph graph, bool normalized);

  std::size_t size() const noexcept { return graph_.size(); }
  bool normalized() const noexcept { return normalized_; }
  const WeightedGraph& graph() const noexcept { return graph_; }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  /// Diagonal of the operator (unit for the normalized form).
  std::vector<double> diagonal() const;

 private:
  WeightedGraph graph_;
  bool normalized_;
  std::vector<double> scale_;  // diag(L)^(-1/2), normalized form only
};

LaplacianOperator laplacian(const WeightedGraph& graph, bool normalized = false);

}  // namespace graphfilt
