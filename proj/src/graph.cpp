#include "graphfilt/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "graphfilt/errors.hpp"
#include "graphfilt/filters.hpp"

namespace graphfilt {

void BfParams::validate() const {
  if (!(sigma_s > 0.0)) throw InvalidArgument("bilateral: sigma_s must be positive");
  if (!(sigma_r > 0.0)) throw InvalidArgument("bilateral: sigma_r must be positive");
  if (half_width < 1) throw InvalidArgument("bilateral: half_width must be at least 1");
}

void GfParams::validate() const {
  if (rho < 1 || rho % 2 == 0) throw InvalidArgument("guided: rho must be an odd positive integer");
  if (!(epsilon > 0.0)) throw InvalidArgument("guided: epsilon must be positive");
}

std::vector<std::size_t> neighborhood(const Shape& shape, std::size_t i, std::size_t half_width,
                                      Neighborhood kind) {
  if (i >= shape.size()) {
    throw InvalidArgument("neighborhood: vertex " + std::to_string(i) + " out of range");
  }
  std::vector<std::size_t> out;
  const std::size_t r = shape.row_of(i);
  const std::size_t c = shape.col_of(i);
  if (kind == Neighborhood::kStencil5) {
    if (r > 0) out.push_back(shape.index(r - 1, c));
    if (c > 0) out.push_back(i - 1);
    out.push_back(i);
    if (c + 1 < shape.cols()) out.push_back(i + 1);
    if (r + 1 < shape.rows()) out.push_back(shape.index(r + 1, c));
    return out;
  }
  const std::size_t row_hw = shape.is_grid() ? half_width : 0;
  const std::size_t r0 = r >= row_hw ? r - row_hw : 0;
  const std::size_t r1 = std::min(shape.rows() - 1, r + row_hw);
  const std::size_t c0 = c >= half_width ? c - half_width : 0;
  const std::size_t c1 = std::min(shape.cols() - 1, c + half_width);
  for (std::size_t rr = r0; rr <= r1; ++rr) {
    for (std::size_t cc = c0; cc <= c1; ++cc) out.push_back(shape.index(rr, cc));
  }
  return out;
}

WeightedGraph::WeightedGraph(std::size_t n, std::vector<double> self_loops, std::vector<Edge> edges)
    : n_(n), self_loops_(std::move(self_loops)) {
  if (self_loops_.empty()) self_loops_.assign(n_, 0.0);
  if (self_loops_.size() != n_) throw InvalidArgument("graph: self-loop vector has the wrong length");

  for (auto& e : edges) {
    if (e.i >= n_ || e.j >= n_) throw InvalidArgument("graph: edge endpoint out of range");
    if (e.i == e.j) throw InvalidArgument("graph: self-loops belong in the diagonal vector");
    if (!std::isfinite(e.weight)) throw InvalidArgument("graph: non-finite edge weight");
    if (e.i > e.j) std::swap(e.i, e.j);
  }
  std::sort(edges.begin(), edges.end(),
            [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  for (std::size_t k = 1; k < edges.size(); ++k) {
    if (edges[k].i == edges[k - 1].i && edges[k].j == edges[k - 1].j) {
      throw InvalidArgument("graph: duplicate edge (" + std::to_string(edges[k].i) + ", " +
                            std::to_string(edges[k].j) + ")");
    }
  }

  row_ptr_.assign(n_ + 1, 0);
  cols_.reserve(edges.size());
  vals_.reserve(edges.size());
  for (const auto& e : edges) {
    ++row_ptr_[e.i + 1];
    cols_.push_back(e.j);
    vals_.push_back(e.weight);
  }
  for (std::size_t i = 0; i < n_; ++i) row_ptr_[i + 1] += row_ptr_[i];

  degrees_ = self_loops_;
  for (const auto& e : edges) {
    degrees_[e.i] += e.weight;
    degrees_[e.j] += e.weight;
  }
}

double WeightedGraph::weight(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw InvalidArgument("graph: vertex out of range");
  if (i == j) return self_loops_[i];
  if (i > j) std::swap(i, j);
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return 0.0;
  return vals_[static_cast<std::size_t>(it - cols_.begin())];
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(cols_.size());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out.push_back({i, cols_[k], vals_[k]});
  }
  return out;
}

void WeightedGraph::multiply_adjacency(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_) throw InvalidArgument("graph: matvec size mismatch");
  for (std::size_t i = 0; i < n_; ++i) y[i] = self_loops_[i] * x[i];
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t j = cols_[k];
      acc += vals_[k] * x[j];
      y[j] += vals_[k] * x[i];
    }
    y[i] += acc;
  }
}

std::vector<double> WeightedGraph::recompute_degrees() const {
  const std::vector<double> ones(n_, 1.0);
  std::vector<double> d(n_);
  multiply_adjacency(ones, d);
  return d;
}

bool WeightedGraph::nonnegative() const {
  const auto neg = [](double w) { return w < 0.0; };
  return std::none_of(vals_.begin(), vals_.end(), neg) &&
         std::none_of(self_loops_.begin(), self_loops_.end(), neg);
}

WeightedGraph bf_graph(const Signal& guidance, const BfParams& params) {
  params.validate();
  const Shape& shape = guidance.shape();
  const double spatial = 1.0 / (2.0 * params.sigma_s * params.sigma_s);
  const double photometric = 1.0 / (2.0 * params.sigma_r * params.sigma_r);

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    for (std::size_t j : neighborhood(shape, i, params.half_width, params.neighborhood)) {
      if (j <= i) continue;
      const double dr = static_cast<double>(shape.row_of(j)) - static_cast<double>(shape.row_of(i));
      const double dc = static_cast<double>(shape.col_of(j)) - static_cast<double>(shape.col_of(i));
      const double dg = guidance[j] - guidance[i];
      edges.push_back({i, j, std::exp(-(dr * dr + dc * dc) * spatial) * std::exp(-dg * dg * photometric)});
    }
  }
  return WeightedGraph(shape.size(), std::vector<double>(shape.size(), 1.0), std::move(edges));
}

namespace {

struct AxisRange {
  std::size_t lo;
  std::size_t hi;  // inclusive
};

// Window centers k (along one axis) whose radius-r window contains both a and b.
AxisRange shared_centers(std::size_t a, std::size_t b, std::size_t r, std::size_t extent) {
  const std::size_t hi_ab = std::max(a, b);
  const std::size_t lo_ab = std::min(a, b);
  return {hi_ab >= r ? hi_ab - r : 0, std::min(extent - 1, lo_ab + r)};
}

}  // namespace

WeightedGraph gf_weight_matrix(const Signal& guidance, const GfParams& params) {
  params.validate();
  const Shape& shape = guidance.shape();
  const std::size_t n = shape.size();
  const std::size_t r = params.rho / 2;
  const std::size_t row_r = shape.is_grid() ? r : 0;
  const double window = shape.is_grid() ? static_cast<double>(params.rho * params.rho)
                                        : static_cast<double>(params.rho);
  const double prefactor = 1.0 / (window * window);

  // Window statistics exactly as the guided filter computes them.
  std::vector<double> g2(n);
  for (std::size_t i = 0; i < n; ++i) g2[i] = guidance[i] * guidance[i];
  const Signal mean_g = box_mean(guidance, params.rho);
  const Signal corr_g = box_mean(guidance.with_values(std::move(g2)), params.rho);
  std::vector<double> inv_var(n);
  for (std::size_t k = 0; k < n; ++k) {
    inv_var[k] = 1.0 / (corr_g[k] - mean_g[k] * mean_g[k] + params.epsilon);
  }

  const auto entry = [&](std::size_t i, std::size_t j) {
    const auto rows = shared_centers(shape.row_of(i), shape.row_of(j), row_r, shape.rows());
    const auto cols = shared_centers(shape.col_of(i), shape.col_of(j), r, shape.cols());
    double sum = 0.0;
    for (std::size_t kr = rows.lo; kr <= rows.hi; ++kr) {
      for (std::size_t kc = cols.lo; kc <= cols.hi; ++kc) {
        const std::size_t k = shape.index(kr, kc);
        sum += 1.0 + (guidance[i] - mean_g[k]) * (guidance[j] - mean_g[k]) * inv_var[k];
      }
    }
    return prefactor * sum;
  };

  std::vector<double> diag(n);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = entry(i, i);
    // pairs sharing at least one window are within 2r of each other on each axis
    for (std::size_t j : neighborhood(shape, i, 2 * r)) {
      if (j > i) edges.push_back({i, j, entry(i, j)});
    }
  }
  return WeightedGraph(n, std::move(diag), std::move(edges));
}

void DiagonalOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != diag_.size() || y.size() != diag_.size()) throw InvalidArgument("diagonal: size mismatch");
  for (std::size_t i = 0; i < diag_.size(); ++i) y[i] = diag_[i] * x[i];
}

void DiagonalOperator::solve(std::span<const double> x, std::span<double> y) const {
  if (x.size() != diag_.size() || y.size() != diag_.size()) throw InvalidArgument("diagonal: size mismatch");
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    if (diag_[i] == 0.0) throw SingularError("diagonal solve: zero entry at index " + std::to_string(i));
    y[i] = x[i] / diag_[i];
  }
}

DiagonalOperator DiagonalOperator::inverse() const {
  std::vector<double> inv(diag_.size());
  const std::vector<double> ones(diag_.size(), 1.0);
  solve(ones, inv);
  return DiagonalOperator(std::move(inv));
}

DiagonalOperator degree_operator(const WeightedGraph& graph) {
  return DiagonalOperator(std::vector<double>(graph.degrees().begin(), graph.degrees().end()));
}

std::vector<double> degree_matvec(const WeightedGraph& graph, std::span<const double> x) {
  std::vector<double> y(x.size());
  degree_operator(graph).apply(x, y);
  return y;
}

std::vector<double> degree_solve(const WeightedGraph& graph, std::span<const double> x) {
  std::vector<double> y(x.size());
  degree_operator(graph).solve(x, y);
  return y;
}

bool gershgorin_check(const WeightedGraph& graph) {
  const auto d = graph.degrees();
  return d.empty() || *std::max_element(d.begin(), d.end()) <= 2.0;
}

LaplacianOperator::LaplacianOperator(WeightedGraph graph, bool normalized)
    : graph_(std::move(graph)), normalized_(normalized) {
  if (!normalized_) return;
  scale_.resize(graph_.size());
  const auto d = graph_.degrees();
  const auto loops = graph_.self_loops();
  for (std::size_t i = 0; i < graph_.size(); ++i) {
    const double lii = d[i] - loops[i];
    if (!(lii > 0.0)) {
      throw SingularError("normalized laplacian: diagonal entry " + std::to_string(i) + " is not positive");
    }
    scale_[i] = 1.0 / std::sqrt(lii);
  }
}

void LaplacianOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  if (x.size() != n || y.size() != n) throw InvalidArgument("laplacian: size mismatch");
  const auto d = graph_.degrees();
  if (!normalized_) {
    graph_.multiply_adjacency(x, y);
    for (std::size_t i = 0; i < n; ++i) y[i] = d[i] * x[i] - y[i];
    return;
  }
  std::vector<double> sx(n);
  for (std::size_t i = 0; i < n; ++i) sx[i] = scale_[i] * x[i];
  graph_.multiply_adjacency(sx, y);
  for (std::size_t i = 0; i < n; ++i) y[i] = scale_[i] * (d[i] * sx[i] - y[i]);
}

std::vector<double> LaplacianOperator::apply(std::span<const double> x) const {
  std::vector<double> y(x.size());
  apply(x, y);
  return y;
}

std::vector<double> LaplacianOperator::diagonal() const {
  if (normalized_) return std::vector<double>(size(), 1.0);
  std::vector<double> out(size());
  const auto d = graph_.degrees();
  const auto loops = graph_.self_loops();
  for (std::size_t i = 0; i < size(); ++i) out[i] = d[i] - loops[i];
  return out;
}

LaplacianOperator laplacian(const WeightedGraph& graph, bool normalized) {
  return LaplacianOperator(graph, normalized);
}

}  // namespace graphfilt
