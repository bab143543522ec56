#include "graphfilt/filters.hpp"

#include <algorithm>

#include "graphfilt/errors.hpp"

namespace graphfilt {

void FilterConfig::validate(const Shape& input_shape) const {
  std::visit([](const auto& p) { p.validate(); }, params);
  if (iterations < 1) throw InvalidArgument("filter: iterations must be at least 1");
  if (guidance && guidance->shape() != input_shape) {
    throw InvalidArgument("filter: guidance shape differs from the input shape");
  }
}

Signal bf_apply(const Signal& x, const WeightedGraph& graph) {
  if (graph.size() != x.size()) throw InvalidArgument("bf_apply: graph and signal sizes differ");
  std::vector<double> wx(x.size());
  graph.multiply_adjacency(x.values(), wx);
  return x.with_values(degree_solve(graph, wx));
}

Signal bf_apply_laplacian_form(const Signal& x, const WeightedGraph& graph) {
  if (graph.size() != x.size()) throw InvalidArgument("bf_apply: graph and signal sizes differ");
  const auto lx = LaplacianOperator(graph, false).apply(x.values());
  const auto step = degree_solve(graph, lx);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - step[i];
  return x.with_values(std::move(y));
}

Signal bf_iterate(const Signal& x, const FilterConfig& config) {
  const auto* params = std::get_if<BfParams>(&config.params);
  if (params == nullptr) throw InvalidArgument("bf_iterate: configuration has no bilateral parameters");
  config.validate(x.shape());

  Signal y = x;
  if (config.mode == IterationMode::kFixedGuidance) {
    const WeightedGraph graph = bf_graph(config.guidance ? *config.guidance : x, *params);
    for (std::size_t k = 0; k < config.iterations; ++k) y = bf_apply(y, graph);
    return y;
  }
  // The first pass may use an explicit guidance; later passes are self-guided.
  for (std::size_t k = 0; k < config.iterations; ++k) {
    const Signal& guide = (k == 0 && config.guidance) ? *config.guidance : y;
    y = bf_apply(y, bf_graph(guide, *params));
  }
  return y;
}

namespace {

// Truncated moving average along one axis of a rows x cols array.
void mean_along(std::vector<double>& data, std::size_t rows, std::size_t cols, std::size_t r,
                bool along_rows) {
  const std::size_t lines = along_rows ? cols : rows;
  const std::size_t extent = along_rows ? rows : cols;
  const auto at = [&](std::size_t line, std::size_t pos) -> double& {
    return along_rows ? data[pos * cols + line] : data[line * cols + pos];
  };
  std::vector<double> buf(extent);
  for (std::size_t line = 0; line < lines; ++line) {
    for (std::size_t p = 0; p < extent; ++p) {
      const std::size_t lo = p >= r ? p - r : 0;
      const std::size_t hi = std::min(extent - 1, p + r);
      double sum = 0.0;
      for (std::size_t q = lo; q <= hi; ++q) sum += at(line, q);
      buf[p] = sum / static_cast<double>(hi - lo + 1);
    }
    for (std::size_t p = 0; p < extent; ++p) at(line, p) = buf[p];
  }
}

std::vector<double> multiply(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

Signal box_mean(const Signal& x, std::size_t rho) {
  if (rho < 1 || rho % 2 == 0) throw InvalidArgument("box_mean: rho must be an odd positive integer");
  if (rho == 1) return x;
  std::vector<double> data(x.values().begin(), x.values().end());
  const Shape& shape = x.shape();
  mean_along(data, shape.rows(), shape.cols(), rho / 2, false);
  if (shape.is_grid()) mean_along(data, shape.rows(), shape.cols(), rho / 2, true);
  return x.with_values(std::move(data));
}

Signal gf_apply(const Signal& x, const Signal& g, const GfParams& params) {
  params.validate();
  if (x.shape() != g.shape()) throw InvalidArgument("gf_apply: input and guidance shapes differ");
  const std::size_t n = x.size();
  const std::size_t rho = params.rho;

  const Signal mean_g = box_mean(g, rho);
  const Signal mean_x = box_mean(x, rho);
  const Signal corr_g = box_mean(g.with_values(multiply(g.values(), g.values())), rho);
  const Signal corr_gx = box_mean(g.with_values(multiply(g.values(), x.values())), rho);

  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double var_g = corr_g[i] - mean_g[i] * mean_g[i];
    const double cov_gx = corr_gx[i] - mean_g[i] * mean_x[i];
    a[i] = cov_gx / (var_g + params.epsilon);
    b[i] = mean_x[i] - a[i] * mean_g[i];
  }
  const Signal mean_a = box_mean(x.with_values(std::move(a)), rho);
  const Signal mean_b = box_mean(x.with_values(std::move(b)), rho);

  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = mean_a[i] * g[i] + mean_b[i];
  return x.with_values(std::move(y));
}

Signal gf_iterate(const Signal& x, const FilterConfig& config) {
  const auto* params = std::get_if<GfParams>(&config.params);
  if (params == nullptr) throw InvalidArgument("gf_iterate: configuration has no guided-filter parameters");
  config.validate(x.shape());

  Signal y = x;
  for (std::size_t k = 0; k < config.iterations; ++k) {
    const bool reguide = config.mode == IterationMode::kReGuided && k > 0;
    const Signal& initial = config.guidance ? *config.guidance : x;
    y = gf_apply(y, reguide ? y : initial, *params);
  }
  return y;
}

}  // namespace graphfilt
