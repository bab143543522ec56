#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "graphfilt/errors.hpp"
#include "graphfilt/krylov.hpp"
#include "graphfilt/spectral.hpp"
#include "oracles.hpp"

using namespace graphfilt;

namespace {

WeightedGraph unit_path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return WeightedGraph(n, {}, std::move(edges));
}

WeightedGraph random_bf(std::mt19937_64& rng, std::size_t n, double sigma_r = 0.2) {
  return bf_graph(Signal::line(oracle::random_vector(rng, n)), BfParams{1.0, sigma_r, 1});
}

std::vector<double> vec(const Signal& s) { return {s.values().begin(), s.values().end()}; }

double weighted_sum(const WeightedGraph& g, std::span<const double> x) {
  const auto d = g.degrees();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += d[i] * x[i];
  return s;
}

// D^-1 L as a dense matrix.
oracle::Matrix random_walk_laplacian(const WeightedGraph& g) {
  const auto l = to_dense(laplacian(g));
  oracle::Matrix a = oracle::zeros(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) a[i][j] = l(i, j) / g.degrees()[i];
  }
  return a;
}

}  // namespace

TEST_CASE("pcg_filter") {
  SUBCASE("two vertices average in one step") {
    for (double w : {1.0, 0.3, 1e-4}) {
      const WeightedGraph g(2, {1.0, 1.0}, {{0, 1, w}});
      const auto result = pcg_filter(laplacian(g), degree_operator(g), Signal::line({1.0, 0.0}), KrylovConfig{});
      CHECK(std::abs(result.x[0] - 0.5) <= 1e-12);
      CHECK(std::abs(result.x[1] - 0.5) <= 1e-12);
      CHECK(result.iterations == 1);
      CHECK(result.status == KrylovStatus::kConverged);
    }
  }
  SUBCASE("constant input is returned unchanged") {
    std::mt19937_64 rng(1);
    const auto g = random_bf(rng, 20);
    const auto c = Signal::constant(Shape::length(20), 0.4);
    const auto result = pcg_filter(laplacian(g), degree_operator(g), c, KrylovConfig{});
    CHECK(result.x == c);
    CHECK(result.iterations == 0);
    CHECK(result.status == KrylovStatus::kConverged);
  }
  SUBCASE("weighted mean is conserved") {
    std::mt19937_64 rng(2);
    for (std::size_t n : {16u, 64u, 256u}) {
      for (auto beta : {BetaFormula::kAsPrinted, BetaFormula::kPolakRibiere}) {
        const auto g = random_bf(rng, n);
        const auto x0 = Signal::line(oracle::random_vector(rng, n));
        const auto result = pcg_filter(laplacian(g), degree_operator(g), x0, KrylovConfig{20, false, 1e-14, beta});
        const double before = weighted_sum(g, x0.values());
        CHECK(std::abs(weighted_sum(g, result.x.values()) - before) <= 1e-10 * std::max(1.0, std::abs(before)));
      }
    }
  }
  SUBCASE("iterates lie in the Krylov space of D^-1 L") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t n = 24;
      const auto g = random_bf(rng, n, 0.3);
      const auto x0 = Signal::line(oracle::random_vector(rng, n));
      const auto a = random_walk_laplacian(g);
      for (std::size_t k : {1u, 3u, 6u}) {
        const auto result = pcg_filter(laplacian(g), degree_operator(g), x0, KrylovConfig{k});
        auto diff = vec(result.x);
        for (std::size_t i = 0; i < n; ++i) diff[i] -= x0[i];
        CHECK(oracle::krylov_residual(a, vec(x0), result.iterations, diff) <= 1e-8);
      }
    }
  }
  SUBCASE("smoothing lowers the Laplacian energy") {
    std::mt19937_64 rng(4);
    const auto g = random_bf(rng, 100, 0.5);
    const auto x0 = Signal::line(oracle::random_vector(rng, 100));
    const auto op = laplacian(g);
    const auto result = pcg_filter(op, degree_operator(g), x0, KrylovConfig{10});
    const auto energy = [&](const Signal& s) { return oracle::dot(vec(s), op.apply(s.values())); };
    CHECK(energy(result.x) < energy(x0));
    CHECK(result.trace.size() == result.iterations);
  }
  SUBCASE("the beta variants differ") {
    std::mt19937_64 rng(5);
    const auto g = random_bf(rng, 60, 0.5);
    const auto x0 = Signal::line(oracle::random_vector(rng, 60));
    const auto printed = pcg_filter(laplacian(g), degree_operator(g), x0, KrylovConfig{8});
    const auto pr = pcg_filter(laplacian(g), degree_operator(g), x0, KrylovConfig{8, false, 1e-14, BetaFormula::kPolakRibiere});
    CHECK(oracle::max_abs_diff(vec(printed.x), vec(pr.x)) > 1e-9);
  }
  SUBCASE("reference adds rmse to the trace") {
    std::mt19937_64 rng(6);
    const auto g = random_bf(rng, 30);
    const auto x0 = Signal::line(oracle::random_vector(rng, 30));
    const auto result = pcg_filter(laplacian(g), degree_operator(g), x0, KrylovConfig{3}, &x0);
    for (const auto& rec : result.trace) CHECK(rec.rmse.has_value());
  }
  SUBCASE("bad arguments") {
    const auto g = unit_path(3);
    CHECK_THROWS_AS(pcg_filter(laplacian(g), degree_operator(g), Signal::line({1, 2}), KrylovConfig{}),
                    InvalidArgument);
    CHECK_THROWS_AS(pcg_filter(laplacian(g), degree_operator(g), Signal::line({1, 2, 3}), KrylovConfig{0}),
                    InvalidArgument);
  }
}

TEST_CASE("rayleigh_ritz") {
  const auto g = unit_path(3);
  const auto op = laplacian(g);
  const auto eye = DiagonalOperator::identity(3);
  SUBCASE("single eigenvector") {
    const std::vector<std::vector<double>> basis = {{1.0, 0.0, -1.0}};
    const auto ritz = rayleigh_ritz(op, eye, basis);
    CHECK(ritz.rank == 1);
    CHECK(ritz.values[0] == doctest::Approx(1.0));
  }
  SUBCASE("full space gives the spectrum") {
    const std::vector<std::vector<double>> basis = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const auto ritz = rayleigh_ritz(op, eye, basis);
    CHECK(std::abs(ritz.values[0]) <= 1e-12);
    CHECK(std::abs(ritz.values[1] - 1.0) <= 1e-12);
    CHECK(std::abs(ritz.values[2] - 3.0) <= 1e-12);
    // vectors expand consistently from the coefficients
    for (std::size_t pair = 0; pair < 3; ++pair) {
      for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(ritz.coefficients[pair][i] - ritz.vectors[pair][i]) <= 1e-14);
    }
  }
  SUBCASE("dependent vectors are dropped") {
    const std::vector<std::vector<double>> basis = {{1, 2, 3}, {2, 4, 6}, {0, 1, 0}};
    const auto ritz = rayleigh_ritz(op, eye, basis);
    CHECK(ritz.rank == 2);
    for (const auto& c : ritz.coefficients) CHECK(c[1] == 0.0);
  }
  SUBCASE("generalized pencil") {
    const auto d = degree_operator(g);
    const std::vector<std::vector<double>> basis = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const auto ritz = rayleigh_ritz(op, d, basis);
    // eigenvalues of D^-1 L for the unit path of three: 0, 1, 2
    CHECK(std::abs(ritz.values[0]) <= 1e-12);
    CHECK(std::abs(ritz.values[1] - 1.0) <= 1e-12);
    CHECK(std::abs(ritz.values[2] - 2.0) <= 1e-12);
  }
  SUBCASE("nothing usable") {
    const std::vector<std::vector<double>> zero = {{0, 0, 0}, {0, 0, 0}};
    CHECK_THROWS_AS(rayleigh_ritz(op, eye, zero), DegenerateBasisError);
    CHECK_THROWS_AS(rayleigh_ritz(op, eye, std::span<const std::vector<double>>{}), InvalidArgument);
  }
}

TEST_CASE("Lobpcg") {
  SUBCASE("an eigenvector is stationary") {
    const auto op = laplacian(unit_path(3));
    const auto eye = DiagonalOperator::identity(3);
    const std::vector<double> v = {1.0, 0.0, -1.0};
    Lobpcg solver(op, eye, eye, v, false);
    CHECK(solver.state().lambda == doctest::Approx(1.0));
    CHECK_FALSE(solver.step(1e-12));
    CHECK(solver.state().lambda == doctest::Approx(1.0));
  }
  SUBCASE("constrained path of three converges to the second eigenvalue") {
    const auto op = laplacian(unit_path(3));
    const auto eye = DiagonalOperator::identity(3);
    const std::vector<double> x0 = {0.3, 0.9, -0.2};
    Lobpcg solver(op, eye, eye, x0, true);
    for (int k = 0; k < 20 && solver.step(1e-14); ++k) {}
    const auto dense = eig_sym(to_dense(op));
    CHECK(std::abs(solver.state().lambda - dense.eigenvalues[1]) <= 1e-6);
    CHECK(std::abs(solver.state().lambda - 1.0) <= 1e-6);
  }
  SUBCASE("Ritz values do not increase and converge to zero") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 5; ++trial) {
      // a 2D graph: 1D paths of this length have lambda_2 near 1e-3 and
      // need far more than 50 steps
      const auto g = bf_graph(Signal::image(oracle::random_vector(rng, 100), 10, 10), BfParams{1.0, 0.3, 1});
      const auto op = laplacian(g);
      const auto d = degree_operator(g);
      const auto x0 = oracle::random_vector(rng, 100);
      Lobpcg solver(op, d, d.inverse(), x0, false);
      double previous = solver.state().lambda;
      for (int k = 0; k < 50; ++k) {
        if (!solver.step(1e-15)) break;
        CHECK(solver.state().lambda <= previous + 1e-12);
        previous = solver.state().lambda;
      }
      CHECK(solver.state().lambda < 1e-8);
    }
  }
  SUBCASE("constrained iterates stay orthogonal to e") {
    std::mt19937_64 rng(9);
    const auto g = random_bf(rng, 40, 0.3);
    const auto op = laplacian(g);
    const auto d = degree_operator(g);
    Lobpcg solver(op, d, d.inverse(), oracle::random_vector(rng, 40), true);
    for (int k = 0; k < 15; ++k) {
      solver.step();
      const auto& x = solver.state().x;
      const double sum = std::accumulate(x.begin(), x.end(), 0.0);
      CHECK(std::abs(sum) <= 1e-10 * std::sqrt(oracle::dot(x, x)));
    }
  }
  SUBCASE("bad start vectors") {
    const auto op = laplacian(unit_path(3));
    const auto eye = DiagonalOperator::identity(3);
    const std::vector<double> zero = {0, 0, 0}, ones = {2, 2, 2};
    CHECK_THROWS_AS(Lobpcg(op, eye, eye, zero, false), InvalidArgument);
    CHECK_THROWS_AS(Lobpcg(op, eye, eye, ones, true), InvalidArgument);
  }
}

TEST_CASE("lobpcg_filter") {
  std::mt19937_64 rng(10);
  const auto g = random_bf(rng, 80, 0.3);
  const auto op = laplacian(g);
  const auto d = degree_operator(g);
  const auto x0 = Signal::line(oracle::random_vector(rng, 80));
  SUBCASE("deterministic") {
    const auto a = lobpcg_filter(op, d, std::nullopt, x0, KrylovConfig{10});
    const auto b = lobpcg_filter(op, d, std::nullopt, x0, KrylovConfig{10});
    CHECK(a.x == b.x);
  }
  SUBCASE("unconstrained output keeps the weighted mean") {
    const auto result = lobpcg_filter(op, d, std::nullopt, x0, KrylovConfig{10});
    CHECK(std::abs(weighted_sum(g, result.x.values()) - weighted_sum(g, x0.values())) <= 1e-9);
  }
  SUBCASE("constrained output keeps the mean") {
    KrylovConfig config{10};
    config.constraint_e = true;
    const auto result = lobpcg_filter(op, d, std::nullopt, x0, config);
    const double m0 = std::accumulate(x0.values().begin(), x0.values().end(), 0.0);
    const double m1 = std::accumulate(result.x.values().begin(), result.x.values().end(), 0.0);
    CHECK(std::abs(m0 - m1) <= 1e-10 * 80);
    const auto c = Signal::constant(x0.shape(), 0.5);
    CHECK(lobpcg_filter(op, d, std::nullopt, c, config).x == c);
  }
  SUBCASE("trace records Rayleigh quotients") {
    const auto result = lobpcg_filter(op, d, DiagonalOperator::identity(80), x0, KrylovConfig{5}, &x0);
    CHECK(result.trace.size() == result.iterations);
    for (std::size_t k = 1; k < result.trace.size(); ++k) {
      CHECK(result.trace[k].value <= result.trace[k - 1].value + 1e-12);
      CHECK(result.trace[k].rmse.has_value());
    }
  }
}
