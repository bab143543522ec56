#include "graphfilt/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "graphfilt/errors.hpp"
#include "graphfilt/spectral.hpp"

namespace graphfilt {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// a += alpha * b
void axpy(double alpha, std::span<const double> b, std::span<double> a) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += alpha * b[i];
}

double mass_dot(const DiagonalOperator& mass, std::span<const double> a, std::span<const double> b) {
  const auto d = mass.values();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * d[i] * b[i];
  return s;
}

std::optional<double> reference_rmse(const Signal* reference, const Signal& like, std::span<const double> x) {
  if (reference == nullptr) return std::nullopt;
  return rmse(*reference, like.with_values(std::vector<double>(x.begin(), x.end())));
}

void check_sizes(const LaplacianOperator& op, const DiagonalOperator& d, const Signal& x0) {
  if (op.size() != x0.size() || d.size() != x0.size()) {
    throw InvalidArgument("krylov: operator and signal sizes differ");
  }
}

}  // namespace

void KrylovConfig::validate() const {
  if (k_max < 1) throw InvalidArgument("krylov: k_max must be at least 1");
  if (!(breakdown_tol > 0.0 && breakdown_tol < 1.0)) {
    throw InvalidArgument("krylov: breakdown_tol must lie in (0, 1)");
  }
}

KrylovResult pcg_filter(const LaplacianOperator& laplacian_op, const DiagonalOperator& degrees,
                        const Signal& x0, const KrylovConfig& config, const Signal* reference) {
  config.validate();
  check_sizes(laplacian_op, degrees, x0);
  const std::size_t n = x0.size();

  std::vector<double> x(x0.values().begin(), x0.values().end());
  std::vector<double> r = laplacian_op.apply(x);
  for (double& v : r) v = -v;

  std::vector<double> dx0(n);
  degrees.apply(x, dx0);
  const double tol = config.breakdown_tol;
  const double r0_norm = norm(r);
  const double scale = std::max(r0_norm, norm(dx0));

  std::vector<double> s(n), p(n), q(n), r_old(n), s_old(n);
  KrylovResult result{x0, 0, KrylovStatus::kCompleted, {}};

  for (std::size_t k = 1; k <= config.k_max; ++k) {
    const double r_norm = norm(r);
    if (r_norm <= tol * scale) {
      result.status = KrylovStatus::kConverged;
      break;
    }
    degrees.solve(r, s);
    if (k == 1) {
      p = s;
    } else {
      double numerator = 0.0;
      for (std::size_t i = 0; i < n; ++i) numerator += s[i] * (r[i] - r_old[i]);
      const double denominator =
          config.beta == BetaFormula::kAsPrinted ? dot(s_old, s_old) : dot(s_old, r_old);
      const double beta = numerator / denominator;
      for (std::size_t i = 0; i < n; ++i) p[i] = s[i] + beta * p[i];
    }
    laplacian_op.apply(p, q);
    const double pq = dot(p, q);
    if (std::abs(pq) <= tol * norm(p) * norm(q) || pq == 0.0) {
      result.status = KrylovStatus::kBreakdown;
      break;
    }
    const double alpha = dot(s, r) / pq;
    axpy(alpha, p, x);
    r_old = r;
    s_old = s;
    axpy(-alpha, q, r);

    result.iterations = k;
    result.trace.push_back({k, norm(r), reference_rmse(reference, x0, x)});
  }
  result.x = x0.with_values(std::move(x));
  return result;
}

RitzPairs rayleigh_ritz(const LaplacianOperator& laplacian_op, const DiagonalOperator& mass,
                        std::span<const std::vector<double>> basis) {
  if (basis.empty()) throw InvalidArgument("rayleigh_ritz: empty basis");
  const std::size_t n = laplacian_op.size();
  const std::size_t m = basis.size();
  for (const auto& b : basis) {
    if (b.size() != n) throw InvalidArgument("rayleigh_ritz: basis vector has the wrong length");
  }

  // D-orthonormal vectors q_l and their expansions in the input basis.
  std::vector<std::vector<double>> q;
  std::vector<std::vector<double>> expansion;
  for (std::size_t j = 0; j < m; ++j) {
    const double original = std::sqrt(std::max(0.0, mass_dot(mass, basis[j], basis[j])));
    if (original == 0.0) continue;
    std::vector<double> v = basis[j];
    std::vector<double> c(m, 0.0);
    c[j] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t l = 0; l < q.size(); ++l) {
        const double h = mass_dot(mass, q[l], v);
        axpy(-h, q[l], v);
        axpy(-h, expansion[l], c);
      }
    }
    const double remaining = std::sqrt(std::max(0.0, mass_dot(mass, v, v)));
    if (remaining < 1e-8 * original) continue;
    for (double& e : v) e /= remaining;
    for (double& e : c) e /= remaining;
    q.push_back(std::move(v));
    expansion.push_back(std::move(c));
  }
  const std::size_t rank = q.size();
  if (rank == 0) throw DegenerateBasisError("rayleigh_ritz: every basis direction is dependent or zero");

  std::vector<std::vector<double>> lq(rank);
  for (std::size_t l = 0; l < rank; ++l) lq[l] = laplacian_op.apply(q[l]);
  DenseMatrix projected(rank, rank);
  for (std::size_t a = 0; a < rank; ++a) {
    for (std::size_t b = a; b < rank; ++b) {
      const double v = 0.5 * (dot(q[a], lq[b]) + dot(q[b], lq[a]));
      projected(a, b) = v;
      projected(b, a) = v;
    }
  }
  const SpectralDecomposition small = eig_sym(projected);

  RitzPairs out;
  out.rank = rank;
  out.values = small.eigenvalues;
  for (std::size_t pair = 0; pair < rank; ++pair) {
    std::vector<double> coef(m, 0.0);
    std::vector<double> vec(n, 0.0);
    for (std::size_t l = 0; l < rank; ++l) {
      const double y = small.eigenvectors(l, pair);
      axpy(y, expansion[l], coef);
      axpy(y, q[l], vec);
    }
    out.coefficients.push_back(std::move(coef));
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

Lobpcg::Lobpcg(const LaplacianOperator& laplacian_op, DiagonalOperator mass, DiagonalOperator preconditioner,
               std::span<const double> x0, bool constraint_e)
    : op_(laplacian_op), mass_(std::move(mass)), precond_(std::move(preconditioner)), constraint_e_(constraint_e) {
  const std::size_t n = op_.size();
  if (x0.size() != n || mass_.size() != n || precond_.size() != n) {
    throw InvalidArgument("lobpcg: operator and vector sizes differ");
  }
  state_.x.assign(x0.begin(), x0.end());
  project(state_.x);
  const double xnorm = std::sqrt(std::max(0.0, mass_dot(mass_, state_.x, state_.x)));
  const double x0norm = norm(x0);
  if (xnorm == 0.0 || norm(state_.x) <= 1e-14 * x0norm) {
    throw InvalidArgument(constraint_e_ ? "lobpcg: start vector has no component orthogonal to e"
                                        : "lobpcg: start vector is zero");
  }
  for (double& v : state_.x) v /= xnorm;
  state_.p.assign(n, 0.0);
  state_.lambda = dot(state_.x, op_.apply(state_.x));
}

void Lobpcg::project(std::vector<double>& v) const {
  if (!constraint_e_ || v.empty()) return;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (double& e : v) e -= mean;
}

bool Lobpcg::step(double tol) {
  const std::size_t n = op_.size();
  const auto lx = op_.apply(state_.x);
  std::vector<double> dx(n);
  mass_.apply(state_.x, dx);
  const double lambda = dot(state_.x, lx) / dot(state_.x, dx);

  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = lx[i] - lambda * dx[i];
  state_.residual_norm = norm(r);
  if (state_.residual_norm <= tol * (norm(lx) + std::abs(lambda) * norm(dx))) return false;

  std::vector<double> w(n);
  precond_.apply(r, w);
  project(w);

  const std::vector<std::vector<double>> basis = {state_.x, w, state_.p};
  const RitzPairs ritz = rayleigh_ritz(op_, mass_, basis);
  const auto& c = ritz.coefficients.front();
  double cx = c[0], cw = c[1], cp = c[2];
  if (std::abs(cw) > 1e-12) {
    cx /= cw;
    cp /= cw;
    cw = 1.0;
  }

  std::vector<double> x_next(n), p_next(n);
  for (std::size_t i = 0; i < n; ++i) {
    p_next[i] = cw * w[i] + cp * state_.p[i];
    x_next[i] = p_next[i] + cx * state_.x[i];
  }
  project(x_next);
  project(p_next);
  const double scale = 1.0 / std::sqrt(mass_dot(mass_, x_next, x_next));
  for (std::size_t i = 0; i < n; ++i) {
    x_next[i] *= scale;
    p_next[i] *= scale;
  }

  state_.x = std::move(x_next);
  state_.p = std::move(p_next);
  state_.lambda = dot(state_.x, op_.apply(state_.x)) / mass_dot(mass_, state_.x, state_.x);
  return true;
}

KrylovResult lobpcg_filter(const LaplacianOperator& laplacian_op, const DiagonalOperator& mass,
                           const std::optional<DiagonalOperator>& preconditioner, const Signal& x0,
                           const KrylovConfig& config, const Signal* reference) {
  config.validate();
  check_sizes(laplacian_op, mass, x0);
  const std::size_t n = x0.size();
  const auto input = x0.values();

  const double mean0 = std::accumulate(input.begin(), input.end(), 0.0) / static_cast<double>(n);
  if (config.constraint_e) {
    // a constant signal has nothing left to filter once e is removed
    const bool constant = std::all_of(input.begin(), input.end(), [&](double v) { return v == input[0]; });
    if (constant) return {x0, 0, KrylovStatus::kConverged, {}};
  }

  Lobpcg solver(laplacian_op, mass, preconditioner ? *preconditioner : mass.inverse(), input,
                config.constraint_e);

  std::vector<double> ones(n, 1.0);
  const double weighted_mean0 = mass_dot(mass, ones, input);
  const auto restore_scale = [&](std::span<const double> x) {
    std::vector<double> out(n);
    if (config.constraint_e) {
      double fit = 0.0;
      for (std::size_t i = 0; i < n; ++i) fit += (input[i] - mean0) * x[i];
      const double s = fit / dot(x, x);
      for (std::size_t i = 0; i < n; ++i) out[i] = mean0 + s * x[i];
      return out;
    }
    const double weighted_mean = mass_dot(mass, ones, x);
    double magnitude = 0.0;
    for (std::size_t i = 0; i < n; ++i) magnitude += std::abs(mass.values()[i] * x[i]);
    double s;
    if (std::abs(weighted_mean) > 1e-10 * magnitude) {
      s = weighted_mean0 / weighted_mean;
    } else {
      // zero weighted mean: fall back to the least-squares fit
      s = dot(input, x) / dot(x, x);
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = s * x[i];
    return out;
  };

  KrylovResult result{x0, 0, KrylovStatus::kCompleted, {}};
  for (std::size_t k = 1; k <= config.k_max; ++k) {
    if (!solver.step(config.breakdown_tol)) {
      result.status = KrylovStatus::kConverged;
      break;
    }
    result.iterations = k;
    std::optional<double> err;
    if (reference != nullptr) err = rmse(*reference, x0.with_values(restore_scale(solver.state().x)));
    result.trace.push_back({k, solver.state().lambda, err});
  }
  result.x = x0.with_values(restore_scale(solver.state().x));
  return result;
}

}  // namespace graphfilt
