// Independent reference computations used only by the tests. Nothing here
// calls into the sparse or iterative code paths it is used to check.
#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "graphfilt/signal.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(std::size_t n) { return Matrix(n, std::vector<double>(n, 0.0)); }

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Bilateral weight straight from the formula, positions as (row, col).
inline double bf_weight(double ri, double ci, double gi, double rj, double cj, double gj, double sigma_s,
                        double sigma_r) {
  const double dist2 = (ri - rj) * (ri - rj) + (ci - cj) * (ci - cj);
  return std::exp(-dist2 / (2.0 * sigma_s * sigma_s)) * std::exp(-(gi - gj) * (gi - gj) / (2.0 * sigma_r * sigma_r));
}

// Dense guided-filter matrix by enumerating windows: for every centre k,
// collect its (truncated) window, compute mean/biased variance directly and
// add the pair terms. Prefactor uses the full window count.
inline Matrix gf_matrix(const graphfilt::Signal& g, std::size_t rho, double eps) {
  const auto& shape = g.shape();
  const std::size_t n = shape.size();
  const long r = static_cast<long>(rho / 2);
  const long row_r = shape.is_grid() ? r : 0;
  const double window = shape.is_grid() ? double(rho * rho) : double(rho);
  Matrix w = zeros(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long kr = long(shape.row_of(k)), kc = long(shape.col_of(k));
    std::vector<std::size_t> members;
    for (long rr = kr - row_r; rr <= kr + row_r; ++rr) {
      for (long cc = kc - r; cc <= kc + r; ++cc) {
        if (rr < 0 || cc < 0 || rr >= long(shape.rows()) || cc >= long(shape.cols())) continue;
        members.push_back(shape.index(std::size_t(rr), std::size_t(cc)));
      }
    }
    double mean = 0.0, sq = 0.0;
    for (auto m : members) {
      mean += g[m];
      sq += g[m] * g[m];
    }
    mean /= double(members.size());
    sq /= double(members.size());
    const double var = sq - mean * mean;
    for (auto i : members) {
      for (auto j : members) {
        w[i][j] += (1.0 + (g[i] - mean) * (g[j] - mean) / (var + eps)) / (window * window);
      }
    }
  }
  return w;
}

// True when pixel i and every window centre whose window contains i have
// complete (untruncated) windows.
inline bool gf_interior(const graphfilt::Shape& shape, std::size_t i, std::size_t rho) {
  const std::size_t reach = 2 * (rho / 2);
  const std::size_t c = shape.col_of(i);
  if (c < reach || c + reach >= shape.cols()) return false;
  if (!shape.is_grid()) return true;
  const std::size_t r = shape.row_of(i);
  return r >= reach && r + reach < shape.rows();
}

// Row-normalized D^-1 W from a dense W.
inline Matrix row_normalize(const Matrix& w) {
  Matrix p = w;
  for (auto& row : p) {
    double s = 0.0;
    for (double v : row) s += v;
    for (double& v : row) v /= s;
  }
  return p;
}

// Residual of projecting v onto span{A u, A^2 u, ..., A^k u}, built with an
// Arnoldi-style orthonormal basis, relative to |v|.
inline double krylov_residual(const Matrix& a, const std::vector<double>& u, std::size_t k,
                              const std::vector<double>& v) {
  std::vector<std::vector<double>> basis;
  std::vector<double> next = matvec(a, u);
  for (std::size_t j = 0; j < k; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) {
        const double h = dot(q, next);
        for (std::size_t i = 0; i < next.size(); ++i) next[i] -= h * q[i];
      }
    }
    const double nrm = std::sqrt(dot(next, next));
    if (nrm < 1e-300) break;
    for (double& e : next) e /= nrm;
    basis.push_back(next);
    next = matvec(a, basis.back());
  }
  std::vector<double> res = v;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : basis) {
      const double h = dot(q, res);
      for (std::size_t i = 0; i < res.size(); ++i) res[i] -= h * q[i];
    }
  }
  return std::sqrt(dot(res, res)) / std::sqrt(dot(v, v));
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& e : v) e = dist(rng);
  return v;
}

}  // namespace oracle
