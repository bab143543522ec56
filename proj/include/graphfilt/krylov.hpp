#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "graphfilt/graph.hpp"
#include "graphfilt/signal.hpp"

namespace graphfilt {

/// Numerator is always s^T (r - r_old); the variants differ in the denominator.
enum class BetaFormula {
  kAsPrinted,     // s_old^T s_old
  kPolakRibiere,  // s_old^T r_old, the usual flexible (Polak-Ribiere) choice
};

struct KrylovConfig {
  std::size_t k_max = 20;
  /// LOBPCG only: keep every iterate orthogonal to the all-ones vector.
  /// CG residuals are orthogonal to it already, so CG ignores the flag.
  bool constraint_e = false;
  double breakdown_tol = 1e-14;
  BetaFormula beta = BetaFormula::kAsPrinted;

  void validate() const;
};

enum class KrylovStatus {
  kCompleted,  // ran all k_max iterations
  kConverged,  // residual vanished (relative to breakdown_tol)
  kBreakdown,  // p^T L p vanished
};

struct IterationRecord {
  std::size_t k;
  double value;                // residual norm (CG) or Rayleigh quotient (LOBPCG)
  std::optional<double> rmse;  // against the reference signal, when given
};

struct KrylovResult {
  Signal x;
  std::size_t iterations;
  KrylovStatus status;
  std::vector<IterationRecord> trace;
};

/// k_max steps of flexible preconditioned CG on L x = 0 started at x0,
/// preconditioned by D. The result is a polynomial filter p_k(D^-1 L) x0 and
/// conserves the weighted mean e^T D x.
KrylovResult pcg_filter(const LaplacianOperator& laplacian_op, const DiagonalOperator& degrees,
                        const Signal& x0, const KrylovConfig& config, const Signal* reference = nullptr);

struct RitzPairs {
  std::vector<double> values;                     // ascending
  std::vector<std::vector<double>> coefficients;  // per pair, one weight per input basis vector
  std::vector<std::vector<double>> vectors;       // per pair, full-length Ritz vector
  std::size_t rank = 0;                           // basis vectors kept
};

/// Rayleigh-Ritz for the pencil (L, D) on span(basis).
///
/// The basis is D-orthonormalized in order; a vector whose D-norm falls
/// below 1e-8 of its original D-norm after orthogonalization is dropped (its
/// coefficient is zero in every pair). Throws DegenerateBasisError when
/// nothing survives.
RitzPairs rayleigh_ritz(const LaplacianOperator& laplacian_op, const DiagonalOperator& mass,
                        std::span<const std::vector<double>> basis);

/// Iterate, previous direction and Rayleigh quotient of single-vector LOBPCG.
struct LobpcgState {
  std::vector<double> x;  // unit D-norm
  std::vector<double> p;  // zero before the first step
  double lambda = 0.0;    // x^T L x / x^T D x
  double residual_norm = 0.0;
};

/// Single-vector preconditioned LOBPCG for the smallest eigenpair of (L, D).
///
/// Each step forms r = L x - lambda D x, w = T r and performs Rayleigh-Ritz on
/// span{x, w, p}. The new iterate is w + tau x + gamma p and the new direction
/// w + gamma p (w-coefficient scaled to one whenever it exceeds 1e-12).
class Lobpcg {
 public:
  /// Throws InvalidArgument on a zero start vector (after projection, when constrained).
  Lobpcg(const LaplacianOperator& laplacian_op, DiagonalOperator mass, DiagonalOperator preconditioner,
         std::span<const double> x0, bool constraint_e);

  /// One iteration. Returns false (and leaves the state unchanged) when the
  /// residual is already below `tol` relative to |L x| + |lambda D x|.
  bool step(double tol = 0.0);

  const LobpcgState& state() const noexcept { return state_; }

 private:
  void project(std::vector<double>& v) const;

  const LaplacianOperator& op_;
  DiagonalOperator mass_;
  DiagonalOperator precond_;
  bool constraint_e_;
  LobpcgState state_;
};

/// LOBPCG used as a low-pass filter of x0.
///
/// The eigenvector scale is free, so the output is rescaled: unconstrained
/// runs restore the weighted mean e^T D x0; constrained runs add back the
/// mean of x0 and scale the filtered part by its least-squares fit to the
/// centred input. T defaults to D^-1 when `preconditioner` is empty.
KrylovResult lobpcg_filter(const LaplacianOperator& laplacian_op, const DiagonalOperator& mass,
                           const std::optional<DiagonalOperator>& preconditioner, const Signal& x0,
                           const KrylovConfig& config, const Signal* reference = nullptr);

}  // namespace graphfilt
