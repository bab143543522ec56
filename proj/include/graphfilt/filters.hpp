#pragma once

#include <cstddef>
#include <optional>
#include <variant>

#include "graphfilt/graph.hpp"
#include "graphfilt/signal.hpp"

namespace graphfilt {

/// How an iterated filter chooses its guidance.
enum class IterationMode {
  kReGuided,       // rebuild weights from the previous iterate (nonlinear)
  kFixedGuidance,  // weights computed once, applied repeatedly (linear)
};

struct FilterConfig {
  std::variant<BfParams, GfParams> params;
  std::size_t iterations = 1;
  IterationMode mode = IterationMode::kFixedGuidance;
  std::optional<Signal> guidance;  // defaults to the input (self-guided)

  /// Throws InvalidArgument on bad parameters or a guidance shape mismatch.
  void validate(const Shape& input_shape) const;
};

/// y = D^-1 W x (the bilateral average). Throws SingularError on a zero degree.
Signal bf_apply(const Signal& x, const WeightedGraph& graph);

/// Same transform written as x - D^-1 L x.
Signal bf_apply_laplacian_form(const Signal& x, const WeightedGraph& graph);

Signal bf_iterate(const Signal& x, const FilterConfig& config);

/// Mean over the width-rho window centred at each sample, truncated at the
/// border and divided by the in-bounds count. Separable rho x rho box on grids.
Signal box_mean(const Signal& x, std::size_t rho);

/// Guided filter of x with guidance g (He, Sun & Tang's local linear model).
Signal gf_apply(const Signal& x, const Signal& g, const GfParams& params);

/// ReGuided mode filters the previous output with itself as guidance.
Signal gf_iterate(const Signal& x, const FilterConfig& config);

}  // namespace graphfilt
