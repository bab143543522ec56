#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphfilt/filters.hpp"
#include "graphfilt/krylov.hpp"
#include "graphfilt/signal.hpp"

namespace graphfilt {

enum class FilterKind {
  kBf,      // iterated bilateral filter
  kGf,      // iterated guided filter
  kBfCg,    // flexible PCG on the bilateral Laplacian
  kLobpcg,  // LOBPCG on the bilateral Laplacian
};

/// Parses "bf", "gf", "bf-cg" (alias "cg") and "lobpcg".
FilterKind parse_filter_kind(std::string_view name);
std::string_view to_string(FilterKind kind);

/// Everything needed to run one filter on one signal.
struct DenoiseSettings {
  FilterKind kind = FilterKind::kBf;
  BfParams bf;
  GfParams gf;
  std::size_t iterations = 1;
  IterationMode mode = IterationMode::kReGuided;
  bool constraint_e = false;
  BetaFormula beta = BetaFormula::kAsPrinted;
  double breakdown_tol = 1e-14;

  void validate() const;
};

struct DenoiseOutput {
  Signal signal;
  std::vector<IterationRecord> trace;  // Krylov filters only
};

/// Runs the configured filter. `guidance` defaults to `noisy`; for the
/// Krylov filters it selects the signal the bilateral graph is built from.
DenoiseOutput denoise(const Signal& noisy, const DenoiseSettings& settings,
                      const std::optional<Signal>& guidance = std::nullopt, const Signal* reference = nullptr);

enum class Scenario { kOneD500, kOneD1000, kImage2D, kCustom };

/// "1d-500", "1d-1000", "image", "custom".
Scenario parse_scenario(std::string_view name);
std::string_view to_string(Scenario scenario);

struct ScenarioFilter {
  std::string label;
  DenoiseSettings settings;
  bool clean_guidance = false;  // guide with the noiseless signal
};

struct ExperimentSpec {
  Scenario scenario = Scenario::kCustom;
  std::size_t rows = 1;  // 1 for 1D signals
  std::size_t cols = 500;
  double noise_std = 0.1;
  std::uint64_t seed = 42;
  std::vector<ScenarioFilter> filters;

  /// Default parameter sets for the built-in scenarios:
  ///  1D: BF 500 iterations (half-width 1, self-guided), GF 20 iterations
  ///      (rho 5, eps 0.01, self-guided), BF-CG 20 iterations guided by the
  ///      clean signal; noise std 0.1.
  ///  image: 128x128 synthetic image, noise variance 0.01, 5-point
  ///      bilateral graph with sigma_r 0.1, 20 iterations of CG and of
  ///      LOBPCG with and without the constraint, plus a one-pass
  ///      half-width-5 bilateral filter for comparison.
  static ExperimentSpec defaults(Scenario scenario, std::uint64_t seed);

  bool is_image() const noexcept { return rows > 1; }
  void validate() const;
};

struct FilterOutcome {
  std::string label;
  Signal output;
  double rmse;
  double psnr;
};

struct ExperimentResult {
  Signal clean;
  Signal noisy;
  double noisy_rmse;
  double noisy_psnr;
  std::vector<FilterOutcome> filters;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace graphfilt
