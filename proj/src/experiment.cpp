#include "graphfilt/experiment.hpp"

#include <string>

#include "graphfilt/errors.hpp"

namespace graphfilt {

FilterKind parse_filter_kind(std::string_view name) {
  if (name == "bf") return FilterKind::kBf;
  if (name == "gf") return FilterKind::kGf;
  if (name == "bf-cg" || name == "cg") return FilterKind::kBfCg;
  if (name == "lobpcg") return FilterKind::kLobpcg;
  throw InvalidArgument("unknown filter '" + std::string(name) + "' (expected bf, gf, bf-cg or lobpcg)");
}

std::string_view to_string(FilterKind kind) {
  switch (kind) {
    case FilterKind::kBf: return "bf";
    case FilterKind::kGf: return "gf";
    case FilterKind::kBfCg: return "bf-cg";
    case FilterKind::kLobpcg: return "lobpcg";
  }
  return "?";
}

void DenoiseSettings::validate() const {
  if (iterations < 1) throw InvalidArgument("denoise: iterations must be at least 1");
  if (kind == FilterKind::kGf) {
    gf.validate();
  } else {
    bf.validate();
  }
  if (!(breakdown_tol > 0.0 && breakdown_tol < 1.0)) throw InvalidArgument("denoise: bad breakdown tolerance");
}

DenoiseOutput denoise(const Signal& noisy, const DenoiseSettings& settings, const std::optional<Signal>& guidance,
                      const Signal* reference) {
  settings.validate();
  if (guidance && guidance->shape() != noisy.shape()) {
    throw InvalidArgument("denoise: guidance shape differs from the input shape");
  }
  switch (settings.kind) {
    case FilterKind::kBf:
      return {bf_iterate(noisy, FilterConfig{settings.bf, settings.iterations, settings.mode, guidance}), {}};
    case FilterKind::kGf:
      return {gf_iterate(noisy, FilterConfig{settings.gf, settings.iterations, settings.mode, guidance}), {}};
    case FilterKind::kBfCg:
    case FilterKind::kLobpcg: break;
  }

  const WeightedGraph graph = bf_graph(guidance ? *guidance : noisy, settings.bf);
  const LaplacianOperator op(graph, false);
  const DiagonalOperator degrees = degree_operator(graph);
  KrylovConfig config;
  config.k_max = settings.iterations;
  config.constraint_e = settings.constraint_e;
  config.beta = settings.beta;
  config.breakdown_tol = settings.breakdown_tol;
  KrylovResult result = settings.kind == FilterKind::kBfCg
                            ? pcg_filter(op, degrees, noisy, config, reference)
                            : lobpcg_filter(op, degrees, std::nullopt, noisy, config, reference);
  return {std::move(result.x), std::move(result.trace)};
}

Scenario parse_scenario(std::string_view name) {
  if (name == "1d-500") return Scenario::kOneD500;
  if (name == "1d-1000") return Scenario::kOneD1000;
  if (name == "image") return Scenario::kImage2D;
  if (name == "custom") return Scenario::kCustom;
  throw InvalidArgument("unknown scenario '" + std::string(name) + "' (expected 1d-500, 1d-1000, image or custom)");
}

std::string_view to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::kOneD500: return "1d-500";
    case Scenario::kOneD1000: return "1d-1000";
    case Scenario::kImage2D: return "image";
    case Scenario::kCustom: return "custom";
  }
  return "?";
}

namespace {

std::vector<ScenarioFilter> one_d_filters() {
  DenoiseSettings bf;
  bf.kind = FilterKind::kBf;
  bf.bf = BfParams{1.0, 0.1, 1, Neighborhood::kWindow};
  bf.iterations = 500;
  bf.mode = IterationMode::kReGuided;

  DenoiseSettings gf;
  gf.kind = FilterKind::kGf;
  gf.gf = GfParams{5, 0.01};
  gf.iterations = 20;
  gf.mode = IterationMode::kReGuided;

  DenoiseSettings cg;
  cg.kind = FilterKind::kBfCg;
  cg.bf = BfParams{1.0, 0.1, 1, Neighborhood::kWindow};
  cg.iterations = 20;
  cg.mode = IterationMode::kFixedGuidance;

  return {{"bf", bf, false}, {"gf", gf, false}, {"bf-cg", cg, true}};
}

std::vector<ScenarioFilter> image_filters() {
  DenoiseSettings cg;
  cg.kind = FilterKind::kBfCg;
  cg.bf = BfParams{1.0, 0.1, 1, Neighborhood::kStencil5};
  cg.iterations = 20;
  cg.mode = IterationMode::kFixedGuidance;

  DenoiseSettings lobpcg = cg;
  lobpcg.kind = FilterKind::kLobpcg;
  DenoiseSettings constrained = lobpcg;
  constrained.constraint_e = true;

  DenoiseSettings bf;
  bf.kind = FilterKind::kBf;
  bf.bf = BfParams{5.0, 0.1, 5, Neighborhood::kWindow};
  bf.iterations = 1;
  bf.mode = IterationMode::kFixedGuidance;

  return {{"cg", cg, false},
          {"lobpcg", lobpcg, false},
          {"lobpcg-constrained", constrained, false},
          {"bf-hw5", bf, false}};
}

}  // namespace

ExperimentSpec ExperimentSpec::defaults(Scenario scenario, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.scenario = scenario;
  spec.seed = seed;
  spec.noise_std = 0.1;
  switch (scenario) {
    case Scenario::kOneD500:
    case Scenario::kCustom:
      spec.rows = 1;
      spec.cols = 500;
      spec.filters = one_d_filters();
      break;
    case Scenario::kOneD1000:
      spec.rows = 1;
      spec.cols = 1000;
      spec.filters = one_d_filters();
      break;
    case Scenario::kImage2D:
      spec.rows = 128;
      spec.cols = 128;
      spec.filters = image_filters();
      break;
  }
  return spec;
}

void ExperimentSpec::validate() const {
  if (rows < 1 || cols < 2) throw InvalidArgument("experiment: signal must have at least two samples");
  if (!(noise_std >= 0.0)) throw InvalidArgument("experiment: noise std must be >= 0");
  if (filters.empty()) throw InvalidArgument("experiment: no filters configured");
  for (const auto& f : filters) f.settings.validate();
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  Signal clean = spec.is_image() ? make_test_image(spec.rows, spec.cols)
                                 : make_piecewise_linear(spec.cols, default_breakpoints());
  Signal noisy = add_gaussian_noise(clean, NoiseSpec{spec.noise_std, spec.seed});

  ExperimentResult result{clean, noisy, rmse(clean, noisy), psnr(clean, noisy), {}};
  for (const auto& f : spec.filters) {
    const std::optional<Signal> guidance = f.clean_guidance ? std::optional<Signal>(clean) : std::nullopt;
    Signal out = denoise(noisy, f.settings, guidance).signal;
    const double err = rmse(clean, out);
    const double db = psnr(clean, out);
    result.filters.push_back({f.label, std::move(out), err, db});
  }
  return result;
}

}  // namespace graphfilt
