// graphfilt: command-line front end for graph-based denoising.
//
//   graphfilt synth    --n 500 --noise 0.1 --seed 42
//   graphfilt denoise  --filter bf-cg --iters 20 --guidance clean.csv noisy.csv
//   graphfilt compare  --scenario 1d-500 --seed 42
//   graphfilt spectrum --path 3
//   graphfilt --config run.ini denoise noisy.csv   (run.ini: "[denoise]" then "iters=20")
//
// Exit codes: 0 success, 1 numerical failure, 2 usage, 3 I/O, 4 capacity.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "graphfilt/errors.hpp"
#include "graphfilt/experiment.hpp"
#include "graphfilt/graph.hpp"
#include "graphfilt/io.hpp"
#include "graphfilt/signal.hpp"
#include "graphfilt/spectral.hpp"

namespace fs = std::filesystem;
using namespace graphfilt;

namespace {

enum ExitCode : int { kOk = 0, kNumeric = 1, kUsage = 2, kIo = 3, kCapacity = 4 };

constexpr const char* kOutDirEnv = "GRAPHFILT_OUT_DIR";

fs::path prepare_dir(const std::string& dir) {
  const fs::path path = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) throw IoError("cannot create output directory " + path.string() + ": " + ec.message());
  return path;
}

void print_metric(const std::string& name, double value) {
  std::cout << name << '=' << io::format_double(value) << '\n';
}

// ---- synth ---------------------------------------------------------------

struct SynthArgs {
  std::size_t n = 500;
  bool image = false;
  std::size_t rows = 128;
  std::size_t cols = 128;
  double noise = 0.1;
  std::uint64_t seed = 42;
  std::string out_dir;
};

int run_synth(const SynthArgs& args) {
  const Signal clean = args.image ? make_test_image(args.rows, args.cols)
                                  : make_piecewise_linear(args.n, default_breakpoints());
  const Signal noisy = add_gaussian_noise(clean, NoiseSpec{args.noise, args.seed});
  const fs::path dir = prepare_dir(args.out_dir);
  const char* ext = args.image ? ".pgm" : ".csv";
  io::write_signal(dir / (std::string("clean") + ext), clean);
  io::write_signal(dir / (std::string("noisy") + ext), noisy);
  print_metric("rmse", rmse(clean, noisy));
  print_metric("psnr", psnr(clean, noisy));
  return kOk;
}

// ---- denoise -------------------------------------------------------------

struct DenoiseArgs {
  std::string input;
  std::string filter = "bf";
  std::size_t iters = 1;
  std::size_t half_width = 1;
  std::optional<double> sigma_s;
  double sigma_r = 0.1;
  std::string neighborhood;  // empty: window for 1D, stencil5 for images
  std::size_t rho = 5;
  double eps = 0.01;
  std::string mode = "reguided";
  std::string guidance;
  bool constraint = false;
  std::string beta = "printed";
  std::string reference;
  std::string output;
  std::string trace;
  std::string dump_graph;
  std::string out_dir;
};

DenoiseSettings settings_from(const DenoiseArgs& args, const Signal& input) {
  DenoiseSettings s;
  s.kind = parse_filter_kind(args.filter);
  s.iterations = args.iters;
  s.bf.half_width = args.half_width;
  s.bf.sigma_s = args.sigma_s.value_or(static_cast<double>(args.half_width));
  s.bf.sigma_r = args.sigma_r;
  const std::string hood = args.neighborhood.empty() ? (input.shape().is_grid() ? "stencil5" : "window")
                                                     : args.neighborhood;
  s.bf.neighborhood = hood == "stencil5" ? Neighborhood::kStencil5 : Neighborhood::kWindow;
  s.gf = GfParams{args.rho, args.eps};
  s.mode = args.mode == "fixed" ? IterationMode::kFixedGuidance : IterationMode::kReGuided;
  s.constraint_e = args.constraint;
  s.beta = args.beta == "pr" ? BetaFormula::kPolakRibiere : BetaFormula::kAsPrinted;
  return s;
}

int run_denoise(const DenoiseArgs& args) {
  const Signal noisy = io::read_signal(args.input);
  const DenoiseSettings settings = settings_from(args, noisy);
  settings.validate();
  std::optional<Signal> guidance;
  if (!args.guidance.empty()) guidance = io::read_signal(args.guidance);
  std::optional<Signal> reference;
  if (!args.reference.empty()) reference = io::read_signal(args.reference);
  if (reference && reference->shape() != noisy.shape()) {
    throw InvalidArgument("reference shape differs from the input shape");
  }

  const DenoiseOutput out = denoise(noisy, settings, guidance, reference ? &*reference : nullptr);

  const bool image = noisy.shape().is_grid();
  fs::path output = args.output.empty() ? prepare_dir(args.out_dir) / (image ? "denoised.pgm" : "denoised.csv")
                                        : fs::path(args.output);
  io::write_signal(output, out.signal);
  if (!args.trace.empty()) io::write_file_atomic(args.trace, io::encode_trace(out.trace));
  if (!args.dump_graph.empty()) {
    const WeightedGraph graph = settings.kind == FilterKind::kGf
                                    ? gf_weight_matrix(guidance ? *guidance : noisy, settings.gf)
                                    : bf_graph(guidance ? *guidance : noisy, settings.bf);
    io::write_file_atomic(args.dump_graph, io::encode_edges(graph));
  }

  std::cout << "filter=" << to_string(settings.kind) << '\n';
  std::cout << "iterations=" << settings.iterations << '\n';
  if (reference) {
    print_metric("input_rmse", rmse(*reference, noisy));
    print_metric("input_psnr", psnr(*reference, noisy));
    print_metric("rmse", rmse(*reference, out.signal));
    print_metric("psnr", psnr(*reference, out.signal));
  }
  return kOk;
}

// ---- compare -------------------------------------------------------------

struct CompareArgs {
  std::string scenario = "1d-500";
  std::uint64_t seed = 42;
  std::optional<std::size_t> bf_iters;
  std::optional<std::size_t> gf_iters;
  std::optional<std::size_t> krylov_iters;
  std::string out_dir;
};

int run_compare(const CompareArgs& args) {
  ExperimentSpec spec = ExperimentSpec::defaults(parse_scenario(args.scenario), args.seed);
  for (auto& f : spec.filters) {
    const bool krylov = f.settings.kind == FilterKind::kBfCg || f.settings.kind == FilterKind::kLobpcg;
    if (krylov && args.krylov_iters) f.settings.iterations = *args.krylov_iters;
    if (f.settings.kind == FilterKind::kBf && args.bf_iters) f.settings.iterations = *args.bf_iters;
    if (f.settings.kind == FilterKind::kGf && args.gf_iters) f.settings.iterations = *args.gf_iters;
  }
  const ExperimentResult result = run_experiment(spec);
  const fs::path dir = prepare_dir(args.out_dir);

  std::string csv = "index,clean,noisy";
  for (const auto& f : result.filters) csv += "," + f.label;
  for (const auto& f : result.filters) csv += ",err_" + f.label;
  csv += '\n';
  for (std::size_t i = 0; i < result.clean.size(); ++i) {
    csv += std::to_string(i) + "," + io::format_double(result.clean[i]) + "," + io::format_double(result.noisy[i]);
    for (const auto& f : result.filters) csv += "," + io::format_double(f.output[i]);
    for (const auto& f : result.filters) csv += "," + io::format_double(f.output[i] - result.clean[i]);
    csv += '\n';
  }
  io::write_file_atomic(dir / "compare.csv", csv);

  std::string metrics = "filter,rmse,psnr\nnoisy," + io::format_double(result.noisy_rmse) + "," +
                        io::format_double(result.noisy_psnr) + "\n";
  for (const auto& f : result.filters) {
    metrics += f.label + "," + io::format_double(f.rmse) + "," + io::format_double(f.psnr) + "\n";
  }
  io::write_file_atomic(dir / "metrics.csv", metrics);

  // 1D: full curves; images: the middle row.
  const Shape& shape = result.clean.shape();
  const std::size_t row = shape.rows() / 2;
  const auto profile = [&](const Signal& s) {
    std::vector<double> v(shape.cols());
    for (std::size_t c = 0; c < shape.cols(); ++c) v[c] = s[shape.index(row, c)];
    return v;
  };
  std::vector<io::PlotSeries> series = {{"clean", profile(result.clean)}, {"noisy", profile(result.noisy)}};
  for (const auto& f : result.filters) series.push_back({f.label, profile(f.output)});
  const std::string title = std::string("scenario ") + std::string(to_string(spec.scenario)) +
                            (shape.is_grid() ? " (middle row)" : "");
  io::write_file_atomic(dir / "compare.svg", io::svg_line_plot(title, series));

  if (spec.is_image()) {
    io::write_signal(dir / "clean.pgm", result.clean);
    io::write_signal(dir / "noisy.pgm", result.noisy);
    for (const auto& f : result.filters) io::write_signal(dir / (f.label + ".pgm"), f.output);
  }

  std::printf("scenario=%s seed=%llu\n", std::string(to_string(spec.scenario)).c_str(),
              static_cast<unsigned long long>(spec.seed));
  std::printf("%-20s %10s %10s\n", "filter", "rmse", "psnr");
  std::printf("%-20s %10.6f %10.3f\n", "noisy", result.noisy_rmse, result.noisy_psnr);
  for (const auto& f : result.filters) std::printf("%-20s %10.6f %10.3f\n", f.label.c_str(), f.rmse, f.psnr);
  return kOk;
}

// ---- spectrum ------------------------------------------------------------

struct SpectrumArgs {
  std::string input;
  std::optional<std::size_t> path_n;
  std::string graph = "bf";
  std::size_t half_width = 1;
  std::optional<double> sigma_s;
  double sigma_r = 0.1;
  std::size_t rho = 5;
  double eps = 0.01;
  bool normalized = false;
  std::string out_dir;
};

WeightedGraph unit_path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return WeightedGraph(n, {}, std::move(edges));
}

int run_spectrum(const SpectrumArgs& args) {
  if (args.input.empty() && !args.path_n) throw InvalidArgument("spectrum needs an input signal or --path N");
  std::optional<Signal> input;
  if (!args.input.empty()) input = io::read_signal(args.input);
  const std::size_t n = args.path_n ? *args.path_n : input->size();
  if (n > kDenseCap) {
    throw CapacityError("spectrum: " + std::to_string(n) + " vertices exceed the dense cap of " +
                        std::to_string(kDenseCap));
  }
  if (args.path_n && input && input->size() != n) throw InvalidArgument("input length differs from --path N");

  WeightedGraph graph = [&] {
    if (args.path_n) return unit_path(n);
    if (args.graph == "gf") return gf_weight_matrix(*input, GfParams{args.rho, args.eps});
    BfParams bf;
    bf.half_width = args.half_width;
    bf.sigma_s = args.sigma_s.value_or(static_cast<double>(args.half_width));
    bf.sigma_r = args.sigma_r;
    bf.neighborhood = input->shape().is_grid() ? Neighborhood::kStencil5 : Neighborhood::kWindow;
    return bf_graph(*input, bf);
  }();
  const SpectralDecomposition decomp = eig_sym(to_dense(LaplacianOperator(std::move(graph), args.normalized)));

  std::string spectrum;
  for (std::size_t i = 0; i < decomp.size(); ++i) {
    spectrum += std::to_string(i) + "," + io::format_double(decomp.eigenvalues[i]) + "\n";
  }
  std::string coefficients;
  if (input) {
    const auto c = gft(decomp, input->values());
    coefficients = "index,eigenvalue,magnitude\n";
    for (std::size_t i = 0; i < c.size(); ++i) {
      coefficients += std::to_string(i) + "," + io::format_double(decomp.eigenvalues[i]) + "," +
                      io::format_double(std::abs(c[i])) + "\n";
    }
  }

  const fs::path dir = prepare_dir(args.out_dir);
  io::write_file_atomic(dir / "spectrum.csv", spectrum);
  if (input) io::write_file_atomic(dir / "gft.csv", coefficients);
  std::cout << "vertices=" << n << '\n';
  print_metric("lambda_min", decomp.eigenvalues.front());
  print_metric("lambda_max", decomp.eigenvalues.back());
  return kOk;
}

template <typename F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCapacity;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph-based signal and image denoising"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value defaults; keys go under [synth], [denoise], [compare] or [spectrum]");

  const std::map<std::string, std::string> filters = {
      {"bf", "bf"}, {"gf", "gf"}, {"bf-cg", "bf-cg"}, {"cg", "bf-cg"}, {"lobpcg", "lobpcg"}};

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "write a clean test signal and a noisy copy");
  synth_cmd->add_option("--n", synth.n, "1D signal length")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 26));
  synth_cmd->add_flag("--image", synth.image, "write the synthetic PGM image instead of a 1D CSV");
  synth_cmd->add_option("--rows", synth.rows, "image rows")->check(CLI::Range(2, 1 << 14));
  synth_cmd->add_option("--cols", synth.cols, "image columns")->check(CLI::Range(2, 1 << 14));
  synth_cmd->add_option("--noise", synth.noise, "noise standard deviation")->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--seed", synth.seed, "noise seed");
  synth_cmd->add_option("--out-dir", synth.out_dir, "output directory")->envname(kOutDirEnv);

  DenoiseArgs den;
  auto* den_cmd = app.add_subcommand("denoise", "filter a CSV signal or PGM image");
  den_cmd->add_option("input", den.input, "noisy signal (.csv or .pgm)")->required();
  den_cmd->add_option("--filter", den.filter, "bf | gf | bf-cg | lobpcg")->transform(CLI::IsMember(filters));
  den_cmd->add_option("--iters", den.iters, "iterations")->check(CLI::PositiveNumber);
  den_cmd->add_option("--half-width", den.half_width, "bilateral window half-width")->check(CLI::PositiveNumber);
  den_cmd->add_option("--sigma-s", den.sigma_s, "spatial sigma (default: half-width)")->check(CLI::PositiveNumber);
  den_cmd->add_option("--sigma-r", den.sigma_r, "photometric sigma")->check(CLI::PositiveNumber);
  den_cmd->add_option("--neighborhood", den.neighborhood, "window | stencil5")
      ->check(CLI::IsMember({"window", "stencil5"}));
  den_cmd->add_option("--rho", den.rho, "guided-filter window width (odd)")->check(CLI::PositiveNumber);
  den_cmd->add_option("--eps", den.eps, "guided-filter regularizer")->check(CLI::PositiveNumber);
  den_cmd->add_option("--mode", den.mode, "reguided | fixed")->check(CLI::IsMember({"reguided", "fixed"}));
  den_cmd->add_option("--guidance", den.guidance, "guidance signal (default: the input)");
  den_cmd->add_flag("--constraint", den.constraint, "LOBPCG: keep iterates orthogonal to the constant vector");
  den_cmd->add_option("--beta", den.beta, "CG beta denominator: printed (s'^T s') | pr (s'^T r')")
      ->check(CLI::IsMember({"printed", "pr"}));
  den_cmd->add_option("--reference", den.reference, "clean signal for rmse/psnr");
  den_cmd->add_option("--output,-o", den.output, "output file (default: <out-dir>/denoised.<ext>)");
  den_cmd->add_option("--trace", den.trace, "per-iteration CSV for Krylov filters");
  den_cmd->add_option("--dump-graph", den.dump_graph, "write the weight matrix as i,j,w CSV");
  den_cmd->add_option("--out-dir", den.out_dir, "output directory")->envname(kOutDirEnv);

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "run a reference scenario and tabulate filter errors");
  cmp_cmd->add_option("--scenario", cmp.scenario, "1d-500 | 1d-1000 | image")
      ->check(CLI::IsMember({"1d-500", "1d-1000", "image"}));
  cmp_cmd->add_option("--seed", cmp.seed, "noise seed");
  cmp_cmd->add_option("--bf-iters", cmp.bf_iters, "override bilateral iterations")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--gf-iters", cmp.gf_iters, "override guided-filter iterations")->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--krylov-iters", cmp.krylov_iters, "override CG/LOBPCG iterations")
      ->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--out-dir", cmp.out_dir, "output directory")->envname(kOutDirEnv);

  SpectrumArgs spec;
  auto* spec_cmd = app.add_subcommand("spectrum", "dense Laplacian spectrum and GFT magnitudes");
  spec_cmd->add_option("input", spec.input, "signal whose graph (and GFT) to compute");
  spec_cmd->add_option("--path", spec.path_n, "use the unit-weight path graph on N vertices")
      ->check(CLI::PositiveNumber);
  spec_cmd->add_option("--graph", spec.graph, "bf | gf")->check(CLI::IsMember({"bf", "gf"}));
  spec_cmd->add_option("--half-width", spec.half_width, "bilateral window half-width")->check(CLI::PositiveNumber);
  spec_cmd->add_option("--sigma-s", spec.sigma_s, "spatial sigma (default: half-width)")->check(CLI::PositiveNumber);
  spec_cmd->add_option("--sigma-r", spec.sigma_r, "photometric sigma")->check(CLI::PositiveNumber);
  spec_cmd->add_option("--rho", spec.rho, "guided-filter window width (odd)")->check(CLI::PositiveNumber);
  spec_cmd->add_option("--eps", spec.eps, "guided-filter regularizer")->check(CLI::PositiveNumber);
  spec_cmd->add_flag("--normalized", spec.normalized, "use diag(L)^-1/2 L diag(L)^-1/2");
  spec_cmd->add_option("--out-dir", spec.out_dir, "output directory")->envname(kOutDirEnv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*synth_cmd) return guarded([&] { return run_synth(synth); });
  if (*den_cmd) return guarded([&] { return run_denoise(den); });
  if (*cmp_cmd) return guarded([&] { return run_compare(cmp); });
  return guarded([&] { return run_spectrum(spec); });
}
