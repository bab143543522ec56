#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "graphfilt/errors.hpp"
#include "graphfilt/experiment.hpp"
#include "graphfilt/spectral.hpp"

namespace py = pybind11;
using namespace graphfilt;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Signal to_signal(const Array& a) {
  const auto info = a.request();
  const auto* data = static_cast<const double*>(info.ptr);
  std::vector<double> values(data, data + info.size);
  if (info.ndim == 1) return Signal::line(std::move(values));
  if (info.ndim == 2) return Signal::image(std::move(values), info.shape[0], info.shape[1]);
  throw InvalidArgument("expected a 1D or 2D array");
}

Array to_array(const Signal& s) {
  const auto& shape = s.shape();
  Array out = shape.is_grid() ? Array({shape.rows(), shape.cols()}) : Array(static_cast<py::ssize_t>(shape.size()));
  std::copy(s.values().begin(), s.values().end(), out.mutable_data());
  return out;
}

Array to_array(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

DenoiseSettings make_settings(const std::string& filter, std::size_t iterations, std::size_t half_width,
                              std::optional<double> sigma_s, double sigma_r, std::optional<std::string> neighborhood,
                              std::size_t rho, double eps, const std::string& mode, bool constraint,
                              const std::string& beta, bool image) {
  DenoiseSettings s;
  s.kind = parse_filter_kind(filter);
  s.iterations = iterations;
  s.bf.half_width = half_width;
  s.bf.sigma_s = sigma_s.value_or(static_cast<double>(half_width));
  s.bf.sigma_r = sigma_r;
  const std::string hood = neighborhood.value_or(image ? "stencil5" : "window");
  if (hood != "window" && hood != "stencil5") throw InvalidArgument("neighborhood must be 'window' or 'stencil5'");
  s.bf.neighborhood = hood == "stencil5" ? Neighborhood::kStencil5 : Neighborhood::kWindow;
  s.gf = GfParams{rho, eps};
  if (mode != "reguided" && mode != "fixed") throw InvalidArgument("mode must be 'reguided' or 'fixed'");
  s.mode = mode == "fixed" ? IterationMode::kFixedGuidance : IterationMode::kReGuided;
  s.constraint_e = constraint;
  if (beta != "printed" && beta != "pr") throw InvalidArgument("beta must be 'printed' or 'pr'");
  s.beta = beta == "pr" ? BetaFormula::kPolakRibiere : BetaFormula::kAsPrinted;
  s.validate();
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Edge-preserving graph filters and Krylov polynomial filters";

  py::register_exception<SingularError>(m, "SingularError", PyExc_ArithmeticError);
  py::register_exception<DegenerateBasisError>(m, "DegenerateBasisError", PyExc_ArithmeticError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.attr("DENSE_CAP") = kDenseCap;

  m.def("piecewise_linear", [](std::size_t n) { return to_array(make_piecewise_linear(n, default_breakpoints())); },
        py::arg("n"), "Default piecewise-linear test signal on [0, 1].");
  m.def("test_image", [](std::size_t rows, std::size_t cols) { return to_array(make_test_image(rows, cols)); },
        py::arg("rows") = 128, py::arg("cols") = 128, "Synthetic piecewise-constant test image.");
  m.def("add_noise",
        [](const Array& x, double std_dev, std::uint64_t seed) {
          return to_array(add_gaussian_noise(to_signal(x), NoiseSpec{std_dev, seed}));
        },
        py::arg("x"), py::arg("std_dev"), py::arg("seed") = 42);
  m.def("rmse", [](const Array& a, const Array& b) { return rmse(to_signal(a), to_signal(b)); });
  m.def("psnr", [](const Array& a, const Array& b, double peak) { return psnr(to_signal(a), to_signal(b), peak); },
        py::arg("reference"), py::arg("test"), py::arg("peak") = 1.0);

  m.def(
      "denoise",
      [](const Array& x, const std::string& filter, std::size_t iterations, std::size_t half_width,
         std::optional<double> sigma_s, double sigma_r, std::optional<std::string> neighborhood, std::size_t rho,
         double eps, const std::string& mode, bool constraint, const std::string& beta,
         std::optional<Array> guidance) {
        const Signal input = to_signal(x);
        const auto settings = make_settings(filter, iterations, half_width, sigma_s, sigma_r, neighborhood, rho,
                                            eps, mode, constraint, beta, input.shape().is_grid());
        std::optional<Signal> guide;
        if (guidance) guide = to_signal(*guidance);
        std::optional<Signal> out;
        {
          py::gil_scoped_release release;
          out = denoise(input, settings, guide).signal;
        }
        return to_array(*out);
      },
      py::arg("x"), py::arg("filter") = "bf", py::arg("iterations") = 1, py::arg("half_width") = 1,
      py::arg("sigma_s") = py::none(), py::arg("sigma_r") = 0.1, py::arg("neighborhood") = py::none(),
      py::arg("rho") = 5, py::arg("eps") = 0.01, py::arg("mode") = "reguided", py::arg("constraint") = false,
      py::arg("beta") = "printed", py::arg("guidance") = py::none(),
      "Filter a 1D or 2D signal with 'bf', 'gf', 'bf-cg' or 'lobpcg'.");

  m.def(
      "bf_spectrum",
      [](const Array& guidance, std::size_t half_width, std::optional<double> sigma_s, double sigma_r,
         bool normalized) {
        const Signal g = to_signal(guidance);
        if (g.size() > kDenseCap) throw CapacityError("bf_spectrum: signal exceeds the dense cap");
        BfParams p;
        p.half_width = half_width;
        p.sigma_s = sigma_s.value_or(static_cast<double>(half_width));
        p.sigma_r = sigma_r;
        p.neighborhood = g.shape().is_grid() ? Neighborhood::kStencil5 : Neighborhood::kWindow;
        const auto d = eig_sym(to_dense(LaplacianOperator(bf_graph(g, p), normalized)));
        Array vectors({d.size(), d.size()});
        auto view = vectors.mutable_unchecked<2>();
        for (std::size_t i = 0; i < d.size(); ++i) {
          for (std::size_t j = 0; j < d.size(); ++j) view(i, j) = d.eigenvectors(i, j);
        }
        return py::make_tuple(to_array(d.eigenvalues), vectors);
      },
      py::arg("guidance"), py::arg("half_width") = 1, py::arg("sigma_s") = py::none(), py::arg("sigma_r") = 0.1,
      py::arg("normalized") = false,
      "Eigenvalues (ascending) and eigenvector columns of the bilateral graph Laplacian.");
}
