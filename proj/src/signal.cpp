#include "graphfilt/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "graphfilt/errors.hpp"

namespace graphfilt {

Signal::Signal(std::vector<double> values, Shape shape) : values_(std::move(values)), shape_(shape) {
  if (values_.size() != shape_.size()) {
    throw InvalidArgument("signal: " + std::to_string(values_.size()) + " values for a shape of " +
                          std::to_string(shape_.size()) + " samples");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvalidArgument("signal: non-finite value at index " + std::to_string(i));
    }
  }
}

Signal Signal::line(std::vector<double> values) {
  const auto n = values.size();
  return Signal(std::move(values), Shape::length(n));
}

Signal Signal::image(std::vector<double> values, std::size_t rows, std::size_t cols) {
  return Signal(std::move(values), Shape::grid(rows, cols));
}

Signal Signal::constant(Shape shape, double value) {
  return Signal(std::vector<double>(shape.size(), value), shape);
}

const std::vector<Breakpoint>& default_breakpoints() {
  static const std::vector<Breakpoint> points = {
      {0.0, 0.2}, {0.1, 0.2}, {0.2, 0.8}, {0.3, 0.8}, {0.4, 0.3}, {0.5, 0.3},
      {0.6, 0.7}, {0.7, 0.7}, {0.8, 0.1}, {0.9, 0.1}, {1.0, 0.4},
  };
  return points;
}

Signal make_piecewise_linear(std::size_t n, std::span<const Breakpoint> breakpoints) {
  if (n < 2) throw InvalidArgument("make_piecewise_linear: n must be at least 2");
  if (breakpoints.size() < 2) throw InvalidArgument("make_piecewise_linear: need at least two breakpoints");
  if (breakpoints.front().position != 0.0 || breakpoints.back().position != 1.0) {
    throw InvalidArgument("make_piecewise_linear: positions must start at 0 and end at 1");
  }
  for (std::size_t k = 1; k < breakpoints.size(); ++k) {
    if (!(breakpoints[k].position > breakpoints[k - 1].position)) {
      throw InvalidArgument("make_piecewise_linear: positions must be strictly increasing");
    }
  }

  std::vector<double> values(n);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (i + 1 == n) ? 1.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    while (seg + 2 < breakpoints.size() && t > breakpoints[seg + 1].position) ++seg;
    const auto& a = breakpoints[seg];
    const auto& b = breakpoints[seg + 1];
    const double u = std::clamp((t - a.position) / (b.position - a.position), 0.0, 1.0);
    values[i] = a.level + u * (b.level - a.level);
  }
  return Signal::line(std::move(values));
}

Signal make_test_image(std::size_t rows, std::size_t cols) {
  if (rows < 2 || cols < 2) throw InvalidArgument("make_test_image: image must be at least 2x2");
  std::vector<double> values(rows * cols);
  const double h = static_cast<double>(rows);
  const double w = static_cast<double>(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      // normalized pixel-center coordinates in [0, 1)
      const double y = (static_cast<double>(r) + 0.5) / h;
      const double x = (static_cast<double>(c) + 0.5) / w;
      double v = 0.25;
      if (x > 0.08 && x < 0.45 && y > 0.10 && y < 0.40) v = 0.75;
      const double dx = x - 0.68, dy = y - 0.30;
      if (dx * dx + dy * dy < 0.18 * 0.18) v = 0.95;
      // triangle with apex (0.3, 0.55) and base y = 0.92 from x = 0.08 to 0.52
      if (y > 0.55 && y < 0.92) {
        const double half = 0.22 * (y - 0.55) / 0.37;
        if (std::abs(x - 0.30) < half) v = 0.05;
      }
      if (x > 0.62 && x < 0.80 && y > 0.55 && y < 0.92) v = 0.55;
      values[r * cols + c] = v;
    }
  }
  return Signal::image(std::move(values), rows, cols);
}

namespace {

std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// counter-based uniform in (0, 1]
double uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ (counter * 0xD1B54A32D192ED03ULL));
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

double gaussian_sample(std::uint64_t seed, std::uint64_t index) {
  const double u1 = uniform(seed, 2 * index);
  const double u2 = uniform(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Signal add_gaussian_noise(const Signal& x, const NoiseSpec& spec) {
  if (!(spec.std_dev >= 0.0)) throw InvalidArgument("add_gaussian_noise: std_dev must be >= 0");
  if (spec.std_dev == 0.0) return x;
  std::vector<double> out(x.values().begin(), x.values().end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += spec.std_dev * gaussian_sample(spec.seed, i);
  return x.with_values(std::move(out));
}

namespace {

double mean_squared_error(const Signal& reference, const Signal& test) {
  if (reference.shape() != test.shape()) throw InvalidArgument("metric: signal shapes differ");
  if (reference.size() == 0) throw InvalidArgument("metric: empty signals");
  double sum = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference[i] - test[i];
    sum += d * d;
  }
  return sum / static_cast<double>(reference.size());
}

}  // namespace

double rmse(const Signal& reference, const Signal& test) {
  return std::sqrt(mean_squared_error(reference, test));
}

double psnr(const Signal& reference, const Signal& test, double peak) {
  if (!(peak > 0.0)) throw InvalidArgument("psnr: peak must be positive");
  const double mse = mean_squared_error(reference, test);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

}  // namespace graphfilt
