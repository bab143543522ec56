#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace graphfilt {

/// Layout of a graph signal: a 1D sequence or a row-major 2D grid.
class Shape {
 public:
  static Shape length(std::size_t n) { return Shape(1, n, false); }
  static Shape grid(std::size_t rows, std::size_t cols) { return Shape(rows, cols, true); }

  bool is_grid() const noexcept { return grid_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return rows_ * cols_; }

  std::size_t row_of(std::size_t i) const noexcept { return i / cols_; }
  std::size_t col_of(std::size_t i) const noexcept { return i % cols_; }
  std::size_t index(std::size_t r, std::size_t c) const noexcept { return r * cols_ + c; }

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  Shape(std::size_t rows, std::size_t cols, bool grid) : rows_(rows), cols_(cols), grid_(grid) {}

  std::size_t rows_;
  std::size_t cols_;
  bool grid_;
};

/// Finite real intensities over a Shape. Immutable once built.
class Signal {
 public:
  /// Throws InvalidArgument when the sizes disagree or a value is not finite.
  Signal(std::vector<double> values, Shape shape);

  static Signal line(std::vector<double> values);
  static Signal image(std::vector<double> values, std::size_t rows, std::size_t cols);
  static Signal constant(Shape shape, double value);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Same shape, new values (validated).
  Signal with_values(std::vector<double> values) const { return Signal(std::move(values), shape_); }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> values_;
  Shape shape_;
};

struct NoiseSpec {
  double std_dev = 0.0;
  std::uint64_t seed = 0;
};

struct Breakpoint {
  double position;  // fraction of the signal length, in [0, 1]
  double level;
};

/// Breakpoints of the default clean 1D signal: five plateaus joined by
/// ramps that rise or fall 0.3 to 0.7 over a tenth of the signal length.
///
/// Positions/levels: (0,.2) (.1,.2) (.2,.8) (.3,.8) (.4,.3) (.5,.3) (.6,.7)
/// (.7,.7) (.8,.1) (.9,.1) (1,.4).
const std::vector<Breakpoint>& default_breakpoints();

/// Samples the piecewise-linear interpolant of `breakpoints` at t_i = i/(n-1).
/// Positions must start at 0, end at 1 and increase strictly; n >= 2.
Signal make_piecewise_linear(std::size_t n, std::span<const Breakpoint> breakpoints);

/// Synthetic grayscale test image: background with a bright rectangle, a disk,
/// a dark triangle and a vertical bar. All regions are flat with sharp edges.
Signal make_test_image(std::size_t rows, std::size_t cols);

/// Standard normal deviate number `index` of the stream selected by `seed`.
///
/// Box-Muller (cosine branch) over two SplitMix64 outputs keyed by
/// (seed, 2*index) and (seed, 2*index+1), so any sample can be regenerated
/// without replaying the stream.
double gaussian_sample(std::uint64_t seed, std::uint64_t index);

/// x + eta, eta_i = std_dev * gaussian_sample(seed, i). No clipping.
Signal add_gaussian_noise(const Signal& x, const NoiseSpec& spec);

/// Root mean squared difference; throws InvalidArgument on shape mismatch.
double rmse(const Signal& reference, const Signal& test);

/// 10*log10(peak^2 / MSE) in dB; +infinity when the signals are identical.
double psnr(const Signal& reference, const Signal& test, double peak = 1.0);

}  // namespace graphfilt
