#include "graphfilt/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "graphfilt/errors.hpp"

namespace graphfilt::io {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading " + path.string());
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("error while writing " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move temporary file into " + path.string());
  }
}

std::string encode_csv(const Signal& signal) {
  std::string out;
  for (std::size_t i = 0; i < signal.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(signal[i]);
    out += '\n';
  }
  return out;
}

Signal decode_csv(std::string_view text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      const std::size_t comma = line.find(',');
      if (comma == std::string_view::npos) throw ParseError("csv: expected `index,value`", pos);
      std::size_t index = 0;
      const auto idx = std::from_chars(line.data(), line.data() + comma, index);
      if (idx.ec != std::errc{} || idx.ptr != line.data() + comma) throw ParseError("csv: bad index", pos);
      if (index != values.size()) {
        throw ParseError("csv: expected index " + std::to_string(values.size()), pos);
      }
      double value = 0.0;
      const char* first = line.data() + comma + 1;
      const char* last = line.data() + line.size();
      const auto val = std::from_chars(first, last, value);
      if (val.ec != std::errc{} || val.ptr != last || !std::isfinite(value)) {
        throw ParseError("csv: bad value", pos + comma + 1);
      }
      values.push_back(value);
    }
    pos = end + 1;
  }
  if (values.empty()) throw ParseError("csv: no samples", 0);
  return Signal::line(std::move(values));
}

std::string encode_pgm(const Signal& image, bool binary) {
  const Shape& shape = image.shape();
  std::string out = binary ? "P5\n" : "P2\n";
  out += std::to_string(shape.cols()) + " " + std::to_string(shape.rows()) + "\n255\n";
  for (std::size_t i = 0; i < image.size(); ++i) {
    const long level = std::lround(std::clamp(image[i], 0.0, 1.0) * 255.0);
    if (binary) {
      out += static_cast<char>(static_cast<unsigned char>(level));
    } else {
      out += std::to_string(level);
      out += ((i + 1) % shape.cols() == 0) ? '\n' : ' ';
    }
  }
  return out;
}

namespace {

class PgmReader {
 public:
  explicit PgmReader(std::string_view bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number(const char* what) {
    skip_space_and_comments();
    std::size_t value = 0;
    const char* first = bytes_.data() + pos_;
    const char* last = bytes_.data() + bytes_.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{}) throw ParseError(std::string("pgm: expected ") + what, pos_);
    pos_ += static_cast<std::size_t>(res.ptr - first);
    return value;
  }

  unsigned char byte() {
    if (pos_ >= bytes_.size()) throw ParseError("pgm: raster is truncated", pos_);
    return static_cast<unsigned char>(bytes_[pos_++]);
  }

  std::string_view take(std::size_t n) {
    if (pos_ + n > bytes_.size()) throw ParseError("pgm: unexpected end of data", pos_);
    const auto out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Signal decode_pgm(std::string_view bytes) {
  PgmReader reader(bytes);
  const auto magic = reader.take(2);
  const bool binary = magic == "P5";
  if (!binary && magic != "P2") throw ParseError("pgm: unknown magic number", 0);
  const std::size_t cols = reader.number("width");
  const std::size_t rows = reader.number("height");
  const std::size_t maxval = reader.number("maxval");
  if (cols == 0 || rows == 0) throw ParseError("pgm: zero image dimension", reader.offset());
  if (maxval == 0 || maxval > 255) throw ParseError("pgm: maxval must lie in 1..255", reader.offset());

  std::vector<double> values(rows * cols);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (binary) {
    const std::size_t header_end = reader.offset();
    const unsigned char sep = reader.byte();
    if (sep != ' ' && sep != '\n' && sep != '\t' && sep != '\r') {
      throw ParseError("pgm: missing whitespace after header", header_end);
    }
    for (auto& v : values) {
      const unsigned char level = reader.byte();
      if (level > maxval) throw ParseError("pgm: sample exceeds maxval", reader.offset() - 1);
      v = level * scale;
    }
  } else {
    for (auto& v : values) {
      const std::size_t at = reader.offset();
      const std::size_t level = reader.number("sample");
      if (level > maxval) throw ParseError("pgm: sample exceeds maxval", at);
      v = static_cast<double>(level) * scale;
    }
  }
  return Signal::image(std::move(values), rows, cols);
}

namespace {

bool is_pgm(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".pgm";
}

}  // namespace

Signal read_signal(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  return is_pgm(path) ? decode_pgm(bytes) : decode_csv(bytes);
}

void write_signal(const std::filesystem::path& path, const Signal& signal) {
  if (is_pgm(path)) {
    if (!signal.shape().is_grid()) throw InvalidArgument("cannot write a 1D signal as PGM: " + path.string());
    write_file_atomic(path, encode_pgm(signal));
  } else {
    write_file_atomic(path, encode_csv(signal));
  }
}

std::string encode_edges(const WeightedGraph& graph) {
  std::string out;
  for (const auto& e : graph.edges()) {
    out += std::to_string(e.i) + "," + std::to_string(e.j) + "," + format_double(e.weight) + "\n";
  }
  const auto loops = graph.self_loops();
  for (std::size_t i = 0; i < loops.size(); ++i) {
    if (loops[i] != 0.0) out += std::to_string(i) + "," + std::to_string(i) + "," + format_double(loops[i]) + "\n";
  }
  return out;
}

std::string encode_trace(std::span<const IterationRecord> trace) {
  const bool with_rmse = !trace.empty() && trace.front().rmse.has_value();
  std::string out = with_rmse ? "k,value,rmse\n" : "k,value\n";
  for (const auto& rec : trace) {
    out += std::to_string(rec.k) + "," + format_double(rec.value);
    if (with_rmse && rec.rmse) out += "," + format_double(*rec.rmse);
    out += '\n';
  }
  return out;
}

std::string svg_line_plot(std::string_view title, std::span<const PlotSeries> series) {
  constexpr double kWidth = 960.0, kHeight = 480.0, kMargin = 40.0;
  static constexpr std::array<const char*, 6> kColors = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                                         "#d62728", "#9467bd", "#8c564b"};
  std::size_t count = 0;
  double lo = 0.0, hi = 1.0;
  bool first = true;
  for (const auto& s : series) {
    count = std::max(count, s.values.size());
    for (double v : s.values) {
      lo = first ? v : std::min(lo, v);
      hi = first ? v : std::max(hi, v);
      first = false;
    }
  }
  if (hi <= lo) hi = lo + 1.0;
  const double dx = count > 1 ? (kWidth - 2 * kMargin) / static_cast<double>(count - 1) : 0.0;
  const auto y_of = [&](double v) { return kHeight - kMargin - (v - lo) / (hi - lo) * (kHeight - 2 * kMargin); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kMargin << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % kColors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < series[k].values.size(); ++i) {
      if (i != 0) out << ' ';
      out << format_double(kMargin + dx * static_cast<double>(i)) << ','
          << format_double(y_of(series[k].values[i]));
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - 200 << "\" y=\"" << 24 + 16 * k << "\" font-family=\"sans-serif\" "
        << "font-size=\"12\" fill=\"" << color << "\">" << series[k].label << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace graphfilt::io
