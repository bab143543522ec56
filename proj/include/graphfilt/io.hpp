#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "graphfilt/graph.hpp"
#include "graphfilt/krylov.hpp"
#include "graphfilt/signal.hpp"

namespace graphfilt::io {

/// Shortest decimal text that round-trips the double.
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames it into place. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Headerless `index,value` lines, LF terminated.
std::string encode_csv(const Signal& signal);
/// Indices must run 0, 1, 2, ... Throws ParseError.
Signal decode_csv(std::string_view text);

/// Binary P5 (or ASCII P2) with maxval 255; values are clamped to [0, 1] and
/// rounded half away from zero.
std::string encode_pgm(const Signal& image, bool binary = true);
/// Accepts P2 and P5 with maxval up to 255. Throws ParseError.
Signal decode_pgm(std::string_view bytes);

/// `.pgm` selects PGM, anything else CSV.
Signal read_signal(const std::filesystem::path& path);
void write_signal(const std::filesystem::path& path, const Signal& signal);

/// `i,j,w_ij` per undirected edge (i < j), then self-loops as `i,i,w_ii`.
std::string encode_edges(const WeightedGraph& graph);

/// `k,value[,rmse]` with a header line.
std::string encode_trace(std::span<const IterationRecord> trace);

struct PlotSeries {
  std::string label;
  std::vector<double> values;
};

/// Minimal SVG line chart: one polyline per series over a shared index axis.
std::string svg_line_plot(std::string_view title, std::span<const PlotSeries> series);

}  // namespace graphfilt::io
