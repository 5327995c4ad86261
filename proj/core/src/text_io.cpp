#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "beatmark/errors.hpp"
#include "beatmark/signal_io.hpp"

namespace beatmark {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string format_rtimes(std::span<const BeatMark> beats) {
  std::string out;
  double prev = -1.0;
  for (const auto& b : beats) {
    if (!is_output_class(b.cls)) continue;
    if (b.time <= prev) throw InvalidArgument("beats must be strictly increasing in time");
    prev = b.time;
    out += fixed6(b.time);
    out += '\n';
  }
  return out;
}

void write_rtimes(std::span<const BeatMark> beats, const std::filesystem::path& path) {
  write_text_file(path, format_rtimes(beats));
}

std::string format_bad_intervals(std::span<const Region> regions) {
  std::string out;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const auto& r = regions[i];
    if (!(r.start < r.end)) throw OverlappingRegions("region " + std::to_string(i) + " is empty or reversed");
    if (i > 0 && r.start < regions[i - 1].end) {
      throw OverlappingRegions("region " + std::to_string(i) + " starts before the previous one ends");
    }
    out += fixed6(r.start);
    out += '\t';
    out += fixed6(r.end);
    out += '\t';
    out += to_string(r.reason);
    out += '\n';
  }
  return out;
}

void write_bad_intervals(std::span<const Region> regions, const std::filesystem::path& path) {
  write_text_file(path, format_bad_intervals(regions));
}

std::vector<Seconds> read_rtimes(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<Seconds> out;
  double t;
  while (in >> t) out.push_back(t);
  return out;
}

std::vector<Region> read_bad_intervals(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  std::vector<Region> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Region r;
    std::string reason;
    if (!(ls >> r.start >> r.end >> reason)) throw IoError("malformed .bi line: " + line);
    auto parsed = parse_region_reason(reason);
    if (!parsed) throw IoError("unknown region reason: " + reason);
    r.reason = *parsed;
    out.push_back(r);
  }
  return out;
}

}  // namespace beatmark
