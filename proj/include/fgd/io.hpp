#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "fgd/baseline.hpp"
#include "fgd/blink.hpp"
#include "fgd/error.hpp"
#include "fgd/saccade.hpp"
#include "fgd/signal.hpp"
#include "fgd/simulate.hpp"

namespace fgd {

// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct CsvRow {
  std::size_t line = 0;  // 1-based line in the file
  std::vector<std::string> fields;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

namespace detail {

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& f : out) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return out;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open '" + path.string() + "' for reading");
  return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
  return out;
}

inline void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw io_error("failed writing '" + path.string() + "'");
}

}  // namespace detail

// Comma-separated table with a mandatory header line; blank lines are ignored.
inline CsvTable read_csv(std::istream& in, std::size_t expected_columns) {
  CsvTable t;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fields = detail::split_fields(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      if (t.header.size() != expected_columns) {
        throw parse_error("expected a header with " + std::to_string(expected_columns) + " columns", no);
      }
      continue;
    }
    if (fields.size() != expected_columns) {
      throw parse_error("expected " + std::to_string(expected_columns) + " fields, found " +
                            std::to_string(fields.size()),
                        no);
    }
    t.rows.push_back({no, std::move(fields)});
  }
  if (t.header.empty()) throw parse_error("empty file", 0);
  return t;
}

inline double field_double(const CsvRow& row, std::size_t col) {
  const auto v = parse_double(row.fields[col]);
  if (!v || !std::isfinite(*v)) throw parse_error("'" + row.fields[col] + "' is not a finite number", row.line);
  return *v;
}

inline std::size_t field_index(const CsvRow& row, std::size_t col) {
  const std::string& s = row.fields[col];
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw parse_error("'" + s + "' is not a sample index", row.line);
  }
  return v;
}

inline int field_int(const CsvRow& row, std::size_t col) {
  const std::string& s = row.fields[col];
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw parse_error("'" + s + "' is not an integer", row.line);
  }
  return v;
}

// ---- signal CSV: t_s,value ----

inline void write_signal_csv(std::ostream& out, const SampledSignal& s) {
  out << "t_s,value\n";
  for (std::size_t k = 0; k < s.size(); ++k) out << format_double(s.time_at(k)) << ',' << format_double(s[k]) << '\n';
}

// fs_override is required for single-sample files; otherwise it must agree
// with the rate implied by the time column.
inline SampledSignal read_signal_csv(std::istream& in, std::optional<double> fs_override = std::nullopt) {
  const CsvTable t = read_csv(in, 2);
  if (t.rows.empty()) throw parse_error("signal file has no samples", 0);
  std::vector<double> times, values;
  times.reserve(t.rows.size());
  values.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    times.push_back(field_double(row, 0));
    values.push_back(field_double(row, 1));
  }
  const std::size_t n = times.size();
  double fs = 0.0;
  if (n >= 2) {
    const double span = times.back() - times.front();
    if (!(span > 0.0)) throw parse_error("time column must increase", t.rows.back().line);
    fs = static_cast<double>(n - 1) / span;
    const double snapped = std::round(fs * 1e6) / 1e6;
    if (std::abs(snapped - fs) <= 1e-9 * fs) fs = snapped;
    const double dt = 1.0 / fs;
    for (std::size_t k = 1; k < n; ++k) {
      const double expect = times.front() + static_cast<double>(k) * dt;
      if (std::abs(times[k] - expect) > 1e-6 * dt) {
        throw parse_error("time column is not uniformly sampled", t.rows[k].line);
      }
    }
    if (fs_override && std::abs(*fs_override - fs) > 1e-6 * fs) {
      throw std::invalid_argument("--fs-hz " + format_double(*fs_override) + " disagrees with the file's rate " +
                                  format_double(fs));
    }
  } else if (!fs_override) {
    throw std::invalid_argument("a single-sample signal needs an explicit sampling rate");
  }
  if (fs_override) fs = *fs_override;
  return SampledSignal(fs, std::move(values), times.front());
}

inline void write_signal_csv(const std::filesystem::path& path, const SampledSignal& s) {
  auto out = detail::open_output(path);
  write_signal_csv(out, s);
  detail::finish(out, path);
}

inline SampledSignal read_signal_csv(const std::filesystem::path& path,
                                     std::optional<double> fs_override = std::nullopt) {
  auto in = detail::open_input(path);
  try {
    return read_signal_csv(in, fs_override);
  } catch (const parse_error& e) {
    throw parse_error(path.string() + ": " + e.message(), e.line());
  }
}

// ---- event tables ----

inline void write_events_csv(const std::filesystem::path& path, const std::vector<SaccadeEvent>& events) {
  auto out = detail::open_output(path);
  out << "peak_idx,start_idx,end_idx,polarity\n";
  for (const auto& e : events) out << e.peak_idx << ',' << e.start_idx << ',' << e.end_idx << ',' << e.polarity << '\n';
  detail::finish(out, path);
}

inline std::vector<SaccadeEvent> read_events_csv(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  const CsvTable t = read_csv(in, 4);
  std::vector<SaccadeEvent> out;
  for (const auto& r : t.rows) out.push_back({field_index(r, 0), field_index(r, 1), field_index(r, 2), field_int(r, 3)});
  return out;
}

inline void write_true_events_csv(const std::filesystem::path& path, const std::vector<TrueSaccade>& events) {
  auto out = detail::open_output(path);
  out << "start_idx,end_idx,from_deg,to_deg,target_id\n";
  for (const auto& e : events) {
    out << e.start_idx << ',' << e.end_idx << ',' << format_double(e.from_deg) << ',' << format_double(e.to_deg) << ','
        << e.target_id << '\n';
  }
  detail::finish(out, path);
}

inline std::vector<TrueSaccade> read_true_events_csv(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  const CsvTable t = [&] {
    try {
      return read_csv(in, 5);
    } catch (const parse_error& e) {
      throw parse_error(path.string() + ": " + e.message(), e.line());
    }
  }();
  std::vector<TrueSaccade> out;
  for (const auto& r : t.rows) {
    out.push_back({field_index(r, 0), field_index(r, 1), field_double(r, 2), field_double(r, 3), r.fields[4]});
  }
  return out;
}

inline void write_segments_csv(const std::filesystem::path& path, const std::vector<FloatingSegment>& segs) {
  auto out = detail::open_output(path);
  out << "segment_idx,start_idx,end_idx,delta_v\n";
  for (std::size_t i = 0; i < segs.size(); ++i) {
    out << i << ',' << segs[i].seg_start_idx << ',' << segs[i].seg_end_idx << ',' << format_double(segs[i].delta)
        << '\n';
  }
  detail::finish(out, path);
}

inline void write_blinks_csv(const std::filesystem::path& path, const std::vector<BlinkEvent>& blinks) {
  auto out = detail::open_output(path);
  out << "start_idx,end_idx,peak_idx\n";
  for (const auto& b : blinks) out << b.start_idx << ',' << b.end_idx << ',' << b.peak_idx << '\n';
  detail::finish(out, path);
}

inline std::vector<BlinkEvent> read_blinks_csv(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  const CsvTable t = read_csv(in, 3);
  std::vector<BlinkEvent> out;
  for (const auto& r : t.rows) out.push_back({field_index(r, 0), field_index(r, 1), field_index(r, 2)});
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = detail::open_output(path);
  out << text;
  detail::finish(out, path);
}

inline std::string read_text(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fgd
