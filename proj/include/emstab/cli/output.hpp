#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "emstab/core/error.hpp"

namespace emstab::cli {

inline constexpr const char* kVersion = "0.1.0";

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Round-trippable decimal form of a double.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

using Cell = std::variant<double, long long, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size())
      throw Error("result row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(columns.size()));
    rows.push_back(std::move(row));
  }
};

inline std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

struct Provenance {
  std::string command;
  std::string config_hash;
};

inline std::string provenance_header(const Provenance& p) {
  return "# emstab " + std::string(kVersion) + "\n# command: " + p.command + "\n# config_hash: " + p.config_hash + "\n";
}

inline std::string to_csv(const ResultTable& t, const Provenance& p) {
  std::ostringstream os;
  os << provenance_header(p);
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_cell(r[i]);
    os << '\n';
  }
  return os.str();
}

/// Whitespace-separated columns; blocks separated by blank lines.
struct PlotData {
  std::vector<std::string> columns;
  std::vector<std::vector<std::vector<double>>> blocks;
  std::vector<std::string> block_labels;
};

inline std::string to_plot(const PlotData& d, const Provenance& p) {
  std::ostringstream os;
  os << provenance_header(p) << "#";
  for (const auto& c : d.columns) os << ' ' << c;
  os << '\n';
  for (std::size_t b = 0; b < d.blocks.size(); ++b) {
    if (b) os << "\n\n";
    if (b < d.block_labels.size()) os << "# " << d.block_labels[b] << '\n';
    for (const auto& r : d.blocks[b]) {
      for (std::size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << format_double(r[i]);
      os << '\n';
    }
  }
  return os.str();
}

/// Writes through a temporary file in the same directory and renames it into place.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace emstab::cli
