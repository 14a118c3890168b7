#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emstab/cli/commands.hpp"
#include "emstab/cli/config.hpp"
#include "emstab/cli/output.hpp"
#include "emstab/harness/experiment.hpp"

namespace emstab::cli {

struct RunFiles {
  std::filesystem::path dir;
  std::filesystem::path csv, plot, manifest;
  std::string csv_hash;
  json manifest_json;
};

inline std::string config_hash(const RunConfig& c) { return "fnv1a64:" + hex64(fnv1a64(c.canonical().dump())); }

/// Output directory: explicit --out, then config output_dir, then $EMSTAB_OUTPUT_ROOT (default
/// "emstab-runs") / <family>-<action>-<hash prefix>.
inline std::filesystem::path output_directory(const RunConfig& c, const std::string& out_flag) {
  if (!out_flag.empty()) return out_flag;
  if (!c.output_dir.empty()) return c.output_dir;
  const char* root = std::getenv("EMSTAB_OUTPUT_ROOT");
  const std::string h = hex64(fnv1a64(c.canonical().dump())).substr(0, 8);
  return std::filesystem::path(root && *root ? root : "emstab-runs") / (c.family + "-" + c.action + "-" + h);
}

/// Runs the command and writes result.csv, plot.dat and manifest.json atomically into `dir`.
inline RunFiles execute(const RunConfig& c, const std::filesystem::path& dir, Outcome* out = nullptr) {
  const auto start = std::chrono::system_clock::now();
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o = dispatch(c);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const Provenance prov{c.command(), config_hash(c)};
  const std::string csv = to_csv(o.table, prov);
  const std::string plot = to_plot(o.plot, prov);
  RunFiles f;
  f.dir = dir;
  std::filesystem::create_directories(dir);
  f.csv = dir / "result.csv";
  f.plot = dir / "plot.dat";
  f.manifest = dir / "manifest.json";
  f.csv_hash = "fnv1a64:" + hex64(fnv1a64(csv));
  f.manifest_json = {{"tool", "emstab"},
                     {"version", kVersion},
                     {"command", c.command()},
                     {"config", c.values},
                     {"config_hash", prov.config_hash},
                     {"seed", c.seed},
                     {"started", harness::utc_timestamp(start)},
                     {"wall_seconds", wall},
                     {"outputs",
                      {{{"file", "result.csv"}, {"hash", f.csv_hash}},
                       {{"file", "plot.dat"}, {"hash", "fnv1a64:" + hex64(fnv1a64(plot))}}}},
                     {"summary", o.summary}};
  atomic_write(f.csv, csv);
  atomic_write(f.plot, plot);
  atomic_write(f.manifest, f.manifest_json.dump(2) + "\n");
  if (out) *out = std::move(o);
  return f;
}

/// Re-runs the configuration stored in a manifest and compares the summary and the CSV hash.
inline bool verify_manifest(const std::filesystem::path& manifest_path, std::ostream& log) {
  const json m = json::parse(read_file(manifest_path));
  std::istringstream is(m.at("command").get<std::string>());
  std::string family, action;
  is >> family >> action;
  json doc = m.at("config");
  doc["seed"] = m.at("seed");
  const RunConfig c = parse_config(doc, family, action);
  if (config_hash(c) != m.at("config_hash").get<std::string>()) {
    log << "verify: config hash mismatch (" << config_hash(c) << " vs " << m.at("config_hash").get<std::string>() << ")\n";
    return false;
  }
  const auto tmp = std::filesystem::temp_directory_path() /
                   ("emstab-verify-" + std::to_string(::getpid()) + "-" + hex64(fnv1a64(manifest_path.string())));
  const RunFiles f = execute(c, tmp);
  std::filesystem::remove_all(tmp);
  std::string expected_csv;
  for (const auto& o : m.at("outputs"))
    if (o.at("file") == "result.csv") expected_csv = o.at("hash").get<std::string>();
  bool ok = true;
  if (f.manifest_json.at("summary") != m.at("summary")) {
    log << "verify: summary differs\n";
    ok = false;
  }
  if (f.csv_hash != expected_csv) {
    log << "verify: result.csv hash differs (" << f.csv_hash << " vs " << expected_csv << ")\n";
    ok = false;
  }
  if (ok) log << "verify: OK (" << c.command() << ", " << f.csv_hash << ")\n";
  return ok;
}

/// Splits `--section.key value` / `--key value` config overrides from the fixed flags.
inline std::vector<std::pair<std::string, json>> split_overrides(std::vector<std::string>& args) {
  static const std::vector<std::string> fixed = {"--config", "--out", "--expect-stable", "--verify", "--help", "-h"};
  std::vector<std::pair<std::string, json>> overrides;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    const bool is_fixed = std::any_of(fixed.begin(), fixed.end(), [&](const std::string& f) {
      return a == f || a.rfind(f + "=", 0) == 0;
    });
    if (a.rfind("--", 0) != 0 || is_fixed) {
      rest.push_back(a);
      continue;
    }
    std::string key = a.substr(2), value;
    if (const auto eq = key.find('='); eq != std::string::npos) {
      value = key.substr(eq + 1);
      key = key.substr(0, eq);
    } else {
      if (i + 1 >= args.size()) throw InvalidArgument("flag --" + key + " needs a value");
      value = args[++i];
    }
    overrides.emplace_back(key, parse_flag_value(value));
  }
  args = rest;
  return overrides;
}

/// Entry point of the `emstab` tool. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto overrides = split_overrides(args);

    CLI::App app{"emstab: orbital stability experiments for Hamiltonian systems with symmetry"};
    std::string family, action, config_path, out_dir, verify;
    bool expect_stable = false;
    app.add_option("family", family, "spherical | planewave | soliton | manakov | standing | harness");
    app.add_option("action", action, "subcommand of the family");
    app.add_option("--config", config_path, "JSON config file (comments allowed)");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--expect-stable", expect_stable, "exit with 2 when the verdict is unstable");
    app.add_option("--verify", verify, "re-run a manifest and compare its summary and CSV hash");
    app.footer("Config keys can be overridden with --section.key value or --key value.");
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
      app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
      out << app.help();
      return 0;
    } catch (const CLI::ParseError& e) {
      err << "emstab: " << e.what() << "\n";
      return 1;
    }

    if (!verify.empty()) return verify_manifest(verify, out) ? 0 : 1;

    json doc = config_path.empty() ? json::object() : load_config_file(config_path);
    const RunConfig c = parse_config(doc, family, action, overrides);
    Outcome o;
    const RunFiles f = execute(c, output_directory(c, out_dir), &o);
    out << c.command() << ": " << o.summary.dump() << "\n" << "wrote " << f.dir.string() << "\n";
    return expect_stable && o.unstable ? 2 : 0;
  } catch (const std::exception& e) {
    err << "emstab: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace emstab::cli
