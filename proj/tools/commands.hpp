#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "starsplit/catalog.hpp"
#include "starsplit/metric.hpp"

namespace starsplit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

enum class Format { text, json, csv };

struct RunConfig {
  std::string manifold;              // catalog name or file path
  std::vector<std::string> params;   // name=value bindings (scan: also the bare scanned name)
  std::string metric;                // empty, "standard", "random[:seed]", inline JSON or file path
  std::string gamma;                 // second metric, same syntax
  std::string phi;                   // pullback matrix file or inline JSON
  double tol = kDefaultTol;
  Format format = Format::text;
  std::uint64_t seed = 1;
  int budget = 2000;
  int restarts = 4;
  std::string suite = "all";
  std::string values;                // comma-separated complex literals for scan
  std::string family = "diagonal";
  std::string target = "pluriclosed_star_split";
  std::string output;                // write the result here instead of stdout
  bool include_metric = false;       // catalog export: also emit the default metric
};

// A loaded manifold with its default metric and, for catalog entries, the
// published expectations.
struct Loaded {
  std::optional<CatalogEntry> entry;
  InvariantComplexManifold manifold;
  HermitianMetric metric;
};

Loaded load_manifold(const RunConfig& cfg);
HermitianMetric resolve_metric(const std::string& spec, int n, const HermitianMetric& fallback);

int cmd_catalog_list(const RunConfig& cfg, std::ostream& out);
int cmd_catalog_export(const RunConfig& cfg, const std::string& name, std::ostream& out);
int cmd_classify(const RunConfig& cfg, std::ostream& out);
int cmd_invariants(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_search(const RunConfig& cfg, std::ostream& out);
int cmd_scan(const RunConfig& cfg, std::ostream& out);

// Parses the command line and dispatches; returns the process exit code.
int run(int argc, char** argv);

}  // namespace starsplit::cli
