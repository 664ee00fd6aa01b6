#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opmax/pipeline.hpp"

namespace opmax {

// Converts a raw public-benchmark file into an instance-data file of
// assignment expressions. Supported formats: dimacs-col (graph coloring),
// mknap (OR-Library multidimensional knapsack; index selects the instance),
// qaplib, tsplib (EUC_2D, GEO, EXPLICIT), vrp (CVRPLIB), taillard-jsp,
// taillard-osp, cec (shift vectors).
std::string convert_instance(const std::string& format, const std::string& raw,
                             int index = 0);

struct BenchmarkEntry {
  std::string problem;
  std::string model_path;
  std::string data_path;
  Rat expected;
  int n = 0, m = 0;
  Rat tolerance;           // 0 = exact
  bool external_only = false;  // excluded unless --full
};

struct BenchRowResult {
  BenchmarkEntry entry;
  std::string status;  // PASS / FAIL / SKIP / ERROR
  Rat actual;
  double seconds = 0;
  std::string note;
};

std::vector<BenchmarkEntry> parse_suite(const std::string& text,
                                        const std::string& base_dir);

std::vector<BenchRowResult> run_suite(const std::vector<BenchmarkEntry>& entries,
                                      const RunConfig& base, bool full);

std::string format_bench_table(const std::vector<BenchRowResult>& rows);

}  // namespace opmax
