#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace regenperm::cli {

enum class Format { json, csv, text };

Format parse_format(const std::string& s);

/// A titled table of cells (numbers or strings).
struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

/// Renders tables; JSON output is {"topic": ..., "tables": [...]}.
std::string render_tables(const std::string& topic, const std::vector<Table>& tables, Format f);

/// Exact table for a topic; throws ConfigError on unknown topics or bad
/// parameters.
struct ExactParams {
  std::size_t n = 7;
  std::size_t n_max = 10;
  std::size_t k = 12;
  std::size_t j_max = 8;
  std::vector<double> theta{0.5, 1.0, 2.0};
  double q = 0.5;
  std::vector<double> u;  // kaluza input
  std::string model;      // blocked: optional block-length law as model text
};
std::vector<Table> exact_tables(const std::string& topic, const ExactParams& p);

/// Entry point: returns the process exit code (0 ok, 1 verification
/// failure, 2 usage or configuration error).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace regenperm::cli
