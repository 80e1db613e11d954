// Machine-readable run reports: a structured key = value record stream (one
// [manifest] section, one [row k] section per instance, one [summary]
// section) plus a flat tab-separated export of the rows. Numbers are printed
// with 17 significant digits and complex values as separate _re / _im
// fields, so every double round-trips exactly. Two runs with the same
// (config, seed) produce byte-identical bodies except for the timestamp
// line.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qpent/identities.hpp"
#include "qpent/types.hpp"

namespace qpent {

struct RunManifest {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t rng_seed = 0;
  int grid_n = 0;
  int m_max = 0;
  int max_terms = 0;
  double target_tail = 0.0;
  std::string version = "1.0.0";
  std::string timestamp;  // UTC, ISO 8601; filled by now_utc() if empty
};

// "%.17g" — shortest text that restores the exact double.
std::string format_double(double v);

// Current time as e.g. 2026-08-25T12:34:56Z.
std::string now_utc();

// Row verdict. UNDER_RESOLVED marks residuals above tolerance that still sit
// within safety_factor x error_budget: a resolution shortfall, counted as
// passed for exit-code purposes but flagged for attention.
enum class RowStatus { passed, under_resolved, failed };
const char* row_status_name(RowStatus s);
RowStatus classify(const ResidualReport& rep);

class Report {
 public:
  explicit Report(RunManifest manifest);

  // Appends a row; returns its index. Fields keep insertion order.
  int add_row();
  void set(int row, const std::string& key, const std::string& value);
  void set(int row, const std::string& key, double value);
  void set(int row, const std::string& key, long value);
  void set_complex(int row, const std::string& key, cplx value);
  // Writes the residual block shared by all checkers, including the status
  // field; returns the status.
  RowStatus set_residuals(int row, const ResidualReport& rep);

  void set_summary(const std::string& key, const std::string& value);
  void set_summary(const std::string& key, double value);
  void set_summary(const std::string& key, long value);

  // The structured record document.
  std::string render() const;
  // The flat export: header of the union of row keys, one line per row.
  std::string render_table() const;
  // render() to path, render_table() to path + ".tsv".
  void write_files(const std::string& path) const;

 private:
  using Fields = std::vector<std::pair<std::string, std::string>>;
  RunManifest manifest_;
  std::vector<Fields> rows_;
  Fields summary_;
};

// The body used for determinism comparisons: the full document minus the
// timestamp line.
std::string strip_timestamp(const std::string& document);

}  // namespace qpent
