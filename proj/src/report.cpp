#include "qpent/report.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace qpent {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string now_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

const char* row_status_name(RowStatus s) {
  switch (s) {
    case RowStatus::passed:
      return "PASSED";
    case RowStatus::under_resolved:
      return "UNDER_RESOLVED";
    case RowStatus::failed:
      return "FAILED";
  }
  return "FAILED";
}

RowStatus classify(const ResidualReport& rep) {
  if (!rep.passed) return RowStatus::failed;
  if (rep.relative_residual > rep.tolerance) return RowStatus::under_resolved;
  return RowStatus::passed;
}

Report::Report(RunManifest manifest) : manifest_(std::move(manifest)) {
  if (manifest_.timestamp.empty()) manifest_.timestamp = now_utc();
}

int Report::add_row() {
  rows_.emplace_back();
  return static_cast<int>(rows_.size()) - 1;
}

void Report::set(int row, const std::string& key, const std::string& value) {
  rows_.at(row).emplace_back(key, value);
}

void Report::set(int row, const std::string& key, double value) {
  set(row, key, format_double(value));
}

void Report::set(int row, const std::string& key, long value) {
  set(row, key, std::to_string(value));
}

void Report::set_complex(int row, const std::string& key, cplx value) {
  set(row, key + "_re", value.real());
  set(row, key + "_im", value.imag());
}

RowStatus Report::set_residuals(int row, const ResidualReport& rep) {
  set_complex(row, "lhs", rep.lhs);
  set_complex(row, "rhs", rep.rhs);
  set(row, "relative_residual", rep.relative_residual);
  set(row, "quadrature_error_estimate", rep.quadrature_error_estimate);
  set(row, "charge_tail_estimate", rep.charge_tail_estimate);
  set(row, "tail_correction", rep.tail_correction);
  set(row, "error_budget", rep.error_budget);
  set(row, "tolerance", rep.tolerance);
  set(row, "safety_factor", rep.safety_factor);
  const RowStatus st = classify(rep);
  set(row, "status", row_status_name(st));
  return st;
}

void Report::set_summary(const std::string& key, const std::string& value) {
  summary_.emplace_back(key, value);
}

void Report::set_summary(const std::string& key, double value) {
  set_summary(key, format_double(value));
}

void Report::set_summary(const std::string& key, long value) {
  set_summary(key, std::to_string(value));
}

std::string Report::render() const {
  std::string out;
  out += "[manifest]\n";
  out += "command = " + manifest_.command + "\n";
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(manifest_.config_hash));
  out += "config_hash = " + std::string(hash) + "\n";
  out += "rng_seed = " + std::to_string(manifest_.rng_seed) + "\n";
  out += "grid_n = " + std::to_string(manifest_.grid_n) + "\n";
  out += "m_max = " + std::to_string(manifest_.m_max) + "\n";
  out += "max_terms = " + std::to_string(manifest_.max_terms) + "\n";
  out += "target_tail = " + format_double(manifest_.target_tail) + "\n";
  out += "version = " + manifest_.version + "\n";
  out += "timestamp = " + manifest_.timestamp + "\n";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    out += "\n[row " + std::to_string(i) + "]\n";
    for (const auto& [key, value] : rows_[i]) {
      out += key + " = " + value + "\n";
    }
  }
  out += "\n[summary]\n";
  for (const auto& [key, value] : summary_) {
    out += key + " = " + value + "\n";
  }
  return out;
}

std::string Report::render_table() const {
  // Header: union of row keys in first-appearance order.
  std::vector<std::string> columns;
  columns.push_back("row");
  for (const auto& row : rows_) {
    for (const auto& [key, value] : row) {
      bool seen = false;
      for (const auto& c : columns) {
        if (c == key) {
          seen = true;
          break;
        }
      }
      if (!seen) columns.push_back(key);
    }
  }
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += "\t";
    out += columns[c];
  }
  out += "\n";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += "\t";
      if (columns[c] == "row") {
        out += std::to_string(i);
        continue;
      }
      for (const auto& [key, value] : rows_[i]) {
        if (key == columns[c]) {
          out += value;
          break;
        }
      }
    }
    out += "\n";
  }
  return out;
}

void Report::write_files(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output path '" + path + "'");
  }
  out << render();
  const std::string table_path = path + ".tsv";
  std::ofstream table(table_path);
  if (!table) {
    throw std::runtime_error("cannot open output path '" + table_path + "'");
  }
  table << render_table();
}

std::string strip_timestamp(const std::string& document) {
  std::string out;
  std::size_t pos = 0;
  while (pos < document.size()) {
    std::size_t end = document.find('\n', pos);
    if (end == std::string::npos) end = document.size();
    const std::string line = document.substr(pos, end - pos);
    if (line.rfind("timestamp = ", 0) != 0) {
      out += line;
      out += "\n";
    }
    pos = end + 1;
  }
  return out;
}

}  // namespace qpent
