#pragma once

// Report emission: RFC-4180 CSV, a sectioned key = value text document
// (shared with run configuration files), and fixed-canvas SVG plots. All
// number formatting is locale-independent so outputs are byte-stable.

#include "dirac/decay.hpp"
#include "dirac/eigensolver.hpp"
#include "dirac/landscape.hpp"
#include "dirac/potential.hpp"
#include "dirac/threshold.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dirac {

/// Shortest decimal that round-trips; always '.', "inf"/"-inf"/"nan" otherwise.
std::string format_number(double v);
/// Fixed number of decimals, locale-independent.
std::string format_fixed(double v, int decimals);
/// Parses what format_number emits; throws ErrorKind::Configuration otherwise.
double parse_number(const std::string& text);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<std::string> row);  // must match the header width
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;  // CRLF line endings
  static std::string quote(const std::string& field);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Ordered sections of ordered key = value pairs. Keys before the first
/// section header belong to the unnamed section "".
class TextDocument {
 public:
  using Entries = std::vector<std::pair<std::string, std::string>>;

  void set(const std::string& section, const std::string& key, const std::string& value);
  void set(const std::string& section, const std::string& key, double value) { set(section, key, format_number(value)); }
  void set(const std::string& section, const std::string& key, int value) { set(section, key, std::to_string(value)); }
  void set(const std::string& section, const std::string& key, bool value) { set(section, key, value ? "true" : "false"); }
  void set(const std::string& section, const std::string& key, const char* value) { set(section, key, std::string(value)); }

  bool has(const std::string& section, const std::string& key) const;
  const std::string& get(const std::string& section, const std::string& key) const;  // Configuration error if absent
  const std::vector<std::pair<std::string, Entries>>& sections() const { return sections_; }

  std::string serialize() const;
  static TextDocument parse(const std::string& text);

  bool operator==(const TextDocument&) const = default;

 private:
  std::vector<std::pair<std::string, Entries>> sections_;
};

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

TextDocument decay_document(const std::string& label, const DecayReport& report);
TextDocument kernel_document(const KernelReport& report);
TextDocument eigen_document(const EigenReport& report);
TextDocument direct_sum_document(const DirectSumReport& report);
TextDocument asymptotic_document(const AsymptoticReport& report);
TextDocument probe_document(const ProbeReport& report);
TextDocument dim_bound_document(const std::vector<DimBoundRecord>& records);
TextDocument sweep_document(const SweepReport& report);

CsvTable sweep_csv(const SweepReport& report);
CsvTable asymptotic_csv(const AsymptoticReport& report);
CsvTable decay_csv(const DecayFit& fit);

/// 800×600 SVG plots; ErrorKind::NoData for empty reports.
std::string decay_plot(const DecayFit& fit, const std::string& title, double reference_slope = -2.0);
std::string sweep_plot(const SweepReport& report);
std::string asymptotic_plot(const AsymptoticReport& report);

}  // namespace dirac
