#pragma once

// Deterministic artifact writers. Every double is printed with 17 significant
// digits so that files round-trip exactly and repeated runs are byte-identical.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace qmem::cli {

using Report = nlohmann::ordered_json;

std::string format_double(double x);

/// JSON text with keys in insertion order, two-space indent and %.17g numbers.
std::string to_json_text(const Report& report);

/// Flat "key,value" CSV; nested objects become dotted keys, arrays get
/// bracketed indices.
std::string to_csv_text(const Report& report);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add(const std::vector<double>& row);
  std::string text() const;

 private:
  std::vector<std::string> header_;
  std::string body_;
};

/// Writes `content` to dir/name, creating dir. Throws IoError.
void write_file(const std::filesystem::path& dir, const std::string& name,
                const std::string& content);

}  // namespace qmem::cli
