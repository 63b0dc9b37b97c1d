#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "scenario.hpp"

namespace qmem::cli {

std::string format_double(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  if (x == 0.0) return "0";  // folds -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void emit_json(const Report& v, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(2 * depth + 2), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case Report::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Report(it.key()).dump() + ": ";
        emit_json(it.value(), depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Report::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += ", ";
        first = false;
        emit_json(e, depth + 1, out);
      }
      out += "]";
      return;
    }
    case Report::value_t::number_float: {
      const double x = v.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

void emit_csv(const Report& v, const std::string& key, std::string& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      emit_csv(it.value(), key.empty() ? it.key() : key + "." + it.key(), out);
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) emit_csv(v[i], key + "[" + std::to_string(i) + "]", out);
  } else if (v.is_number_float()) {
    out += key + "," + format_double(v.get<double>()) + "\n";
  } else if (v.is_string()) {
    out += key + "," + v.get<std::string>() + "\n";
  } else {
    out += key + "," + v.dump() + "\n";
  }
}

}  // namespace

std::string to_json_text(const Report& report) {
  std::string out;
  emit_json(report, 0, out);
  return out + "\n";
}

std::string to_csv_text(const Report& report) {
  std::string out = "key,value\n";
  emit_csv(report, "", out);
  return out;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add(const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_double(row[i]);
  }
  body_ += '\n';
}

std::string CsvTable::text() const {
  std::string head;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) head += ',';
    head += header_[i];
  }
  return head + "\n" + body_;
}

void write_file(const std::filesystem::path& dir, const std::string& name,
                const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw IoError("cannot write " + path.string());
}

}  // namespace qmem::cli
