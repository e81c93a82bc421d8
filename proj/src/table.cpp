#include "ringlat/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ringlat {

namespace {
constexpr const char* kArtifactVersion = "1.0.0";
}

void Metadata::add(const std::string& key, double value) { entries.emplace_back(key, format_value(value)); }
void Metadata::add(const std::string& key, int value) { entries.emplace_back(key, std::to_string(value)); }

Metadata base_metadata(const std::string& command) {
  Metadata m;
  m.add("artifact_version", std::string(kArtifactVersion));
  m.add("command", command);
  m.add("units", std::string("hbar = 1"));
  m.add("energy_frame", std::string("rotating frame"));
  m.add("momentum_label", std::string("lattice momentum q; LF observable hbar*q/a"));
  return m;
}

void Table::add_row(std::initializer_list<double> values) { rows.emplace_back(values); }
void Table::add_row(const std::vector<double>& values) { rows.push_back(values); }

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_table(const Metadata& meta, const Table& table, TableFormat format) {
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size())
      throw std::invalid_argument("render_table: row width does not match schema");

  std::ostringstream os;
  if (format == TableFormat::Csv) {
    for (const auto& [k, v] : meta.entries) os << "# " << k << ": " << v << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
      os << (c ? "," : "") << table.columns[c];
    os << "\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_value(row[c]);
      os << "\n";
    }
  } else {
    os << "{\n  \"metadata\": {";
    for (std::size_t i = 0; i < meta.entries.size(); ++i)
      os << (i ? ", " : "") << "\"" << json_escape(meta.entries[i].first) << "\": \""
         << json_escape(meta.entries[i].second) << "\"";
    os << "},\n  \"records\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      os << (r ? ",\n    " : "\n    ") << "{";
      for (std::size_t c = 0; c < table.columns.size(); ++c)
        os << (c ? ", " : "") << "\"" << json_escape(table.columns[c])
           << "\": " << format_value(table.rows[r][c]);
      os << "}";
    }
    os << "\n  ]\n}\n";
  }
  return os.str();
}

void emit_table(const std::string& path, const Metadata& meta, const Table& table,
                TableFormat format) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("emit_table: cannot open " + path + " for writing");
  f << render_table(meta, table, format);
  if (!f) throw std::ios_base::failure("emit_table: write failed for " + path);
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream is(text);
  std::string line;
  bool headerSeen = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string field;
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!headerSeen) {
      t.columns = fields;
      headerSeen = true;
    } else {
      std::vector<double> row;
      for (const auto& f : fields) row.push_back(std::stod(f));
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

}  // namespace ringlat
