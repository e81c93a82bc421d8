#pragma once

// Deterministic tabular output.  CSV: '#'-prefixed metadata header block,
// then a header row and '.'-decimal scientific values with 17 significant
// digits (round-trip safe).  JSON: the same metadata plus schema-mirroring
// records.  Byte-stable across runs on identical input.

#include <string>
#include <vector>

namespace ringlat {

enum class TableFormat { Csv, Json };

struct Metadata {
  std::vector<std::pair<std::string, std::string>> entries;
  void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
  void add(const std::string& key, double value);
  void add(const std::string& key, int value);
};

// Standard header every artifact carries.
Metadata base_metadata(const std::string& command);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::initializer_list<double> values);
  void add_row(const std::vector<double>& values);
};

std::string format_value(double v);  // %.16e

std::string render_table(const Metadata& meta, const Table& table, TableFormat format);

// Writes render_table output; throws std::ios_base::failure on I/O errors.
void emit_table(const std::string& path, const Metadata& meta, const Table& table,
                TableFormat format);

// Reads back a CSV produced by emit_table (metadata lines skipped).
Table parse_csv(const std::string& text);

}  // namespace ringlat
