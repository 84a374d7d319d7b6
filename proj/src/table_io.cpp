// Copyright 2026 The cfgreen Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// CSV / JSON emission for Table. Numbers always go through format_number so
// csv -> parse -> csv reproduces the bytes.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "analysis.hpp"
#include "errors.hpp"

namespace cfgreen {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (const auto& [k, v] : t.metadata) out += "# " + k + ": " + v + "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += (c ? "," : "") + t.columns[c];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_number(row[c]);
    }
    out += '\n';
  }
  return out;
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto sep = line.find(": ");
      if (sep == std::string::npos || sep < 2) throw IoError("csv line " + std::to_string(lineno) + ": bad metadata");
      t.metadata.emplace_back(line.substr(2, sep - 2), line.substr(sep + 2));
      continue;
    }
    std::stringstream ls(line);
    std::string cell;
    if (!have_header) {
      while (std::getline(ls, cell, ',')) t.columns.push_back(cell);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw IoError("csv line " + std::to_string(lineno) + ": non-numeric cell '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != t.columns.size())
      throw IoError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(t.columns.size()) +
                    " cells, got " + std::to_string(row.size()));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw IoError("csv has no header line");
  return t;
}

std::string to_json(const Table& t) {
  nlohmann::json j;
  j["metadata"] = nlohmann::json::array();
  for (const auto& [k, v] : t.metadata) j["metadata"].push_back({k, v});
  j["columns"] = t.columns;
  j["rows"] = t.rows;
  return j.dump(1) + "\n";
}

Table parse_json(const std::string& text) {
  Table t;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& kv : j.at("metadata")) t.metadata.emplace_back(kv.at(0).get<std::string>(), kv.at(1).get<std::string>());
    t.columns = j.at("columns").get<std::vector<std::string>>();
    t.rows = j.at("rows").get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed result json: ") + e.what());
  }
  return t;
}

void write_table(const Table& t, const std::string& path, const std::string& format) {
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << (format == "csv" ? to_csv(t) : to_json(t));
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace cfgreen
