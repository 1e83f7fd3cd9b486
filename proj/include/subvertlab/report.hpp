// Copyright 2026 The subvertlab Authors
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

#ifndef SUBVERTLAB_REPORT_HPP_
#define SUBVERTLAB_REPORT_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "subvertlab/errors.hpp"
#include "subvertlab/games.hpp"
#include "subvertlab/prf.hpp"

namespace subvertlab {

inline constexpr const char* kSchemaVersion = "subvertlab/1";

// First 16 hex digits of SHA-256 over the canonical JSON dump.
inline std::string config_hash(const json& config) {
  std::string s = config.dump();
  Digest d = HmacSha256::sha256(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
  return digest_bits(d).to_hex().substr(0, 16);
}

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {"schema", "game",  "trials", "success_count", "p_hat",
                                                "normalized_advantage", "ci_lo", "ci_hi", "seed", "config_hash"};
  return cols;
}

inline std::string csv_header() {
  std::string out;
  for (std::size_t i = 0; i < csv_columns().size(); ++i) out += (i ? "," : "") + csv_columns()[i];
  return out;
}

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline json report_line(const GameReport& r, const json& run_config) {
  json j = r.to_json();
  j["schema"] = kSchemaVersion;
  j["config_hash"] = config_hash(run_config);
  j["run_config"] = run_config;
  return j;
}

inline std::string csv_row(const GameReport& r, const json& run_config) {
  std::ostringstream os;
  os << kSchemaVersion << ',' << r.game << ',' << r.trials << ',' << r.success_count << ',' << fmt_double(r.p_hat)
     << ',' << (r.normalized_advantage ? fmt_double(*r.normalized_advantage) : "") << ',' << fmt_double(r.ci95.lo)
     << ',' << fmt_double(r.ci95.hi) << ',' << r.seed << ',' << config_hash(run_config);
  return os.str();
}

// Report files for one run: <prefix>.jsonl and <prefix>.csv hold only
// deterministic content; the wall-clock timestamp goes to <prefix>.meta.json.
struct ReportWriter {
  std::string prefix;
  json run_config;
  std::vector<json> lines;
  std::vector<std::string> rows;

  void add(const GameReport& r) {
    lines.push_back(report_line(r, run_config));
    rows.push_back(csv_row(r, run_config));
  }

  void add_json(json j) {
    j["schema"] = kSchemaVersion;
    j["config_hash"] = config_hash(run_config);
    lines.push_back(std::move(j));
  }

  void write(const std::string& timestamp) const {
    std::ofstream jl(prefix + ".jsonl");
    for (const auto& l : lines) jl << l.dump() << '\n';
    std::ofstream csv(prefix + ".csv");
    csv << csv_header() << '\n';
    for (const auto& r : rows) csv << r << '\n';
    std::ofstream meta(prefix + ".meta.json");
    meta << json({{"schema", kSchemaVersion}, {"timestamp", timestamp}, {"config_hash", config_hash(run_config)}})
                .dump(2)
         << '\n';
  }
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Concatenates CSV summaries. Every row must carry the current schema
// version; the first offending file is named in the error.
inline std::string report_merge(const std::vector<std::string>& paths) {
  require(!paths.empty(), "report merge needs at least one file");
  std::string out = csv_header() + "\n";
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open report file: " + path);
    std::string line;
    if (!std::getline(in, line) || line != csv_header()) throw SchemaMismatch("schema mismatch in " + path + ": header");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto cells = split_csv_line(line);
      if (cells.size() != csv_columns().size() || cells[0] != kSchemaVersion) {
        throw SchemaMismatch("schema mismatch in " + path + ": row has schema '" + (cells.empty() ? "" : cells[0]) +
                             "', expected '" + kSchemaVersion + "'");
      }
      out += line + "\n";
    }
  }
  return out;
}

}  // namespace subvertlab

#endif  // SUBVERTLAB_REPORT_HPP_
