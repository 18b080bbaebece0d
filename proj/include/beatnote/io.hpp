// Copyright 2026 The Beatnote Authors
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

#ifndef BEATNOTE_IO_HPP_
#define BEATNOTE_IO_HPP_

// Text serialization: versioned CSV tables, trial batches, scan datasets and
// reference fringes as JSON.

#include <array>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "beatnote/errors.hpp"
#include "beatnote/estimation.hpp"
#include "beatnote/reference_fringes.hpp"
#include "beatnote/trial.hpp"

namespace beatnote {

/// Shortest decimal form that round-trips a double.
inline std::string format_double(double v) {
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// A named numeric table with a schema version, emitted as CSV (with a
/// "# beatnote <name> v<version>" header line) or as JSON.
struct Table {
  std::string name;
  int version = 1;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> r) {
    if (r.size() != columns.size()) throw DomainError("table row width does not match columns");
    rows.push_back(std::move(r));
  }
};

inline void write_csv(std::ostream& os, const Table& t) {
  os << "# beatnote " << t.name << " v" << t.version << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_double(r[i]);
    os << '\n';
  }
}

inline nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json o;
    for (std::size_t i = 0; i < r.size(); ++i) o[t.columns[i]] = r[i];
    rows.push_back(std::move(o));
  }
  return {{"schema", "beatnote " + t.name + " v" + std::to_string(t.version)}, {"rows", std::move(rows)}};
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s, std::size_t line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw ParseError("line " + std::to_string(line) + ": bad number '" + s + "'");
  return v;
}

inline std::uint64_t parse_u64(const std::string& s, std::size_t line) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (!s.empty() && s[0] != '-') v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw ParseError("line " + std::to_string(line) + ": bad count '" + s + "'");
  return v;
}

/// Reads a versioned CSV: checks the header comment and column names and
/// returns the data rows as cells.
inline std::vector<std::vector<std::string>> read_versioned_csv(std::istream& is, const std::string& header,
                                                                const std::vector<std::string>& columns) {
  std::string line;
  if (!std::getline(is, line) || line != header) throw ParseError("expected header '" + header + "'");
  if (!std::getline(is, line) || split_csv(line) != columns) throw ParseError("unexpected column names");
  std::vector<std::vector<std::string>> rows;
  std::size_t n = 2;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != columns.size()) throw ParseError("line " + std::to_string(n) + ": wrong number of cells");
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace detail

// --- trial batches -------------------------------------------------------------

inline const std::vector<std::string>& trial_columns() {
  static const std::vector<std::string> c = {"seed", "tau_s", "t_int_s", "n_aa", "n_ab", "n_ba", "n_bb", "accidentals"};
  return c;
}

inline void write_trials_csv(std::ostream& os, std::span<const TrialRecord> trials) {
  os << "# beatnote trials v1\n";
  const auto& c = trial_columns();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << '\n';
  for (const auto& t : trials) {
    os << t.seed << ',' << format_double(t.tau) << ',' << format_double(t.integration_time);
    for (auto n : t.counts) os << ',' << n;
    os << ',' << t.accidentals << '\n';
  }
}

inline std::vector<TrialRecord> read_trials_csv(std::istream& is) {
  const auto rows = detail::read_versioned_csv(is, "# beatnote trials v1", trial_columns());
  std::vector<TrialRecord> out;
  std::size_t line = 2;
  for (const auto& r : rows) {
    ++line;
    TrialRecord t;
    t.seed = detail::parse_u64(r[0], line);
    t.tau = detail::parse_double(r[1], line);
    t.integration_time = detail::parse_double(r[2], line);
    for (int ch = 0; ch < 4; ++ch) t.counts[ch] = detail::parse_u64(r[3 + ch], line);
    t.accidentals = detail::parse_u64(r[7], line);
    if (t.accidentals > t.total()) throw ParseError("line " + std::to_string(line) + ": accidentals exceed counts");
    out.push_back(t);
  }
  return out;
}

// --- scan datasets -------------------------------------------------------------

inline void write_scan_csv(std::ostream& os, std::span<const FringeSample> data) {
  os << "# beatnote scan v1\ny_m,value,weight\n";
  for (const auto& s : data) {
    os << format_double(s.x) << ',' << format_double(s.value) << ',' << format_double(s.weight) << '\n';
  }
}

inline std::vector<FringeSample> read_scan_csv(std::istream& is) {
  const auto rows = detail::read_versioned_csv(is, "# beatnote scan v1", {"y_m", "value", "weight"});
  std::vector<FringeSample> out;
  std::size_t line = 2;
  for (const auto& r : rows) {
    ++line;
    out.push_back({detail::parse_double(r[0], line), detail::parse_double(r[1], line),
                   detail::parse_double(r[2], line)});
    if (!(out.back().weight > 0.0)) throw ParseError("line " + std::to_string(line) + ": weight must be positive");
  }
  return out;
}

// --- reference fringes ---------------------------------------------------------

inline nlohmann::ordered_json to_json(const ReferenceFringeSet& refs) {
  nlohmann::ordered_json ch = nlohmann::ordered_json::array();
  for (int i = 0; i < 4; ++i) {
    const SinusoidFit& f = refs[i];
    nlohmann::ordered_json cov = nlohmann::ordered_json::array();
    for (int r = 0; r < 4; ++r) {
      cov.push_back({f.covariance(r, 0), f.covariance(r, 1), f.covariance(r, 2), f.covariance(r, 3)});
    }
    ch.push_back({{"channel", kChannelNames[i]},
                  {"a", f.a},
                  {"b", f.b},
                  {"period_m", f.c},
                  {"phase_rad", f.d},
                  {"covariance", cov},
                  {"residual_rms", f.residual_rms},
                  {"iterations", f.iterations}});
  }
  const auto& m = refs.metadata();
  return {{"schema", "beatnote references v1"},
          {"scan", {{"start_m", m.start}, {"stop_m", m.stop}, {"step_m", m.step}, {"t_int_s", m.integration_time}}},
          {"channels", ch}};
}

inline ReferenceFringeSet references_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema") != "beatnote references v1") throw ParseError("unsupported reference schema");
    const auto& s = j.at("scan");
    ScanMetadata meta{s.at("start_m").get<double>(), s.at("stop_m").get<double>(), s.at("step_m").get<double>(),
                      s.at("t_int_s").get<double>()};
    const auto& ch = j.at("channels");
    if (!ch.is_array() || ch.size() != 4) throw ParseError("reference set needs four channels");
    std::array<SinusoidFit, 4> fits;
    for (int i = 0; i < 4; ++i) {
      const auto& c = ch[i];
      if (c.at("channel") != kChannelNames[i]) throw ParseError("reference channels out of order");
      fits[i].a = c.at("a").get<double>();
      fits[i].b = c.at("b").get<double>();
      fits[i].c = c.at("period_m").get<double>();
      fits[i].d = c.at("phase_rad").get<double>();
      fits[i].residual_rms = c.at("residual_rms").get<double>();
      fits[i].iterations = c.at("iterations").get<int>();
      const auto& cov = c.at("covariance");
      if (!cov.is_array() || cov.size() != 4) throw ParseError("covariance must be 4x4");
      for (int r = 0; r < 4; ++r) {
        if (!cov[r].is_array() || cov[r].size() != 4) throw ParseError("covariance must be 4x4");
        for (int k = 0; k < 4; ++k) fits[i].covariance(r, k) = cov[r][k].get<double>();
      }
    }
    ReferenceFringeSet refs(fits, meta);
    refs.validate();
    return refs;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("reference JSON: ") + e.what());
  }
}

}  // namespace beatnote

#endif  // BEATNOTE_IO_HPP_
