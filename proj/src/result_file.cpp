// Copyright 2026 The Pulsevo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pulsevo/result_file.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include "pulsevo/errors.hpp"
#include "pulsevo/format.hpp"

#ifndef PULSEVO_VERSION
#define PULSEVO_VERSION "0.0.0"
#endif

namespace pulsevo {

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(line_no), "unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

}  // namespace

std::string_view version() { return PULSEVO_VERSION; }

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_result_csv(std::ostream& os, const EvolveSpec& spec, const EvolveResult& result,
                      const std::vector<std::string>& e_op_labels) {
  const EvolveMetadata& m = result.meta;
  os << "# engine: " << to_string(m.engine) << '\n'
     << "# segments: " << m.segment_count << '\n'
     << "# wall_clock_s: " << format_double(m.wall_seconds) << '\n'
     << "# rhs_evaluations: " << m.integration.rhs_evaluations << '\n'
     << "# pulse_term_evaluations: " << m.pulse_term_evaluations << '\n'
     << "# pulses_outside_window: " << m.pulses_outside_window << '\n'
     << "# version: " << version() << '\n';

  const std::size_t dim = spec.sequence.dim();
  os << "time_s";
  std::vector<bool> hermitian;
  if (result.has_expectations()) {
    for (std::size_t j = 0; j < spec.e_ops.size(); ++j) {
      const std::string label = j < e_op_labels.size() ? e_op_labels[j] : "E" + std::to_string(j);
      hermitian.push_back(spec.e_ops[j].is_hermitian());
      if (hermitian.back()) {
        os << ',' << csv_escape(label);
      } else {
        os << ',' << csv_escape(label + "_re") << ',' << csv_escape(label + "_im");
      }
    }
  } else if (!result.states.empty() && result.states.front().is_ket()) {
    for (std::size_t i = 0; i < dim; ++i) os << ",psi_" << i << "_re,psi_" << i << "_im";
  } else {
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) {
        os << ",rho_" << i << '_' << j << "_re,rho_" << i << '_' << j << "_im";
      }
    }
  }
  os << '\n';

  for (std::size_t k = 0; k < result.times.size(); ++k) {
    os << format_double(result.times[k]);
    if (result.has_expectations()) {
      for (std::size_t j = 0; j < result.expectations.size(); ++j) {
        const cplx v = result.expectations[j][k];
        os << ',' << format_double(v.real());
        if (!hermitian[j]) os << ',' << format_double(v.imag());
      }
    } else {
      const QuantumState& s = result.states[k];
      auto put = [&os](cplx z) { os << ',' << format_double(z.real()) << ',' << format_double(z.imag()); };
      if (s.is_ket()) {
        for (const cplx& z : s.amplitudes()) put(z);
      } else {
        for (std::size_t i = 0; i < dim; ++i) {
          for (std::size_t j = 0; j < dim; ++j) put(s.matrix()(i, j));
        }
      }
    }
    os << '\n';
  }
}

std::size_t CsvTable::column(std::string_view name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ParseError("header", "missing column '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const auto& r = rows.at(row);
  if (col >= r.size()) throw ParseError("row " + std::to_string(row + 1), "missing field");
  auto v = parse_double(r[col]);
  if (!v) {
    throw ParseError("row " + std::to_string(row + 1) + ", column " + header.at(col),
                     "not a number: '" + r[col] + "'");
  }
  return *v;
}

CsvTable read_csv(std::istream& is) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      t.comments.push_back(line);
      continue;
    }
    auto fields = split_csv_line(line, line_no);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != t.header.size()) {
        throw ParseError("line " + std::to_string(line_no),
                         "expected " + std::to_string(t.header.size()) + " fields, got " +
                             std::to_string(fields.size()));
      }
      t.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw ParseError("", "CSV has no header row");
  return t;
}

}  // namespace pulsevo
