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

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pulsevo/evolver.hpp"

namespace pulsevo {

std::string_view version();

/// Writes an evolution result as CSV.
///
/// Leading '#' lines carry metadata (engine, segment count, wall-clock
/// seconds, tool version, ...). The header row starts with `time_s`, then:
///   kets              psi_<i>_re, psi_<i>_im
///   density matrices  rho_<i>_<j>_re, rho_<i>_<j>_im (row-major)
///   expectations      <label> for Hermitian operators, otherwise
///                     <label>_re, <label>_im
/// Numbers use the shortest round-trip decimal form.
void write_result_csv(std::ostream& os, const EvolveSpec& spec, const EvolveResult& result,
                      const std::vector<std::string>& e_op_labels = {});

/// A CSV file with '#' comment lines split off.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws ParseError if absent.
  std::size_t column(std::string_view name) const;
  /// Numeric cell; throws ParseError if it does not parse.
  double number(std::size_t row, std::size_t col) const;
};

/// RFC 4180 subset: quoted fields with doubled quotes, no embedded newlines.
CsvTable read_csv(std::istream& is);
std::string csv_escape(std::string_view field);

}  // namespace pulsevo
