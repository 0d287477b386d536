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

#include <string>
#include <string_view>
#include <vector>

#include "pulsevo/evolver.hpp"

namespace pulsevo {

/// A parsed sequence file: the evolution spec plus display labels.
struct SequenceDocument {
  EvolveSpec spec;
  /// One label per e_op, used as CSV column names.
  std::vector<std::string> e_op_labels;
};

/// Parses a JSON sequence file.
///
/// Top-level keys: dim, operators, recipes, pulses, static_hamiltonian,
/// initial_state, times, collapse_ops, e_ops, ode, engine. Operators are
/// either expressions (see evaluate_operator_expression) or nested arrays of
/// [re, im] pairs (plain numbers are accepted as real entries). Missing
/// `engine` means segmented; missing `ode` fields take integrator defaults.
///
/// Throws ParseError (with line and column) for malformed JSON, NameError
/// for unresolved operator/recipe names and ValidationError (or a subclass)
/// naming the offending field, e.g. "pulses[0].duration".
SequenceDocument parse_sequence_document(std::string_view text);
EvolveSpec parse_sequence_file(std::string_view text);

/// Canonical JSON form of a spec: every matrix written out explicitly and
/// every number in shortest round-trip form, so that
/// parse_sequence_file(emit_sequence_file(s)) == s. Throws ValidationError
/// for specs that cannot be expressed in a file (native envelopes, two
/// different recipes sharing a name).
std::string emit_sequence_file(const EvolveSpec& spec, const std::vector<std::string>& e_op_labels = {});

}  // namespace pulsevo
