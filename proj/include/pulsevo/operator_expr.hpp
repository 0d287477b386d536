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

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "pulsevo/linalg.hpp"

namespace pulsevo {

/// Resolves a non-builtin identifier to a matrix, or nullopt if unknown.
using OperatorLookup = std::function<std::optional<ComplexMatrix>(std::string_view name)>;

/// Two-level builtin by name: sx, sy, sz, sm, sp, id.
std::optional<ComplexMatrix> builtin_operator(std::string_view name);

/// Evaluates an operator expression.
///
///   sum     := product (('+' | '-') product)*
///   product := kron ('*' kron)*          scalar multiple or matrix product
///   kron    := unary ('⊗' unary)*        Kronecker product
///   unary   := '-' unary | primary
///   primary := number | name | 'kron(' sum ',' sum ')' | '(' sum ')'
///
/// Names are looked up among the builtins first, then through `lookup`.
/// Throws ParseError on malformed text, NameError for unknown names and
/// DimensionError for mismatched operands. A bare scalar result is an error.
ComplexMatrix evaluate_operator_expression(std::string_view text, const OperatorLookup& lookup = {});

}  // namespace pulsevo
