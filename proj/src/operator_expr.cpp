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

#include "pulsevo/operator_expr.hpp"

#include <cctype>
#include <cstdlib>
#include <string>
#include <variant>

#include "pulsevo/errors.hpp"
#include "pulsevo/format.hpp"

namespace pulsevo {

namespace {

constexpr std::string_view kKronSymbol = "\xE2\x8A\x97";  // U+2297

using Value = std::variant<double, ComplexMatrix>;

class Parser {
 public:
  Parser(std::string_view text, const OperatorLookup& lookup) : text_(text), lookup_(lookup) {}

  ComplexMatrix parse() {
    Value v = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(text_.substr(pos_, 1)) + "'");
    if (auto* m = std::get_if<ComplexMatrix>(&v)) return std::move(*m);
    fail("expression evaluates to a scalar, not an operator");
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("operator expression '" + std::string(text_) + "' at offset " +
                         std::to_string(pos_),
                     what);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }

  static Value add(Value a, const Value& b, double sign) {
    if (std::holds_alternative<double>(a) && std::holds_alternative<double>(b)) {
      return std::get<double>(a) + sign * std::get<double>(b);
    }
    if (std::holds_alternative<double>(a) || std::holds_alternative<double>(b)) {
      throw DimensionError("cannot add a scalar and an operator");
    }
    auto& m = std::get<ComplexMatrix>(a);
    const auto& n = std::get<ComplexMatrix>(b);
    if (m.dim() != n.dim()) {
      throw DimensionError("cannot add operators of dimension " + std::to_string(m.dim()) +
                           " and " + std::to_string(n.dim()));
    }
    m.add_scaled(n, sign);
    return a;
  }

  static Value multiply(const Value& a, const Value& b) {
    if (const auto* x = std::get_if<double>(&a)) {
      if (const auto* y = std::get_if<double>(&b)) return *x * *y;
      return std::get<ComplexMatrix>(b) * cplx(*x);
    }
    if (const auto* y = std::get_if<double>(&b)) return std::get<ComplexMatrix>(a) * cplx(*y);
    return std::get<ComplexMatrix>(a) * std::get<ComplexMatrix>(b);
  }

  Value kron_values(const Value& a, const Value& b) {
    const auto* m = std::get_if<ComplexMatrix>(&a);
    const auto* n = std::get_if<ComplexMatrix>(&b);
    if (!m || !n) fail("Kronecker product needs two operators");
    return kron(*m, *n);
  }

  Value sum() {
    Value v = product();
    for (;;) {
      if (accept("+")) {
        v = add(std::move(v), product(), 1.0);
      } else if (accept("-")) {
        v = add(std::move(v), product(), -1.0);
      } else {
        return v;
      }
    }
  }

  Value product() {
    Value v = kron_chain();
    while (accept("*")) v = multiply(v, kron_chain());
    return v;
  }

  Value kron_chain() {
    Value v = unary();
    while (accept(kKronSymbol)) v = kron_values(v, unary());
    return v;
  }

  Value unary() {
    if (accept("-")) return multiply(-1.0, unary());
    return primary();
  }

  Value primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Value v = sum();
      expect(")");
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::string id = identifier();
      if (id == "kron" && accept("(")) {
        Value a = sum();
        expect(",");
        Value b = sum();
        expect(")");
        return kron_values(a, b);
      }
      if (auto m = builtin_operator(id)) return std::move(*m);
      if (lookup_) {
        if (auto m = lookup_(id)) return std::move(*m);
      }
      throw NameError(id, "unknown operator '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  double number() {
    const std::size_t begin = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      const bool exponent_sign =
          (c == '+' || c == '-') && pos_ > begin && (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E');
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == 'e' || c == 'E' ||
          exponent_sign) {
        ++pos_;
      } else {
        break;
      }
    }
    auto v = parse_double(text_.substr(begin, pos_ - begin));
    if (!v) {
      pos_ = begin;
      fail("malformed number");
    }
    return *v;
  }

  std::string identifier() {
    const std::size_t begin = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(begin, pos_ - begin));
  }

  std::string_view text_;
  const OperatorLookup& lookup_;
  std::size_t pos_ = 0;
};

}  // namespace

std::optional<ComplexMatrix> builtin_operator(std::string_view name) {
  if (name == "sx") return pauli::x();
  if (name == "sy") return pauli::y();
  if (name == "sz") return pauli::z();
  if (name == "sm") return pauli::minus();
  if (name == "sp") return pauli::plus();
  if (name == "id") return ComplexMatrix::identity(2);
  return std::nullopt;
}

ComplexMatrix evaluate_operator_expression(std::string_view text, const OperatorLookup& lookup) {
  return Parser(text, lookup).parse();
}

}  // namespace pulsevo
