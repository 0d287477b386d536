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

#include "pulsevo/sequence_file.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>

#include "pulsevo/errors.hpp"
#include "pulsevo/operator_expr.hpp"

namespace pulsevo {

namespace {

using json = nlohmann::json;

std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

double number_at(const json& j, const std::string& field) {
  if (!j.is_number()) throw ValidationError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ValidationError(field, "expected a finite number");
  return v;
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

const json& require(const json& obj, const char* key, const std::string& field) {
  const json* j = find(obj, key);
  if (!j) throw ValidationError(field, "missing required field '" + std::string(key) + "'");
  return *j;
}

cplx complex_at(const json& j, const std::string& field) {
  if (j.is_number()) return number_at(j, field);
  if (j.is_array() && j.size() == 2) {
    return {number_at(j[0], field + "[0]"), number_at(j[1], field + "[1]")};
  }
  throw ValidationError(field, "expected a number or an [re, im] pair");
}

ComplexMatrix matrix_at(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ValidationError(field, "expected a non-empty matrix");
  std::vector<std::vector<cplx>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != j.size()) {
      throw ValidationError(row_field, "matrix must be square");
    }
    std::vector<cplx> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      row.push_back(complex_at(j[i][k], row_field + "[" + std::to_string(k) + "]"));
    }
    rows.push_back(std::move(row));
  }
  return ComplexMatrix::from_rows(rows);
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Resolves operator names and expressions against the document's
/// `operators` section, detecting reference cycles.
class OperatorTable {
 public:
  OperatorTable(const json* section, std::size_t dim) : dim_(dim) {
    if (!section) return;
    if (!section->is_object()) throw ValidationError("operators", "expected an object");
    for (const auto& [name, def] : section->items()) definitions_.emplace(name, &def);
  }

  ComplexMatrix resolve_name(const std::string& name) {
    if (auto it = cache_.find(name); it != cache_.end()) return it->second;
    auto def = definitions_.find(name);
    if (def == definitions_.end()) throw NameError(name, "unknown operator '" + name + "'");
    if (!resolving_.insert(name).second) {
      throw ValidationError("operators." + name, "operator definitions form a cycle through '" + name + "'");
    }
    ComplexMatrix m = evaluate(*def->second, "operators." + name, false);
    resolving_.erase(name);
    cache_.emplace(name, m);
    return m;
  }

  /// An operator-valued field: expression string or explicit matrix.
  ComplexMatrix evaluate(const json& j, const std::string& field, bool check_dim = true) {
    ComplexMatrix m(1);
    if (j.is_string()) {
      OperatorLookup lookup = [this](std::string_view id) -> std::optional<ComplexMatrix> {
        if (!definitions_.count(std::string(id))) return std::nullopt;
        return resolve_name(std::string(id));
      };
      try {
        m = evaluate_operator_expression(j.get<std::string>(), lookup);
      } catch (const DimensionError& e) {
        throw ValidationError(field, e.what());
      } catch (const ParseError& e) {
        throw ParseError(field, e.what());
      }
    } else {
      m = matrix_at(j, field);
    }
    if (check_dim && m.dim() != dim_) {
      throw ValidationError(field, "operator has dimension " + std::to_string(m.dim()) +
                                       ", document dim is " + std::to_string(dim_));
    }
    return m;
  }

 private:
  std::size_t dim_;
  std::map<std::string, const json*> definitions_;
  std::map<std::string, ComplexMatrix> cache_;
  std::set<std::string> resolving_;
};

RecipePtr parse_recipe(const std::string& name, const json& j, OperatorTable& ops) {
  const std::string field = "recipes." + name;
  if (!j.is_object()) throw ValidationError(field, "expected an object");
  ComplexMatrix op = ops.evaluate(require(j, "operator", field), field + ".operator");

  const json& kind_json = require(j, "envelope", field);
  if (!kind_json.is_string()) throw ValidationError(field + ".envelope", "expected a string");
  const auto kind = envelope_kind_from_string(kind_json.get<std::string>());
  if (!kind) {
    throw ValidationError(field + ".envelope", "unknown envelope kind '" + kind_json.get<std::string>() + "'");
  }
  if (*kind == EnvelopeKind::NativeCallback) {
    throw ValidationError(field + ".envelope", "native envelopes cannot be declared in a file");
  }

  std::optional<Envelope> envelope;
  try {
    if (*kind == EnvelopeKind::TabulatedSamples) {
      const json& samples = require(j, "samples", field);
      const std::string sf = field + ".samples";
      std::vector<double> ts, fs;
      const json& tj = require(samples, "t", sf);
      const json& fj = require(samples, "f", sf);
      if (!tj.is_array() || !fj.is_array()) throw ValidationError(sf, "t and f must be arrays");
      for (std::size_t k = 0; k < tj.size(); ++k) ts.push_back(number_at(tj[k], sf + ".t"));
      for (std::size_t k = 0; k < fj.size(); ++k) fs.push_back(number_at(fj[k], sf + ".f"));
      envelope = Envelope::tabulated(std::move(ts), std::move(fs));
    } else {
      envelope = Envelope::builtin(*kind);
    }
  } catch (const ParamError& e) {
    throw ParamError(field + "." + e.field(), e.message());
  }

  std::map<std::string, double> defaults;
  if (const json* d = find(j, "defaults")) {
    if (!d->is_object()) throw ValidationError(field + ".defaults", "expected an object");
    for (const auto& [key, value] : d->items()) {
      defaults[key] = number_at(value, field + ".defaults." + key);
    }
  }
  try {
    return std::make_shared<const PulseRecipe>(name, std::move(op), std::move(*envelope), defaults);
  } catch (const ParamError& e) {
    throw ParamError(field + ".defaults." + e.field(), e.message());
  } catch (const ValidationError& e) {
    throw ValidationError(field + ".operator", e.message());
  }
}

Pulse parse_pulse(const json& j, const std::string& field, const std::map<std::string, RecipePtr>& recipes) {
  if (!j.is_object()) throw ValidationError(field, "expected an object");
  const json& rj = require(j, "recipe", field);
  if (!rj.is_string()) throw ValidationError(field + ".recipe", "expected a recipe name");
  const std::string recipe_name = rj.get<std::string>();
  auto it = recipes.find(recipe_name);
  if (it == recipes.end()) {
    throw NameError(recipe_name, field + ".recipe: unknown recipe '" + recipe_name + "'");
  }

  std::map<std::string, double> params;
  if (const json* p = find(j, "params")) {
    if (!p->is_object()) throw ValidationError(field + ".params", "expected an object");
    for (const auto& [key, value] : p->items()) params[key] = number_at(value, field + ".params." + key);
  }
  const double start = number_at(require(j, "start", field), field + ".start");
  const double duration = number_at(require(j, "duration", field), field + ".duration");
  std::string label;
  if (const json* n = find(j, "name")) {
    if (!n->is_string()) throw ValidationError(field + ".name", "expected a string");
    label = n->get<std::string>();
  }
  try {
    return make_pulse(it->second, params, start, duration, std::move(label));
  } catch (const TimingError& e) {
    throw TimingError(field + "." + e.field(), e.message());
  } catch (const ParamError& e) {
    throw ParamError(field + ".params." + e.field(), e.message());
  }
}

QuantumState parse_initial_state(const json& j, std::size_t dim) {
  const std::string field = "initial_state";
  if (!j.is_object()) throw ValidationError(field, "expected an object with 'ket', 'density' or 'basis'");
  try {
    if (const json* k = find(j, "ket")) {
      if (!k->is_array()) throw ValidationError(field + ".ket", "expected an array");
      StateVector v;
      for (std::size_t i = 0; i < k->size(); ++i) {
        v.push_back(complex_at((*k)[i], field + ".ket[" + std::to_string(i) + "]"));
      }
      if (v.size() != dim) throw ValidationError(field + ".ket", "length must equal dim");
      return QuantumState::ket(std::move(v));
    }
    if (const json* d = find(j, "density")) {
      ComplexMatrix rho = matrix_at(*d, field + ".density");
      if (rho.dim() != dim) throw ValidationError(field + ".density", "dimension must equal dim");
      return QuantumState::density(std::move(rho));
    }
    if (const json* b = find(j, "basis")) {
      if (!b->is_number_unsigned() || b->get<std::size_t>() >= dim) {
        throw ValidationError(field + ".basis", "expected an index below dim");
      }
      return QuantumState::basis(dim, b->get<std::size_t>());
    }
  } catch (const ValidationError& e) {
    if (e.field().rfind(field, 0) == 0) throw;
    throw ValidationError(field, e.message());
  }
  throw ValidationError(field, "expected one of 'ket', 'density', 'basis'");
}

std::vector<double> parse_times(const json& j) {
  std::vector<double> times;
  if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) {
      times.push_back(number_at(j[k], "times[" + std::to_string(k) + "]"));
    }
  } else if (j.is_object()) {
    const double start = number_at(require(j, "start", "times"), "times.start");
    const double stop = number_at(require(j, "stop", "times"), "times.stop");
    const json& nj = require(j, "num", "times");
    if (!nj.is_number_unsigned() || nj.get<std::size_t>() == 0) {
      throw ValidationError("times.num", "expected a positive integer");
    }
    const std::size_t num = nj.get<std::size_t>();
    if (num == 1) return {start};
    for (std::size_t k = 0; k < num; ++k) {
      times.push_back(k + 1 == num ? stop
                                   : start + (stop - start) * static_cast<double>(k) /
                                                 static_cast<double>(num - 1));
    }
  } else {
    throw ValidationError("times", "expected an array or {start, stop, num}");
  }
  return times;
}

OdeOptions parse_ode(const json* j) {
  OdeOptions o;
  if (!j) return o;
  if (!j->is_object()) throw ValidationError("ode", "expected an object");
  if (const json* v = find(*j, "rtol")) o.rtol = number_at(*v, "ode.rtol");
  if (const json* v = find(*j, "atol")) o.atol = number_at(*v, "ode.atol");
  if (const json* v = find(*j, "max_step")) o.max_step = number_at(*v, "ode.max_step");
  if (const json* v = find(*j, "initial_step")) o.initial_step = number_at(*v, "ode.initial_step");
  if (const json* v = find(*j, "max_steps")) {
    if (!v->is_number_unsigned()) throw ValidationError("ode.max_steps", "expected a positive integer");
    o.max_steps = v->get<std::size_t>();
  }
  try {
    o.validate();
  } catch (const ValidationError& e) {
    throw ValidationError("ode." + e.field(), e.message());
  }
  return o;
}

}  // namespace

SequenceDocument parse_sequence_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ParseError(line_column(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_object()) throw ParseError("line 1, column 1", "document must be a JSON object");

  const json& dim_json = require(doc, "dim", "dim");
  if (!dim_json.is_number_unsigned() || dim_json.get<std::size_t>() == 0) {
    throw ValidationError("dim", "expected a positive integer");
  }
  const std::size_t dim = dim_json.get<std::size_t>();
  OperatorTable ops(find(doc, "operators"), dim);

  std::map<std::string, RecipePtr> recipes;
  if (const json* r = find(doc, "recipes")) {
    if (!r->is_object()) throw ValidationError("recipes", "expected an object");
    for (const auto& [name, def] : r->items()) recipes.emplace(name, parse_recipe(name, def, ops));
  }

  std::vector<Pulse> pulses;
  if (const json* p = find(doc, "pulses")) {
    if (!p->is_array()) throw ValidationError("pulses", "expected an array");
    for (std::size_t i = 0; i < p->size(); ++i) {
      pulses.push_back(parse_pulse((*p)[i], "pulses[" + std::to_string(i) + "]", recipes));
    }
  }

  std::optional<ComplexMatrix> static_h;
  if (const json* h = find(doc, "static_hamiltonian")) {
    static_h = ops.evaluate(*h, "static_hamiltonian");
  }

  auto operator_list = [&](const char* key, std::vector<std::string>* labels) {
    std::vector<ComplexMatrix> out;
    const json* list = find(doc, key);
    if (!list) return out;
    if (!list->is_array()) throw ValidationError(key, "expected an array");
    for (std::size_t k = 0; k < list->size(); ++k) {
      const std::string field = std::string(key) + "[" + std::to_string(k) + "]";
      const json& entry = (*list)[k];
      std::string label = entry.is_string() ? entry.get<std::string>() : "E" + std::to_string(k);
      if (entry.is_object()) {
        out.push_back(ops.evaluate(require(entry, "operator", field), field + ".operator"));
        if (const json* l = find(entry, "label")) {
          if (!l->is_string()) throw ValidationError(field + ".label", "expected a string");
          label = l->get<std::string>();
        }
      } else {
        out.push_back(ops.evaluate(entry, field));
      }
      if (labels) labels->push_back(std::move(label));
    }
    return out;
  };

  SequenceDocument result{
      EvolveSpec{
          [&] {
            try {
              return PulseSequence(std::move(pulses), std::move(static_h));
            } catch (const DimensionError& e) {
              throw ValidationError("pulses", e.what());
            }
          }(),
          parse_initial_state(require(doc, "initial_state", "initial_state"), dim),
          parse_times(require(doc, "times", "times")),
          {},
          {},
          parse_ode(find(doc, "ode")),
          Engine::Segmented,
      },
      {},
  };
  EvolveSpec& spec = result.spec;
  spec.collapse_ops = operator_list("collapse_ops", nullptr);
  spec.e_ops = operator_list("e_ops", &result.e_op_labels);

  if (const json* e = find(doc, "engine")) {
    const auto engine = e->is_string() ? engine_from_string(e->get<std::string>()) : std::nullopt;
    if (!engine) throw ValidationError("engine", "expected \"segmented\" or \"naive\"");
    spec.engine = *engine;
  }
  spec.validate();
  return result;
}

EvolveSpec parse_sequence_file(std::string_view text) { return parse_sequence_document(text).spec; }

std::string emit_sequence_file(const EvolveSpec& spec, const std::vector<std::string>& e_op_labels) {
  json doc;
  doc["dim"] = spec.sequence.dim();

  json recipes = json::object();
  std::map<std::string, const PulseRecipe*> seen;
  for (const Pulse& p : spec.sequence.pulses()) {
    const PulseRecipe& r = p.recipe();
    if (auto it = seen.find(r.name()); it != seen.end()) {
      if (!(*it->second == r)) {
        throw ValidationError("recipes." + r.name(), "two different recipes share this name");
      }
      continue;
    }
    if (r.envelope().kind() == EnvelopeKind::NativeCallback) {
      throw ValidationError("recipes." + r.name(), "native envelopes cannot be written to a file");
    }
    seen.emplace(r.name(), &r);
    json rj;
    rj["operator"] = matrix_to_json(r.op());
    rj["envelope"] = std::string(to_string(r.envelope().kind()));
    if (!r.recipe_defaults().empty()) rj["defaults"] = r.recipe_defaults();
    if (r.envelope().kind() == EnvelopeKind::TabulatedSamples) {
      rj["samples"] = {{"t", r.envelope().sample_times()}, {"f", r.envelope().sample_values()}};
    }
    recipes[r.name()] = std::move(rj);
  }
  doc["recipes"] = std::move(recipes);

  json pulses = json::array();
  for (const Pulse& p : spec.sequence.pulses()) {
    json pj;
    if (!p.label().empty()) pj["name"] = p.label();
    pj["recipe"] = p.recipe().name();
    pj["params"] = p.named_params();
    pj["start"] = p.start();
    pj["duration"] = p.duration();
    pulses.push_back(std::move(pj));
  }
  doc["pulses"] = std::move(pulses);

  if (spec.sequence.static_hamiltonian()) {
    doc["static_hamiltonian"] = matrix_to_json(*spec.sequence.static_hamiltonian());
  }
  if (spec.initial.is_ket()) {
    json ket = json::array();
    for (const cplx& z : spec.initial.amplitudes()) ket.push_back(complex_to_json(z));
    doc["initial_state"] = {{"ket", std::move(ket)}};
  } else {
    doc["initial_state"] = {{"density", matrix_to_json(spec.initial.matrix())}};
  }
  doc["times"] = spec.times;

  json collapse = json::array();
  for (const auto& c : spec.collapse_ops) collapse.push_back(matrix_to_json(c));
  doc["collapse_ops"] = std::move(collapse);
  json e_ops = json::array();
  for (std::size_t k = 0; k < spec.e_ops.size(); ++k) {
    if (k < e_op_labels.size()) {
      e_ops.push_back({{"label", e_op_labels[k]}, {"operator", matrix_to_json(spec.e_ops[k])}});
    } else {
      e_ops.push_back(matrix_to_json(spec.e_ops[k]));
    }
  }
  doc["e_ops"] = std::move(e_ops);

  json ode;
  ode["rtol"] = spec.ode.rtol;
  ode["atol"] = spec.ode.atol;
  if (spec.ode.max_step) ode["max_step"] = *spec.ode.max_step;
  if (spec.ode.initial_step) ode["initial_step"] = *spec.ode.initial_step;
  ode["max_steps"] = spec.ode.max_steps;
  doc["ode"] = std::move(ode);
  doc["engine"] = std::string(to_string(spec.engine));
  return doc.dump(2) + "\n";
}

}  // namespace pulsevo
