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

#include "pulsevo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pulsevo/bench.hpp"
#include "pulsevo/errors.hpp"
#include "pulsevo/format.hpp"
#include "pulsevo/result_file.hpp"
#include "pulsevo/segmentation.hpp"
#include "pulsevo/sequence_file.hpp"

namespace pulsevo {

namespace {

/// Raised for unreadable inputs and unwritable outputs.
class IoError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

std::string slopes_path_for(const std::string& raw) {
  const std::string suffix = ".csv";
  if (raw.size() > suffix.size() && raw.compare(raw.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return raw.substr(0, raw.size() - suffix.size()) + "_slopes.csv";
  }
  return raw + "_slopes.csv";
}

struct Flags {
  std::string input;
  std::string output;
  std::string slopes_output;
  std::string engine;
  std::optional<double> rtol;
  std::optional<double> atol;
  std::vector<std::size_t> n_values;
  std::vector<double> tau_values;
  std::size_t repeats = 20;
  std::size_t dim = 2;
  std::uint64_t seed = 0;
  bool parallel_cells = false;
};

std::optional<Engine> engine_flag(const Flags& f) {
  if (f.engine.empty()) return std::nullopt;
  return engine_from_string(f.engine);
}

void apply_ode_overrides(const Flags& f, OdeOptions& ode) {
  if (f.rtol) ode.rtol = *f.rtol;
  if (f.atol) ode.atol = *f.atol;
  ode.validate();
}

int cmd_run(const Flags& f, std::ostream& out) {
  SequenceDocument doc = parse_sequence_document(read_file(f.input));
  if (auto e = engine_flag(f)) doc.spec.engine = *e;
  apply_ode_overrides(f, doc.spec.ode);

  const EvolveResult result = evolve(doc.spec);
  std::ostringstream csv;
  write_result_csv(csv, doc.spec, result, doc.e_op_labels);
  write_file(f.output, csv.str());

  out << to_string(result.meta.engine) << ": " << result.times.size() << " times, "
      << result.meta.segment_count << " segments, " << result.meta.integration.rhs_evaluations
      << " rhs evaluations, " << format_double(result.meta.wall_seconds) << " s wall-clock -> "
      << f.output << '\n';
  if (result.meta.pulses_outside_window > 0) {
    out << "warning: " << result.meta.pulses_outside_window
        << " pulse(s) lie outside the evolution window and were ignored\n";
  }
  return kExitOk;
}

int cmd_plan(const Flags& f, std::ostream& out) {
  const EvolveSpec spec = parse_sequence_file(read_file(f.input));
  if (spec.times.size() < 2) throw TimingError("times", "a plan needs at least two times");
  const SegmentPlan plan = segmentize(spec.sequence, spec.times.front(), spec.times.back());
  const std::string text = format_plan(spec.sequence, plan);
  if (f.output.empty()) {
    out << text;
  } else {
    write_file(f.output, text);
    out << text.substr(0, text.find('\n') + 1);
  }
  return kExitOk;
}

int cmd_bench(const Flags& f, std::ostream& out) {
  BenchConfig config;
  if (!f.n_values.empty()) config.n_values = f.n_values;
  if (!f.tau_values.empty()) config.tau_values = f.tau_values;
  config.repeats = f.repeats;
  config.dim = f.dim;
  config.seed = f.seed;
  config.parallel_cells = f.parallel_cells;
  if (auto e = engine_flag(f)) config.engines = {*e};
  apply_ode_overrides(f, config.ode);
  config.validate();

  const std::string slopes_path = f.slopes_output.empty() ? slopes_path_for(f.output) : f.slopes_output;
  const auto cells = run_bench(config, [&out](const BenchCell& c) {
    out << to_string(c.engine) << " n=" << c.n << " tau=" << format_double(c.tau) << ": ";
    if (c.ok()) {
      out << format_double(c.mean_s) << " s (sd " << format_double(c.std_s) << ")\n";
    } else {
      out << "skipped (" << c.status << ")\n";
    }
    out.flush();
  });

  std::ostringstream raw;
  write_bench_csv(raw, cells);
  write_file(f.output, raw.str());
  const auto slopes = fit_slopes(cells);
  std::ostringstream slopes_csv;
  write_slopes_csv(slopes_csv, slopes);
  write_file(slopes_path, slopes_csv.str());
  for (const SlopeFit& s : slopes) {
    out << "slope " << to_string(s.engine) << " n=" << s.n << ": " << format_double(s.slope) << " +- "
        << format_double(s.slope_stderr) << " s/s\n";
  }

  if (std::none_of(cells.begin(), cells.end(), [](const BenchCell& c) { return c.ok(); })) {
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_fit(const Flags& f, std::ostream& out) {
  std::istringstream in(read_file(f.input));
  const auto cells = read_bench_csv(in);
  const auto slopes = fit_slopes(cells);
  std::ostringstream csv;
  write_slopes_csv(csv, slopes);
  if (f.output.empty()) {
    out << csv.str();
  } else {
    write_file(f.output, csv.str());
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulse-sequence time evolution with segment-wise integration", "pulsevo"};
  app.require_subcommand(1);
  Flags f;

  const std::vector<std::string> engines{"segmented", "naive"};
  auto add_ode = [&](CLI::App* cmd) {
    cmd->add_option("--rtol", f.rtol, "Relative integrator tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--atol", f.atol, "Absolute integrator tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--engine", f.engine, "segmented or naive")->check(CLI::IsMember(engines));
  };

  auto* run = app.add_subcommand("run", "Evolve a sequence file and write a result CSV");
  run->add_option("-i,--input", f.input, "Sequence file (JSON)")->required();
  run->add_option("-o,--output", f.output, "Result CSV")->required();
  add_ode(run);

  auto* plan = app.add_subcommand("plan", "Print the segment plan of a sequence file");
  plan->add_option("-i,--input", f.input, "Sequence file (JSON)")->required();
  plan->add_option("-o,--output", f.output, "Write the plan here instead of standard output");

  auto* bench = app.add_subcommand("bench", "Time both engines over a grid of pulse counts and durations");
  bench->add_option("--n", f.n_values, "Pulse counts (default 5 10 20 50)")->delimiter(',');
  bench->add_option("--tau", f.tau_values, "Sequence durations in seconds (default 20 40 60 80 100)")
      ->delimiter(',');
  bench->add_option("--repeats", f.repeats, "Timed runs per cell")->capture_default_str();
  bench->add_option("--dim", f.dim, "Hilbert-space dimension")->capture_default_str();
  bench->add_option("--seed", f.seed, "Seed for the pulse phases")->capture_default_str();
  bench->add_flag("--parallel-cells", f.parallel_cells, "Run cells concurrently (skews timings)");
  bench->add_option("-o,--output", f.output, "Raw timing CSV")->required();
  bench->add_option("--slopes", f.slopes_output, "Slopes CSV (default <output>_slopes.csv)");
  add_ode(bench);

  auto* fit = app.add_subcommand("fit", "Recompute slopes from a raw bench CSV");
  fit->add_option("-i,--input", f.input, "Raw bench CSV")->required();
  fit->add_option("-o,--output", f.output, "Slopes CSV (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(f, out);
    if (*plan) return cmd_plan(f, out);
    if (*bench) return cmd_bench(f, out);
    if (*fit) return cmd_fit(f, out);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IntegrationError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace pulsevo
