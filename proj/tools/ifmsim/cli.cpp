#include "ifmsim/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "ifm/circuits.hpp"
#include "ifm/gate.hpp"
#include "ifm/interferometer.hpp"
#include "ifm/rng.hpp"
#include "ifm/state.hpp"

namespace ifmsim {

namespace {

/// Flag values that parsed but do not make sense; reported as usage errors
/// (exit code 2), unlike runtime failures (exit code 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_escape(table.columns[i]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (const auto* n = std::get_if<long long>(&row[i])) {
        out << *n;
      } else if (const auto* d = std::get_if<double>(&row[i])) {
        out << format_double(*d);
      } else {
        out << csv_escape(std::get<std::string>(row[i]));
      }
    }
    out << '\n';
  }
}

void write_json(std::ostream& out, const Table& table) {
  nlohmann::json array = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json object;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const auto* n = std::get_if<long long>(&row[i])) {
        object[table.columns[i]] = *n;
      } else if (const auto* d = std::get_if<double>(&row[i])) {
        object[table.columns[i]] = *d;
      } else {
        object[table.columns[i]] = std::get<std::string>(row[i]);
      }
    }
    array.push_back(std::move(object));
  }
  out << array.dump(2) << '\n';
}

long long parse_int(const std::string& text) {
  std::size_t used = 0;
  long long value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not an integer: '" + text + "'");
  }
  if (used != text.size()) throw UsageError("not an integer: '" + text + "'");
  return value;
}

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw UsageError("not a number: '" + text + "'");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

/// "start..end[..step]", a single integer, or a comma list of integers.
std::vector<int> parse_n_values(const std::string& spec) {
  std::vector<int> values;
  for (const std::string& piece : split(spec, ',')) {
    const std::size_t dots = piece.find("..");
    if (dots == std::string::npos) {
      values.push_back(static_cast<int>(parse_int(piece)));
      continue;
    }
    const std::string rest = piece.substr(dots + 2);
    const std::size_t dots2 = rest.find("..");
    const long long start = parse_int(piece.substr(0, dots));
    const long long end =
        parse_int(dots2 == std::string::npos ? rest : rest.substr(0, dots2));
    const long long step =
        dots2 == std::string::npos ? 1 : parse_int(rest.substr(dots2 + 2));
    if (step <= 0) throw UsageError("range step must be positive");
    if (end < start) throw UsageError("range end before start");
    for (long long n = start; n <= end; n += step) {
      values.push_back(static_cast<int>(n));
    }
  }
  if (values.empty()) throw UsageError("empty N specification");
  return values;
}

std::vector<double> parse_eta_values(const std::string& spec) {
  std::vector<double> values;
  for (const std::string& piece : split(spec, ',')) {
    const double eta = parse_real(piece);
    if (!(eta >= 0.0 && eta < 1.0)) {
      throw UsageError("eta must lie in [0, 1): " + piece);
    }
    values.push_back(eta);
  }
  return values;
}

int single_n(const RunConfig& config) {
  const auto values = parse_n_values(config.n_splitters);
  if (values.size() != 1) {
    throw UsageError("this command takes a single --n value");
  }
  if (values[0] < 1) throw UsageError("--n must be positive");
  return values[0];
}

double single_eta(const RunConfig& config) {
  const auto values = parse_eta_values(config.eta);
  if (values.size() != 1) {
    throw UsageError("this command takes a single --eta value");
  }
  return values[0];
}

ifm::IfmGateConfig gate_config(const RunConfig& config) {
  if (config.mode == "ideal") return ifm::IfmGateConfig::ideal();
  if (config.mode == "finite") {
    return ifm::IfmGateConfig::finite(single_n(config), single_eta(config));
  }
  throw UsageError("--mode must be ideal or finite");
}

/// Bell pair over arbitrary species (the reference builder in circuits is
/// fixed to positron/electron).
ifm::StateVector pair_reference(ifm::Species first, ifm::Species second,
                                ifm::BellLabel label) {
  ifm::StateVector state =
      ifm::new_state({{first, "q1"}, {second, "q2"}}, {0, 0});
  state.amplitudes.clear();
  const double s = 1.0 / std::numbers::sqrt2;
  switch (label) {
    case ifm::BellLabel::PhiPlus:
      state.amplitudes[0b00] = s;
      state.amplitudes[0b11] = s;
      break;
    case ifm::BellLabel::PhiMinus:
      state.amplitudes[0b00] = s;
      state.amplitudes[0b11] = -s;
      break;
    case ifm::BellLabel::PsiPlus:
      state.amplitudes[0b10] = s;
      state.amplitudes[0b01] = s;
      break;
    case ifm::BellLabel::PsiMinus:
      state.amplitudes[0b10] = s;
      state.amplitudes[0b01] = -s;
      break;
  }
  return state;
}

ifm::StateVector ghz_reference() {
  ifm::StateVector state = ifm::new_state({{ifm::Species::positron, "p1"},
                                           {ifm::Species::electron, "e"},
                                           {ifm::Species::positron, "p2"}},
                                          {0, 0, 0});
  state.amplitudes.clear();
  const double s = 1.0 / std::numbers::sqrt2;
  state.amplitudes[0b000] = s;
  state.amplitudes[0b111] = s;
  return state;
}

Table cmd_sweep(const RunConfig& config) {
  const auto n_values = parse_n_values(config.n_splitters);
  for (int n : n_values) {
    if (n < 2) throw UsageError("sweep requires every N >= 2");
  }
  const auto eta_values = parse_eta_values(config.eta);
  Table table;
  table.columns = {"N", "eta", "p_exact", "p_approx"};
  for (const auto& row : ifm::sweep(n_values, eta_values)) {
    table.rows.push_back({static_cast<long long>(row.n_splitters), row.eta,
                          row.p_exact, row.p_approx});
  }
  return table;
}

Table cmd_required_n(const RunConfig& config) {
  if (config.target_p.empty()) throw UsageError("--target-p is required");
  std::vector<double> targets;
  for (const std::string& piece : split(config.target_p, ',')) {
    const double p = parse_real(piece);
    if (!(p > 0.0 && p < 1.0)) {
      throw UsageError("target_p must lie in (0, 1): " + piece);
    }
    targets.push_back(p);
  }
  const auto eta_values = parse_eta_values(config.eta);
  Table table;
  table.columns = {"target_p", "eta", "n_estimate", "n_exact_search"};
  for (double target : targets) {
    for (double eta : eta_values) {
      const int estimate = ifm::required_splitters(target, eta);
      const long long limit = std::max<long long>(10LL * estimate, 1000);
      long long found = -1;
      for (long long n = 1; n <= limit; ++n) {
        if (ifm::success_probability_exact({static_cast<int>(n), eta}) >=
            target) {
          found = n;
          break;
        }
      }
      if (found < 0) {
        throw std::runtime_error("exact scan exhausted its search limit");
      }
      table.rows.push_back({target, eta, static_cast<long long>(estimate),
                            found});
    }
  }
  return table;
}

Table circuit_summary(const RunConfig& config, const ifm::StateVector& state,
                      const ifm::StateVector& reference) {
  Table table;
  table.columns = {"mode", "n_splitters", "eta", "fidelity", "absorbed_mass"};
  const ifm::IfmGateConfig gate = gate_config(config);
  const long long n =
      gate.mode == ifm::GateMode::ideal ? 0 : gate.n_splitters;
  const double eta = gate.mode == ifm::GateMode::ideal ? 0.0 : gate.eta;
  table.rows.push_back({config.mode, n, eta, ifm::fidelity(state, reference),
                        ifm::absorbed_weight(state)});
  return table;
}

Table cmd_bell(const RunConfig& config) {
  const ifm::StateVector state = ifm::bell_generation(gate_config(config));
  return circuit_summary(config, state,
                         ifm::make_bell(ifm::BellLabel::PhiPlus));
}

Table cmd_ghz(const RunConfig& config) {
  const ifm::StateVector state = ifm::ghz_generation(gate_config(config));
  return circuit_summary(config, state, ghz_reference());
}

Table cmd_photon_bell(const RunConfig& config) {
  const ifm::IfmGateConfig gate = gate_config(config);
  Table table;
  table.columns = {"trial", "label", "fidelity"};
  for (long long trial = 0; trial < config.trials; ++trial) {
    ifm::Rng rng = ifm::trial_rng(config.seed, static_cast<std::uint64_t>(trial));
    const auto [label, state] = ifm::photon_pair_bell(gate, rng);
    const double fid = ifm::fidelity(
        state,
        pair_reference(ifm::Species::photon, ifm::Species::photon, label));
    table.rows.push_back({trial, ifm::to_string(label), fid});
  }
  return table;
}

Table cmd_bell_measure(const RunConfig& config) {
  const ifm::IfmGateConfig gate = gate_config(config);
  Table table;
  table.columns = {"trial", "true_label", "reported_label", "guessed",
                   "correct"};
  for (long long trial = 0; trial < config.trials; ++trial) {
    ifm::Rng rng = ifm::trial_rng(config.seed, static_cast<std::uint64_t>(trial));
    const auto truth =
        static_cast<ifm::BellLabel>(static_cast<int>(ifm::draw01(rng) * 4.0));
    std::optional<int> permutation;
    if (!config.no_permutations) {
      permutation = 1 + static_cast<int>(ifm::draw01(rng) * 6.0);
    }
    ifm::StateVector state = ifm::make_bell(truth);
    const ifm::ProtocolOutcome outcome =
        ifm::bell_measure(state, 0, 1, gate, rng, permutation);
    table.rows.push_back(
        {trial, ifm::to_string(truth),
         outcome.reported ? ifm::to_string(*outcome.reported)
                          : std::string("none"),
         static_cast<long long>(outcome.guessed ? 1 : 0),
         static_cast<long long>(outcome.success ? 1 : 0)});
  }
  return table;
}

Table cmd_cnot(const RunConfig& config) {
  const ifm::IfmGateConfig gate = gate_config(config);
  Table table;
  table.columns = {"trial", "b1", "b2", "success"};
  const double pi = std::numbers::pi;
  for (long long trial = 0; trial < config.trials; ++trial) {
    ifm::Rng rng = ifm::trial_rng(config.seed, static_cast<std::uint64_t>(trial));
    ifm::StateVector input = ifm::new_state(
        {{ifm::Species::positron, "c"}, {ifm::Species::electron, "t"}}, {0, 0});
    for (std::size_t q = 0; q < 2; ++q) {
      ifm::apply_rotation(input, q, ifm::Axis::y, ifm::draw01(rng) * pi);
      ifm::apply_rotation(input, q, ifm::Axis::z, ifm::draw01(rng) * 2.0 * pi);
    }
    const auto [output, outcome] = ifm::gc_cnot(input, gate, rng);
    const auto& bits = outcome.classical_bits;
    const std::string b1 =
        bits.size() >= 2
            ? ifm::to_string(ifm::bell_label_from_bits(bits[0], bits[1]))
            : std::string("none");
    const std::string b2 =
        bits.size() >= 4
            ? ifm::to_string(ifm::bell_label_from_bits(bits[2], bits[3]))
            : std::string("none");
    table.rows.push_back(
        {trial, b1, b2, static_cast<long long>(outcome.success ? 1 : 0)});
  }
  return table;
}

Table cmd_truth_table(const RunConfig& config) {
  const ifm::TruthTable rows = ifm::truth_table(gate_config(config));
  Table table;
  table.columns = {"control_in", "target_in", "outcome",
                   "amplitude_re", "amplitude_im", "probability"};
  for (const auto& entry : rows) {
    for (int c = 0; c < 2; ++c) {
      for (int t = 0; t < 2; ++t) {
        const ifm::Complex amp = entry.out[c][t];
        table.rows.push_back({static_cast<long long>(entry.control_in),
                              static_cast<long long>(entry.target_in),
                              "c" + std::to_string(c) + "t" + std::to_string(t),
                              amp.real(), amp.imag(), std::norm(amp)});
      }
    }
    table.rows.push_back({static_cast<long long>(entry.control_in),
                          static_cast<long long>(entry.target_in),
                          std::string("absorbed"), 0.0, 0.0,
                          entry.absorbed_mass});
  }
  return table;
}

void emit(const RunConfig& config, const Table& table, std::ostream& out) {
  const bool json = config.output_format == "json";
  if (config.output_path == "-") {
    json ? write_json(out, table) : write_csv(out, table);
    return;
  }
  std::ofstream file(config.output_path);
  if (!file) {
    throw std::runtime_error("cannot open output file: " + config.output_path);
  }
  json ? write_json(file, table) : write_csv(file, table);
  file.flush();
  if (!file.good()) {
    throw std::runtime_error("failed writing output file: " +
                             config.output_path);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  RunConfig config;
  CLI::App app{"interaction-free dual-rail circuit simulator"};
  app.name("ifmsim");
  app.require_subcommand(1);

  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", config.output_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output", config.output_path,
                    "output file path, - for stdout");
  };
  const auto add_gate = [&](CLI::App* sub) {
    sub->add_option("--mode", config.mode, "gate model: ideal or finite")
        ->check(CLI::IsMember({"ideal", "finite"}));
    sub->add_option("--n", config.n_splitters,
                    "cascade size (finite mode)");
    sub->add_option("--eta", config.eta,
                    "absorber transparency (finite mode)");
  };
  const auto add_trials = [&](CLI::App* sub, long long default_trials) {
    config.trials = default_trials;
    sub->add_option("--trials", config.trials, "number of runs")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "base RNG seed");
  };

  CLI::App* sweep = app.add_subcommand(
      "sweep", "exact and first-order cascade success probabilities");
  sweep->add_option("--n", config.n_splitters,
                    "N values: start..end[..step] or comma list")
      ->required();
  CLI::Option* sweep_eta = sweep->add_option(
      "--eta", config.eta, "comma list of transparencies in [0,1)");
  add_output(sweep);

  CLI::App* required_n = app.add_subcommand(
      "required-n", "first-order cascade-size estimate vs exact scan");
  required_n->add_option("--target-p", config.target_p,
                         "comma list of success probabilities in (0,1)")
      ->required();
  required_n->add_option("--eta", config.eta,
                         "comma list of transparencies in [0,1)");
  add_output(required_n);

  CLI::App* bell = app.add_subcommand("bell", "entangled pair generation");
  add_gate(bell);
  add_output(bell);

  CLI::App* ghz = app.add_subcommand("ghz", "three-particle GHZ generation");
  add_gate(ghz);
  add_output(ghz);

  CLI::App* photon_bell = app.add_subcommand(
      "photon-bell", "atom-mediated photon pair entanglement trials");
  add_gate(photon_bell);
  add_trials(photon_bell, 10000);
  add_output(photon_bell);

  CLI::App* bell_measure = app.add_subcommand(
      "bell-measure", "destructive Bell measurement trials");
  add_gate(bell_measure);
  add_trials(bell_measure, 100000);
  bell_measure->add_flag("--no-permutations", config.no_permutations,
                         "skip the per-trial random basis permutation");
  add_output(bell_measure);

  CLI::App* cnot = app.add_subcommand(
      "cnot", "teleportation-based CNOT trials on random inputs");
  add_gate(cnot);
  add_trials(cnot, 10000);
  add_output(cnot);

  CLI::App* truth = app.add_subcommand(
      "truth-table", "conditional-gate behaviour on basis inputs");
  add_gate(truth);
  add_output(truth);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("ifmsim");
  for (const auto& arg : args) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  if (sweep->parsed() && sweep_eta->count() == 0) {
    config.eta = "0,0.05,0.1,0.2";
  }

  try {
    Table table;
    if (sweep->parsed()) {
      config.command = "sweep";
      table = cmd_sweep(config);
    } else if (required_n->parsed()) {
      config.command = "required-n";
      table = cmd_required_n(config);
    } else if (bell->parsed()) {
      config.command = "bell";
      table = cmd_bell(config);
    } else if (ghz->parsed()) {
      config.command = "ghz";
      table = cmd_ghz(config);
    } else if (photon_bell->parsed()) {
      config.command = "photon-bell";
      table = cmd_photon_bell(config);
    } else if (bell_measure->parsed()) {
      config.command = "bell-measure";
      table = cmd_bell_measure(config);
    } else if (cnot->parsed()) {
      config.command = "cnot";
      table = cmd_cnot(config);
    } else if (truth->parsed()) {
      config.command = "truth-table";
      table = cmd_truth_table(config);
    }
    emit(config, table, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ifmsim
