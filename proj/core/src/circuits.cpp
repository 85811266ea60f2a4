#include "ifm/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ifm {

namespace {

constexpr double kTruthTolerance = 1e-9;

/// Generation-circuit wiring: the control particle's logical-0 rail is the
/// one threaded through the cascade, so logical 0 blocks (freezes) the target
/// and logical 1 lets the cascade flip it. Realized by conjugating the
/// Table-style gate with X on the control.
void apply_ifm_active_low(StateVector& state, std::size_t control,
                          std::size_t target, const IfmGateConfig& config) {
  apply_unitary(state, control, pauli_x());
  apply_ifm(state, control, target, config);
  apply_unitary(state, control, pauli_x());
}

std::size_t label_index(BellLabel label) {
  return static_cast<std::size_t>(label);
}

BellLabel label_at(std::size_t index) {
  return static_cast<BellLabel>(index);
}

/// Drops bit position `q` from a configuration key.
std::uint64_t squeeze_bit(std::uint64_t key, std::size_t q) {
  const std::uint64_t low = key & ((std::uint64_t{1} << q) - 1);
  return low | ((key >> (q + 1)) << q);
}

/// The pair's state written in the Bell basis: for each Bell component, the
/// (unnormalized) amplitude map over the remaining register, keyed by
/// configuration keys with the pair's two bits squeezed out.
struct BellDecomposition {
  std::array<std::map<std::uint64_t, Complex>, 4> component;
  std::array<double, 4> weight{};
  double both_on_blocking_paths = 0.0;  ///< squared mass of the (1,1) branch
};

BellDecomposition decompose_bell(const StateVector& state, std::size_t p,
                                 std::size_t e) {
  const std::size_t hi = std::max(p, e);
  const std::size_t lo = std::min(p, e);
  std::array<std::map<std::uint64_t, Complex>, 4> comp;  // indexed 2*pb + eb
  for (const auto& [key, amp] : state.amplitudes) {
    const int pb = static_cast<int>((key >> p) & 1u);
    const int eb = static_cast<int>((key >> e) & 1u);
    const std::uint64_t rest = squeeze_bit(squeeze_bit(key, hi), lo);
    comp[static_cast<std::size_t>(2 * pb + eb)][rest] += amp;
  }
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  BellDecomposition out;
  auto combine = [&](std::size_t bell, std::size_t a, std::size_t b,
                     double sign) {
    auto& dst = out.component[bell];
    for (const auto& [rest, amp] : comp[a]) dst[rest] += inv_sqrt2 * amp;
    for (const auto& [rest, amp] : comp[b]) dst[rest] += sign * inv_sqrt2 * amp;
    double w = 0.0;
    for (const auto& [rest, amp] : dst) w += std::norm(amp);
    out.weight[bell] = w;
  };
  combine(label_index(BellLabel::PhiPlus), 0, 3, +1.0);
  combine(label_index(BellLabel::PhiMinus), 0, 3, -1.0);
  combine(label_index(BellLabel::PsiPlus), 1, 2, +1.0);
  combine(label_index(BellLabel::PsiMinus), 1, 2, -1.0);
  for (const auto& [rest, amp] : comp[3]) {
    out.both_on_blocking_paths += std::norm(amp);
  }
  return out;
}

void erase_pair_descriptors(StateVector& state, std::size_t p, std::size_t e) {
  const std::size_t hi = std::max(p, e);
  const std::size_t lo = std::min(p, e);
  state.qubits.erase(state.qubits.begin() + static_cast<std::ptrdiff_t>(hi));
  state.qubits.erase(state.qubits.begin() + static_cast<std::ptrdiff_t>(lo));
}

/// Ground truth of the pair before the measurement, when resolvable: the pair
/// must carry (nearly) all its weight in a single Bell component.
std::optional<BellLabel> resolve_truth(const BellDecomposition& bell) {
  const double total =
      bell.weight[0] + bell.weight[1] + bell.weight[2] + bell.weight[3];
  if (!(total > 0.0)) return std::nullopt;
  for (std::size_t i = 0; i < 4; ++i) {
    if (bell.weight[i] / total >= 1.0 - kTruthTolerance) return label_at(i);
  }
  return std::nullopt;
}

void validate_pair(const StateVector& state, std::size_t p, std::size_t e) {
  if (p >= state.qubits.size() || e >= state.qubits.size()) {
    throw std::out_of_range("bell_measure: qubit index out of range");
  }
  if (p == e) {
    throw std::invalid_argument("bell_measure: indices must be distinct");
  }
  if (state.qubits[p].species != Species::positron ||
      state.qubits[e].species != Species::electron) {
    throw std::invalid_argument(
        "bell_measure: pair must be (positron, electron)");
  }
}

ProtocolOutcome bell_measure_instrument(StateVector& state, std::size_t p,
                                        std::size_t e, Rng& rng, int k) {
  BellDecomposition bell = decompose_bell(state, p, e);

  std::vector<double> weights(4 + state.absorbed.size());
  for (std::size_t i = 0; i < 4; ++i) weights[i] = bell.weight[i];
  for (std::size_t i = 0; i < state.absorbed.size(); ++i) {
    weights[4 + i] = state.absorbed[i].mass;
  }
  const std::size_t pick = sample_discrete(rng, weights);

  ProtocolOutcome outcome;
  if (pick >= 4) {
    // An earlier gate's absorption fired; the run is over.
    AbsorbedRecord record = state.absorbed[pick - 4];
    outcome.heralds.push_back("absorbed:" + record.event);
    outcome.success = false;
    state.amplitudes.clear();
    record.mass = 1.0;
    state.absorbed = {record};
    erase_pair_descriptors(state, p, e);
    return outcome;
  }

  const BellLabel sampled = label_at(pick);
  outcome.truth = bell_permutation_inverse(k, sampled);

  BellLabel reported_here;
  if (sampled == BellLabel::PsiPlus || sampled == BellLabel::PsiMinus) {
    // b' clicked; the positron measurement separates the signs exactly.
    reported_here = sampled;
    outcome.heralds.push_back("b_prime_click");
  } else {
    // No b' click: the sign is unobservable, so toss a coin — but sample the
    // physical herald (surviving pair at a' vs annihilation flash) at its
    // literal conditional probability.
    const double phi_weight =
        bell.weight[label_index(BellLabel::PhiPlus)] +
        bell.weight[label_index(BellLabel::PhiMinus)];
    reported_here = draw01(rng) < 0.5 ? BellLabel::PhiPlus : BellLabel::PhiMinus;
    const double p_gamma = bell.both_on_blocking_paths / phi_weight;
    outcome.heralds.push_back(draw01(rng) < p_gamma ? "gamma" : "a_prime_click");
    outcome.heralds.push_back("guessed");
    outcome.guessed = true;
  }

  outcome.reported = bell_permutation_inverse(k, reported_here);
  outcome.success = (*outcome.reported == *outcome.truth);
  const auto [x, z] = bell_bits(*outcome.reported);
  outcome.classical_bits = {x, z};

  // Project the rest of the register onto the sampled Bell component and
  // consume the pair.
  const double norm = std::sqrt(bell.weight[pick]);
  std::map<std::uint64_t, Complex> posterior;
  for (const auto& [rest, amp] : bell.component[pick]) {
    if (amp != Complex{0.0, 0.0}) posterior[rest] = amp / norm;
  }
  state.amplitudes = std::move(posterior);
  state.absorbed.clear();
  erase_pair_descriptors(state, p, e);
  return outcome;
}

ProtocolOutcome bell_measure_literal(StateVector& state, std::size_t p,
                                     std::size_t e, const IfmGateConfig& config,
                                     Rng& rng, int k,
                                     std::optional<BellLabel> truth) {
  const std::string gate_event = "ifm:" + std::to_string(state.op_serial);
  apply_ifm(state, p, e, config);

  ProtocolOutcome outcome;
  outcome.truth = truth;

  const MeasurementResult electron = measure(state, e, rng);
  std::optional<BellLabel> reported_here;
  if (electron.kind == MeasurementResult::Kind::absorbed) {
    if (electron.event == gate_event) {
      // Annihilation flash from this gate: Phi-sector evidence.
      outcome.heralds.push_back("gamma");
    } else {
      // An earlier gate's absorption fired; the run is over.
      outcome.heralds.push_back("absorbed:" + electron.event);
      outcome.success = false;
      erase_pair_descriptors(state, p, e);
      return outcome;
    }
  } else if (electron.bit == 0) {
    // Electron at b': Psi sector, resolved exactly by sending the positron
    // through a balanced splitter. Its two output ports separate the Psi
    // signs: port 0 fires for Psi+, port 1 for Psi-.
    outcome.heralds.push_back("b_prime_click");
    apply_unitary(state, p, beam_splitter(std::numbers::pi / 4.0));
    const MeasurementResult positron = measure(state, p, rng);
    reported_here = positron.bit == 0 ? BellLabel::PsiPlus : BellLabel::PsiMinus;
  } else {
    // Electron at a': Phi sector; the positron's own detection follows but
    // carries no sign information.
    outcome.heralds.push_back("a_prime_click");
    measure(state, p, rng);
  }

  if (!reported_here) {
    reported_here =
        draw01(rng) < 0.5 ? BellLabel::PhiPlus : BellLabel::PhiMinus;
    outcome.heralds.push_back("guessed");
    outcome.guessed = true;
  }

  outcome.reported = bell_permutation_inverse(k, *reported_here);
  const auto [x, z] = bell_bits(*outcome.reported);
  outcome.classical_bits = {x, z};
  outcome.success = !truth || *outcome.reported == *truth;
  erase_pair_descriptors(state, p, e);
  if (!state.amplitudes.empty()) {
    // Both pair qubits were measured, so their bits are definite; squeeze
    // them out of the surviving configurations.
    const std::size_t hi = std::max(p, e);
    const std::size_t lo = std::min(p, e);
    std::map<std::uint64_t, Complex> squeezed;
    for (const auto& [key, amp] : state.amplitudes) {
      squeezed[squeeze_bit(squeeze_bit(key, hi), lo)] = amp;
    }
    state.amplitudes = std::move(squeezed);
  }
  return outcome;
}

}  // namespace

std::string to_string(BellLabel label) {
  switch (label) {
    case BellLabel::PhiPlus: return "Phi+";
    case BellLabel::PhiMinus: return "Phi-";
    case BellLabel::PsiPlus: return "Psi+";
    case BellLabel::PsiMinus: return "Psi-";
  }
  return "?";
}

BellLabel parse_bell_label(const std::string& text) {
  if (text == "Phi+") return BellLabel::PhiPlus;
  if (text == "Phi-") return BellLabel::PhiMinus;
  if (text == "Psi+") return BellLabel::PsiPlus;
  if (text == "Psi-") return BellLabel::PsiMinus;
  throw std::invalid_argument("unknown Bell label: " + text);
}

std::pair<int, int> bell_bits(BellLabel label) {
  switch (label) {
    case BellLabel::PhiPlus: return {0, 0};
    case BellLabel::PhiMinus: return {0, 1};
    case BellLabel::PsiPlus: return {1, 0};
    case BellLabel::PsiMinus: return {1, 1};
  }
  return {0, 0};
}

BellLabel bell_label_from_bits(int x, int z) {
  if (x == 0 && z == 0) return BellLabel::PhiPlus;
  if (x == 0 && z == 1) return BellLabel::PhiMinus;
  if (x == 1 && z == 0) return BellLabel::PsiPlus;
  if (x == 1 && z == 1) return BellLabel::PsiMinus;
  throw std::invalid_argument("bell_label_from_bits: bits must be 0 or 1");
}

StateVector make_bell(BellLabel label) {
  StateVector state = new_state(
      {{Species::positron, "p"}, {Species::electron, "e"}}, {0, 0});
  const double s = 1.0 / std::numbers::sqrt2;
  state.amplitudes.clear();
  switch (label) {
    case BellLabel::PhiPlus:
      state.amplitudes[0b00] = s;
      state.amplitudes[0b11] = s;
      break;
    case BellLabel::PhiMinus:
      state.amplitudes[0b00] = s;
      state.amplitudes[0b11] = -s;
      break;
    case BellLabel::PsiPlus:
      // key bit 0 = positron, bit 1 = electron
      state.amplitudes[0b10] = s;
      state.amplitudes[0b01] = s;
      break;
    case BellLabel::PsiMinus:
      state.amplitudes[0b10] = s;   // |0>_p |1>_e
      state.amplitudes[0b01] = -s;  // |1>_p |0>_e
      break;
  }
  return state;
}

StateVector bell_generation(const IfmGateConfig& config) {
  StateVector state = new_state(
      {{Species::positron, "p"}, {Species::electron, "e"}}, {0, 0});
  apply_unitary(state, 0, hadamard());
  apply_ifm_active_low(state, 0, 1, config);
  return state;
}

StateVector ghz_generation(const IfmGateConfig& config) {
  StateVector state = new_state({{Species::positron, "p1"},
                                 {Species::electron, "e"},
                                 {Species::positron, "p2"}},
                                {0, 0, 0});
  apply_unitary(state, 0, hadamard());
  apply_ifm_active_low(state, 0, 1, config);
  apply_ifm_active_low(state, 1, 2, config);
  return state;
}

std::pair<BellLabel, StateVector> photon_pair_bell(const IfmGateConfig& config,
                                                   Rng& rng) {
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    StateVector state = new_state({{Species::atom, "x"},
                                   {Species::photon, "p1"},
                                   {Species::photon, "p2"}},
                                  {0, 0, 0});
    apply_unitary(state, 0, hadamard());
    apply_ifm(state, 0, 1, config);
    apply_ifm(state, 0, 2, config);
    apply_unitary(state, 0, hadamard());
    const MeasurementResult atom = measure(state, 0, rng);
    if (atom.kind != MeasurementResult::Kind::bit) {
      continue;  // a photon was absorbed; discard the heralded-failed run
    }
    remove_qubit(state, 0);
    return {atom.bit == 0 ? BellLabel::PhiPlus : BellLabel::PhiMinus,
            std::move(state)};
  }
  throw std::runtime_error(
      "photon_pair_bell: no coherent run within retry budget");
}

TwoQubitUnitary bell_permutation_operator(int k) {
  const double pi = std::numbers::pi;
  switch (k) {
    case 1: return kron(identity_matrix(), identity_matrix());
    case 2: return kron(rotation_matrix(Axis::y, pi), identity_matrix());
    case 3:
      return kron(rotation_matrix(Axis::y, pi / 2),
                  rotation_matrix(Axis::y, pi / 2));
    case 4:
      return kron(rotation_matrix(Axis::x, pi / 2),
                  rotation_matrix(Axis::x, pi / 2));
    case 5: return matmul(bell_permutation_operator(3), bell_permutation_operator(2));
    case 6: return matmul(bell_permutation_operator(4), bell_permutation_operator(2));
    default:
      throw std::invalid_argument("bell_permutation_operator: k must be 1..6");
  }
}

std::array<BellLabel, 4> bell_permutation_row(int k) {
  using enum BellLabel;
  switch (k) {
    case 1: return {PhiPlus, PhiMinus, PsiPlus, PsiMinus};
    case 2: return {PsiMinus, PsiPlus, PhiMinus, PhiPlus};
    case 3: return {PhiPlus, PsiPlus, PhiMinus, PsiMinus};
    case 4: return {PsiPlus, PhiMinus, PhiPlus, PsiMinus};
    case 5: return {PsiMinus, PhiMinus, PsiPlus, PhiPlus};
    case 6: return {PsiMinus, PhiPlus, PhiMinus, PsiPlus};
    default:
      throw std::invalid_argument("bell_permutation_row: k must be 1..6");
  }
}

BellLabel bell_permutation_inverse(int k, BellLabel label) {
  const auto row = bell_permutation_row(k);
  for (std::size_t i = 0; i < 4; ++i) {
    if (row[i] == label) return label_at(i);
  }
  throw std::logic_error("bell_permutation_inverse: row is not a permutation");
}

ProtocolOutcome bell_measure(StateVector& state, std::size_t positron_index,
                             std::size_t electron_index,
                             const IfmGateConfig& config, Rng& rng,
                             std::optional<int> permutation) {
  validate_pair(state, positron_index, electron_index);
  const int k = permutation.value_or(1);
  if (k < 1 || k > 6) {
    throw std::invalid_argument("bell_measure: permutation must be 1..6");
  }

  // Ground truth in the unpermuted basis, when the pair is (nearly) a pure
  // Bell state; the ideal instrument resolves truth by sampling instead.
  std::optional<BellLabel> literal_truth;
  if (config.mode == GateMode::finite) {
    literal_truth =
        resolve_truth(decompose_bell(state, positron_index, electron_index));
  }

  if (permutation) {
    apply_two_qubit(state, positron_index, electron_index,
                    bell_permutation_operator(k));
  }
  if (config.mode == GateMode::ideal) {
    return bell_measure_instrument(state, positron_index, electron_index, rng,
                                   k);
  }
  return bell_measure_literal(state, positron_index, electron_index, config,
                              rng, k, literal_truth);
}

StateVector chi_preparation(const IfmGateConfig& config) {
  StateVector state = ghz_generation(config);
  apply_unitary(state, 0, hadamard());
  apply_unitary(state, 1, hadamard());
  apply_unitary(state, 2, hadamard());
  extend(state, {Species::electron, "q4"}, 0);
  apply_ifm_active_low(state, 2, 3, config);
  return state;
}

std::pair<StateVector, ProtocolOutcome> gc_cnot(const StateVector& input,
                                                const IfmGateConfig& config,
                                                Rng& rng) {
  if (input.qubits.size() != 2 ||
      input.qubits[0].species != Species::positron ||
      input.qubits[1].species != Species::electron) {
    throw std::invalid_argument(
        "gc_cnot: input must be a (positron, electron) pair");
  }
  if (!input.absorbed.empty()) {
    throw std::invalid_argument("gc_cnot: input must have an empty ledger");
  }
  if (std::abs(coherent_weight(input) - 1.0) > 1e-9) {
    throw std::invalid_argument("gc_cnot: input must be normalized");
  }

  // Wires: 0 = control in, 1 = target in, 2..5 = chi resource. The resource
  // is prepared in place so finite-mode absorption lands in the joint ledger.
  StateVector state = input;
  extend(state, {Species::positron, "x1"}, 0);
  extend(state, {Species::electron, "x2"}, 0);
  extend(state, {Species::positron, "x3"}, 0);
  apply_unitary(state, 2, hadamard());
  apply_ifm_active_low(state, 2, 3, config);
  apply_ifm_active_low(state, 3, 4, config);
  apply_unitary(state, 2, hadamard());
  apply_unitary(state, 3, hadamard());
  apply_unitary(state, 4, hadamard());
  extend(state, {Species::electron, "x4"}, 0);
  apply_ifm_active_low(state, 4, 5, config);

  ProtocolOutcome outcome;
  auto record = [&outcome](const ProtocolOutcome& part, const char* prefix) {
    if (part.reported) {
      outcome.heralds.push_back(std::string(prefix) + "=" +
                                to_string(*part.reported));
    }
    for (const auto& herald : part.heralds) {
      outcome.heralds.push_back(std::string(prefix) + ":" + herald);
    }
    for (int bit : part.classical_bits) outcome.classical_bits.push_back(bit);
    outcome.guessed = outcome.guessed || part.guessed;
    outcome.success = outcome.success && part.success;
  };

  // B1 teleports the target input onto chi wire 2.
  const int k1 = 1 + static_cast<int>(draw01(rng) * 6.0);
  const ProtocolOutcome b1 = bell_measure(state, 2, 1, config, rng, k1);
  record(b1, "b1");
  if (state.amplitudes.empty()) {
    outcome.success = false;
    return {std::move(state), std::move(outcome)};
  }
  // Register is now [0 = control in, 1 = chi2, 2 = chi3, 3 = chi4].
  const int k2 = 1 + static_cast<int>(draw01(rng) * 6.0);
  const ProtocolOutcome b2 = bell_measure(state, 0, 3, config, rng, k2);
  record(b2, "b2");
  if (state.amplitudes.empty()) {
    outcome.success = false;
    return {std::move(state), std::move(outcome)};
  }
  // Register is now [0 = chi2 = target out, 1 = chi3 = control out].

  const int x1 = b1.classical_bits[0], z1 = b1.classical_bits[1];
  const int x2 = b2.classical_bits[0], z2 = b2.classical_bits[1];

  // Teleportation byproducts conjugated through the resource's hidden CNOT.
  if (z1) {
    apply_unitary(state, 0, pauli_z());
    outcome.corrections.push_back("Z:target");
  }
  if (x1 ^ x2) {
    apply_unitary(state, 0, pauli_x());
    outcome.corrections.push_back("X:target");
  }
  if (z1 ^ z2) {
    apply_unitary(state, 1, pauli_z());
    outcome.corrections.push_back("Z:control");
  }
  if (x2) {
    apply_unitary(state, 1, pauli_x());
    outcome.corrections.push_back("X:control");
  }

  swap_qubits(state, 0, 1);
  state.qubits[0].label = "control_out";
  state.qubits[1].label = "target_out";
  return {std::move(state), std::move(outcome)};
}

}  // namespace ifm
