#include "ifm/gate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace ifm {

namespace {

AbsorptionTag tag_for(Species control, Species target) {
  if ((control == Species::positron && target == Species::electron) ||
      (control == Species::electron && target == Species::positron)) {
    return AbsorptionTag::gamma;
  }
  return AbsorptionTag::photon_absorbed;
}

void apply_ideal(StateVector& state, std::size_t control, std::size_t target,
                 const std::string& event, AbsorptionTag tag) {
  const std::uint64_t cmask = std::uint64_t{1} << control;
  const std::uint64_t tmask = std::uint64_t{1} << target;
  std::map<std::uint64_t, Complex> next;
  double annihilated = 0.0;
  for (const auto& [key, amp] : state.amplitudes) {
    const bool c = key & cmask;
    const bool t = key & tmask;
    if (!c) {
      // Free cascade: full quarter turn of the target rails,
      // |0> -> |1> and |1> -> -|0>.
      next[key ^ tmask] += t ? -amp : amp;
    } else if (!t) {
      // Blocked cascade: the probe is frozen on its rail.
      next[key] += amp;
    } else {
      // Both particles on the blocking path: the branch annihilates.
      annihilated += std::norm(amp);
    }
  }
  state.amplitudes = std::move(next);
  if (annihilated > 0.0) {
    state.absorbed.push_back({annihilated, event, tag});
  }
}

void apply_finite(StateVector& state, std::size_t control, std::size_t target,
                  int n_splitters, double eta, const std::string& event,
                  AbsorptionTag tag) {
  const double theta = std::numbers::pi / (2.0 * n_splitters);
  const OneQubitUnitary b = beam_splitter(theta);
  const double survival = std::sqrt(eta);
  absorb_controlled(state, control, target, survival, event, tag);
  for (int k = 0; k < n_splitters; ++k) {
    apply_unitary(state, target, b);
    absorb_controlled(state, control, target, survival, event, tag);
  }
}

}  // namespace

bool species_can_absorb(Species control, Species target) {
  return (control == Species::positron && target == Species::electron) ||
         (control == Species::electron && target == Species::positron) ||
         (control == Species::atom && target == Species::photon);
}

void apply_ifm(StateVector& state, std::size_t control_index,
               std::size_t target_index, const IfmGateConfig& config) {
  if (control_index >= state.qubits.size() ||
      target_index >= state.qubits.size()) {
    throw std::out_of_range("apply_ifm: qubit index out of range");
  }
  if (control_index == target_index) {
    throw std::invalid_argument("apply_ifm: control and target must differ");
  }
  const Species cs = state.qubits[control_index].species;
  const Species ts = state.qubits[target_index].species;
  if (!species_can_absorb(cs, ts)) {
    throw std::invalid_argument("apply_ifm: a " + to_string(cs) +
                                " control cannot absorb a " + to_string(ts) +
                                " target");
  }
  const std::string event = "ifm:" + std::to_string(state.op_serial++);
  const AbsorptionTag tag = tag_for(cs, ts);
  if (config.mode == GateMode::ideal) {
    apply_ideal(state, control_index, target_index, event, tag);
    return;
  }
  if (config.n_splitters < 1) {
    throw std::invalid_argument("apply_ifm: finite mode needs n_splitters >= 1");
  }
  if (!(config.eta >= 0.0 && config.eta < 1.0)) {
    throw std::invalid_argument("apply_ifm: eta must lie in [0, 1)");
  }
  apply_finite(state, control_index, target_index, config.n_splitters,
               config.eta, event, tag);
}

TruthTable truth_table(const IfmGateConfig& config) {
  TruthTable table;
  const std::vector<QubitDescriptor> pair = {
      {Species::positron, "control"},
      {Species::electron, "target"},
  };
  for (int c = 0; c < 2; ++c) {
    for (int t = 0; t < 2; ++t) {
      StateVector state = new_state(pair, {c, t});
      apply_ifm(state, 0, 1, config);
      TruthTableEntry& entry = table[static_cast<std::size_t>(2 * c + t)];
      entry.control_in = c;
      entry.target_in = t;
      for (int co = 0; co < 2; ++co) {
        for (int to = 0; to < 2; ++to) {
          entry.out[co][to] = amplitude(state, {co, to});
        }
      }
      entry.absorbed_mass = absorbed_weight(state);
    }
  }
  return table;
}

}  // namespace ifm
