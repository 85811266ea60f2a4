#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ifm/gate.hpp"
#include "ifm/state.hpp"

namespace ifm {

/// The four maximally entangled two-qubit states
/// Phi± = (|00> ± |11>)/sqrt(2), Psi± = (|01> ± |10>)/sqrt(2).
enum class BellLabel { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

std::string to_string(BellLabel label);
/// Parses "Phi+", "Phi-", "Psi+", "Psi-"; throws std::invalid_argument.
BellLabel parse_bell_label(const std::string& text);

/// (x, z) teleportation bits of a Bell label: Phi+ = (0,0), Phi- = (0,1),
/// Psi+ = (1,0), Psi- = (1,1). The byproduct acting on the teleported wire
/// is X^x Z^z.
std::pair<int, int> bell_bits(BellLabel label);
BellLabel bell_label_from_bits(int x, int z);

/// Classical record of one protocol run.
struct ProtocolOutcome {
  std::vector<int> classical_bits;        ///< (x, z) bits of reported labels
  std::vector<std::string> heralds;       ///< detector clicks, gamma flashes,
                                          ///< guess flags, Bell labels
  std::vector<std::string> corrections;   ///< Pauli corrections applied
  bool success = true;                    ///< false when a guess was wrong or
                                          ///< the run was absorbed
  std::optional<BellLabel> reported;      ///< label announced by the device
  std::optional<BellLabel> truth;         ///< ground truth when resolvable
  bool guessed = false;                   ///< reported label was a coin flip
};

/// Reference Bell pair on a (positron, electron) register.
StateVector make_bell(BellLabel label);

/// Entangles a fresh positron/electron pair into Phi+ (ideal mode exact):
/// H on the positron, then the conditional gate with the positron's control
/// rail wired so its logical 0 blocks the cascade.
StateVector bell_generation(const IfmGateConfig& config);

/// Three-qubit (positron, electron, positron) GHZ state: Bell generation,
/// then a second conditional gate in which the *electron* is the blocking
/// object and the second positron the probe.
StateVector ghz_generation(const IfmGateConfig& config);

/// Entangles two photons that never met, using one atom as the mediating
/// absorber: H' on the atom, one conditional gate onto each photon, H'
/// again, then an atom measurement. Returns PhiPlus on atom outcome 0 and
/// PhiMinus on outcome 1, together with the two-photon posterior.
/// In finite mode, runs heralded as absorbed are discarded and re-run
/// (bounded retries), modelling lab-style post-selection.
std::pair<BellLabel, StateVector> photon_pair_bell(const IfmGateConfig& config,
                                                   Rng& rng);

/// The k-th two-qubit permutation operator of the Bell basis (k = 1..6),
/// composed from R_y / R_x rotations on the pair:
/// 1 = identity, 2 = Ry(pi) x I, 3 = Ry(pi/2) x Ry(pi/2),
/// 4 = Rx(pi/2) x Rx(pi/2), 5 = 3·2, 6 = 4·2. Throws on k out of range.
TwoQubitUnitary bell_permutation_operator(int k);

/// The label permutation realized by operator k, as the image of
/// {PhiPlus, PhiMinus, PsiPlus, PsiMinus} in that order (global phases
/// dropped).
std::array<BellLabel, 4> bell_permutation_row(int k);

/// Preimage of `label` under row k.
BellLabel bell_permutation_inverse(int k, BellLabel label);

/// Destructive Bell-basis measurement of a positron/electron pair embedded in
/// `state`, optionally preceded by permutation operator k (whose effect is
/// inverted on the reported label).
///
/// Physically: the pair passes the conditional gate; a click at the
/// electron's b' port heralds the Psi sector, where one more positron
/// measurement separates Psi+ from Psi- exactly. No click leaves the Phi
/// sector, whose sign cannot be observed — the label is a fair coin flip,
/// flagged `guessed`, heralded either by the surviving pair at a' or by a
/// gamma flash from annihilation.
///
/// Ideal mode realizes this as a Bell-faithful instrument: the sector truth
/// is Born-sampled in the Bell basis and the remaining register is projected
/// onto the sampled Bell state, so a correct label (conditioning on success)
/// leaves the rest of the register exactly teleported. Finite mode runs the
/// literal cascade circuit instead. Either way the measured pair is consumed:
/// both qubits leave the register (higher indices shift down by two).
///
/// success is false when a guessed label mismatched the resolvable ground
/// truth, or when the run terminated in an absorbed branch.
ProtocolOutcome bell_measure(StateVector& state, std::size_t positron_index,
                             std::size_t electron_index,
                             const IfmGateConfig& config, Rng& rng,
                             std::optional<int> permutation = std::nullopt);

/// Four-qubit resource state
/// chi = 1/2 [ (|00> + |11>)|00> + (|01> + |10>)|11> ]
/// on (positron, electron, positron, electron): GHZ on the first three,
/// H on each, then a fourth qubit entangled in by one conditional gate.
StateVector chi_preparation(const IfmGateConfig& config);

/// Gate-level CNOT by teleporting both inputs through the chi resource:
/// Bell-measures (chi_1, target_in) and (control_in, chi_4) with uniformly
/// drawn permutations, then applies the classically controlled Pauli
/// corrections to the two surviving chi wires. Input must be a two-qubit
/// (positron, electron) = (control, target) state with an empty ledger.
///
/// Returns the corrected (control', target') output state and the combined
/// outcome: classical_bits = (x1, z1, x2, z2), both Bell labels and guess
/// flags in heralds, corrections as applied. When neither Bell result was a
/// wrong guess, the output equals CNOT(input) exactly in ideal mode.
std::pair<StateVector, ProtocolOutcome> gc_cnot(const StateVector& input,
                                                const IfmGateConfig& config,
                                                Rng& rng);

}  // namespace ifm
