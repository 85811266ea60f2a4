#pragma once

#include <array>

#include "ifm/state.hpp"

namespace ifm {

enum class GateMode { ideal, finite };

/// How the conditional cascade gate is realized.
///
/// * ideal  — the infinite-cascade, perfect-absorber limit: an exact
///            four-branch map (n_splitters and eta are ignored).
/// * finite — an explicit N-splitter cascade with object transparency eta;
///            the control=1, target-lower-rail branch survives with the same
///            amplitude the interferometer module computes in closed form.
struct IfmGateConfig {
  GateMode mode = GateMode::ideal;
  int n_splitters = 100;
  double eta = 0.0;

  static IfmGateConfig ideal() { return {GateMode::ideal, 0, 0.0}; }
  static IfmGateConfig finite(int n_splitters, double eta) {
    return {GateMode::finite, n_splitters, eta};
  }
};

/// Returns true when `control` is a species that absorbs (annihilates with)
/// `target`: positron/electron in either order, or atom/photon.
bool species_can_absorb(Species control, Species target);

/// The two-qubit conditional gate: the control qubit's particle sits on (or
/// off) the blocking path of a beam-splitter cascade threaded by the target's
/// rails.
///
/// Ideal mode, per basis branch:
///   control 0, target 0  ->  target 1           (amplitude +1: free cascade
///                                                rotates the probe across)
///   control 0, target 1  ->  target 0           (amplitude -1, same cascade)
///   control 1, target 0  ->  target 0           (amplitude +1: blocked
///                                                cascade freezes the probe)
///   control 1, target 1  ->  branch annihilated (amplitude moved to the
///                                                absorbed ledger)
///
/// Finite mode applies the temporal sequence A, (B A) x N on the target rails
/// where B is the theta = pi/(2N) splitter and A damps the target's bit-1
/// rail by sqrt(eta) on control=1 branches only. Control amplitudes are never
/// altered. The whole application books at most one ledger record.
///
/// Throws std::invalid_argument if the control species cannot absorb the
/// target species, if the indices coincide, or on invalid finite parameters;
/// std::out_of_range on bad indices.
void apply_ifm(StateVector& state, std::size_t control_index,
               std::size_t target_index, const IfmGateConfig& config);

/// One row of the gate's behaviour on a basis input: the four output
/// amplitudes and the mass lost to absorption.
struct TruthTableEntry {
  int control_in = 0;
  int target_in = 0;
  /// out[c'][t'] = amplitude on (control', target')
  std::array<std::array<Complex, 2>, 2> out{};
  double absorbed_mass = 0.0;
};

using TruthTable = std::array<TruthTableEntry, 4>;

/// Enumerates apply_ifm over the four two-qubit basis inputs (positron
/// control, electron target). Ideal mode reproduces the four-branch map above
/// exactly, including the annihilation row.
TruthTable truth_table(const IfmGateConfig& config);

}  // namespace ifm
