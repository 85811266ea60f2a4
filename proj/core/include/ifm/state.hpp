#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ifm/rng.hpp"

namespace ifm {

using Complex = std::complex<double>;

/// Particle species carried by a dual-rail qubit. Species decide which qubits
/// may act as the absorbing object of a conditional gate: a positron absorbs
/// (annihilates with) an electron and vice versa, and a ground-state atom
/// absorbs a photon.
enum class Species { positron, electron, photon, atom };

std::string to_string(Species s);

/// One dual-rail qubit: a single particle on one of two paths. Logical bit 0
/// means the particle occupies the second rail (b or y), bit 1 the first rail
/// (a or x). The species is fixed for the qubit's lifetime.
struct QubitDescriptor {
  Species species;
  std::string label;
};

/// Why a branch left the coherent sector.
enum class AbsorptionTag { gamma, photon_absorbed };

std::string to_string(AbsorptionTag t);

/// Classical probability mass removed from the coherent state by an
/// absorption or annihilation event. Records are terminal: once created their
/// mass never changes, and absorbed branches can never interfere again.
struct AbsorbedRecord {
  double mass = 0.0;   ///< squared amplitude lost, in [0, 1]
  std::string event;   ///< identifier of the gate application that absorbed
  AbsorptionTag tag = AbsorptionTag::gamma;
};

/// A computational basis assignment, one bit per qubit.
using LogicalBasisState = std::vector<int>;

struct OneQubitUnitary {
  std::array<std::array<Complex, 2>, 2> m{};
};

struct TwoQubitUnitary {
  std::array<std::array<Complex, 4>, 4> m{};
};

/// Pure state of a dual-rail register plus its absorption ledger.
///
/// Amplitudes are stored sparsely over basis configurations keyed by a bit
/// mask (bit i = logical bit of qubit i); the protocols in this library
/// populate at most a few dozen configurations. The invariant maintained by
/// every operation is
///
///     sum |amplitude|^2  +  sum of absorbed masses  =  1   (within 1e-12).
///
/// StateVector is a value type: copy freely, mutate under exclusive access.
struct StateVector {
  std::vector<QubitDescriptor> qubits;
  std::map<std::uint64_t, Complex> amplitudes;
  std::vector<AbsorbedRecord> absorbed;
  std::uint64_t op_serial = 0;  ///< monotonic counter used to name events

  std::size_t size() const { return qubits.size(); }
};

/// Outcome of measuring one qubit in the logical basis. Either a definite bit
/// (the coherent sector survived, renormalized) or an absorption event (the
/// run terminated in the labeled absorbed branch).
struct MeasurementResult {
  enum class Kind { bit, absorbed };
  Kind kind = Kind::bit;
  int bit = 0;                                  ///< valid when kind == bit
  std::string event;                            ///< valid when kind == absorbed
  AbsorptionTag tag = AbsorptionTag::gamma;     ///< valid when kind == absorbed
};

// ---------------------------------------------------------------------------
// Construction and register surgery
// ---------------------------------------------------------------------------

/// Basis-state initialization: amplitude 1 on `bits`, empty ledger.
/// Throws std::invalid_argument on length mismatch or an empty register.
StateVector new_state(const std::vector<QubitDescriptor>& descriptors,
                      const LogicalBasisState& bits);

/// Appends one fresh qubit in the given basis bit (no entanglement).
void extend(StateVector& state, const QubitDescriptor& descriptor, int bit);

/// Removes a qubit whose bit is definite (identical across every coherent
/// configuration), e.g. one that has just been measured or whose particle has
/// been consumed. Throws std::invalid_argument if the bit is not definite.
/// Remaining qubits shift down by one index.
void remove_qubit(StateVector& state, std::size_t qubit_index);

/// Exchanges two register positions (descriptors and amplitude bits).
void swap_qubits(StateVector& state, std::size_t a, std::size_t b);

// ---------------------------------------------------------------------------
// Coherent operations
// ---------------------------------------------------------------------------

/// Applies a one-qubit unitary (a beam splitter across the qubit's two
/// rails). Throws std::invalid_argument if U deviates from unitarity by more
/// than 1e-9, std::out_of_range on a bad index.
void apply_unitary(StateVector& state, std::size_t qubit_index,
                   const OneQubitUnitary& u);

/// Applies a two-qubit unitary; basis order is (bit of q1, bit of q2) with
/// q1 the most significant. Same validation as apply_unitary.
void apply_two_qubit(StateVector& state, std::size_t q1, std::size_t q2,
                     const TwoQubitUnitary& u);

enum class Axis { x, y, z };

/// Rotation R_k(theta) = exp(-i theta sigma_k / 2), for theta in [0, 4*pi).
/// R_k(pi) equals -i*sigma_k entrywise.
void apply_rotation(StateVector& state, std::size_t qubit_index, Axis axis,
                    double theta);

// ---------------------------------------------------------------------------
// Absorption and measurement
// ---------------------------------------------------------------------------

/// Damps the bit-1 rail of one qubit: every amplitude on a configuration with
/// bit 1 at qubit_index is multiplied by survival_amplitude, and the lost
/// squared mass (if any) is appended as one AbsorbedRecord.
/// survival_amplitude must lie in [0, 1].
void absorb(StateVector& state, std::size_t qubit_index,
            double survival_amplitude, const std::string& event,
            AbsorptionTag tag);

/// Conditional damping used by the cascade gate: acts like absorb() on the
/// target, but only on configurations where the control bit is 1. Lost mass
/// is merged into an existing ledger record with the same event and tag, so
/// one gate application leaves one record regardless of its encounter count.
void absorb_controlled(StateVector& state, std::size_t control_index,
                       std::size_t target_index, double survival_amplitude,
                       const std::string& event, AbsorptionTag tag);

/// Measures one qubit in the logical basis. The outcome is sampled from the
/// complete classical distribution: P(bit 0), P(bit 1), and the mass of every
/// absorbed record (absorption events are externally heralded — a gamma flash
/// or a consumed photon — so they are distinguishable outcomes of the run).
///
/// On a bit outcome the coherent sector is projected and renormalized and the
/// ledger is cleared (a coherent detection post-selects against all absorbed
/// worlds). On an absorbed outcome the state becomes terminal: no amplitudes,
/// the selected record alone at mass 1.
///
/// Deterministic for a given rng state (exactly one uniform draw). Throws
/// std::runtime_error if the state is already fully absorbed.
MeasurementResult measure(StateVector& state, std::size_t qubit_index,
                          Rng& rng);

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

/// |<reference|state_coherent>|^2, in [0, 1]. The reference must have an
/// empty ledger and a register of the same length and species sequence
/// (labels are informational and not compared). The state's coherent part is
/// used unnormalized, so absorbed mass shows up as lost fidelity.
double fidelity(const StateVector& state, const StateVector& reference);

/// Sum of |amplitude|^2 over the coherent sector.
double coherent_weight(const StateVector& state);

/// Sum of ledger masses.
double absorbed_weight(const StateVector& state);

/// coherent_weight + absorbed_weight; 1 within 1e-12 for any state produced
/// by this library.
double total_weight(const StateVector& state);

/// Amplitude of one basis configuration (0 if absent).
Complex amplitude(const StateVector& state, const LogicalBasisState& bits);

// ---------------------------------------------------------------------------
// Common matrices
// ---------------------------------------------------------------------------

OneQubitUnitary identity_matrix();
OneQubitUnitary pauli_x();
OneQubitUnitary pauli_y();
OneQubitUnitary pauli_z();
OneQubitUnitary hadamard();
/// Beam splitter [[cos t, -sin t], [sin t, cos t]] across one qubit's rails.
OneQubitUnitary beam_splitter(double theta);
/// Matrix of R_k(theta) without applying it.
OneQubitUnitary rotation_matrix(Axis axis, double theta);
/// Tensor product, first factor most significant.
TwoQubitUnitary kron(const OneQubitUnitary& a, const OneQubitUnitary& b);
TwoQubitUnitary matmul(const TwoQubitUnitary& a, const TwoQubitUnitary& b);
/// CNOT with the first (most significant) qubit as control.
TwoQubitUnitary cnot_matrix();

}  // namespace ifm
