#include "ifm/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ifm {

namespace {

constexpr double kUnitarityTolerance = 1e-9;

void check_index(const StateVector& state, std::size_t q) {
  if (q >= state.qubits.size()) {
    throw std::out_of_range("qubit index " + std::to_string(q) +
                            " out of range for register of size " +
                            std::to_string(state.qubits.size()));
  }
}

int bit_of(std::uint64_t key, std::size_t q) {
  return static_cast<int>((key >> q) & 1u);
}

double unitarity_deviation(const OneQubitUnitary& u) {
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Complex dot = 0.0;
      for (int k = 0; k < 2; ++k) {
        dot += std::conj(u.m[k][i]) * u.m[k][j];
      }
      if (i == j) dot -= 1.0;
      worst = std::max(worst, std::abs(dot));
    }
  }
  return worst;
}

double unitarity_deviation(const TwoQubitUnitary& u) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Complex dot = 0.0;
      for (int k = 0; k < 4; ++k) {
        dot += std::conj(u.m[k][i]) * u.m[k][j];
      }
      if (i == j) dot -= 1.0;
      worst = std::max(worst, std::abs(dot));
    }
  }
  return worst;
}

void prune_zeros(std::map<std::uint64_t, Complex>& amps) {
  for (auto it = amps.begin(); it != amps.end();) {
    if (it->second == Complex{0.0, 0.0}) {
      it = amps.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace

std::string to_string(Species s) {
  switch (s) {
    case Species::positron: return "positron";
    case Species::electron: return "electron";
    case Species::photon: return "photon";
    case Species::atom: return "atom";
  }
  return "?";
}

std::string to_string(AbsorptionTag t) {
  return t == AbsorptionTag::gamma ? "gamma" : "photon_absorbed";
}

std::size_t sample_discrete(Rng& rng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) {
    throw std::runtime_error("sample_discrete: no positive weight");
  }
  const double u = draw01(rng) * total;
  double cumulative = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = i;
    cumulative += weights[i];
    if (u < cumulative) {
      return weights[i] > 0.0 ? i : last_positive;
    }
  }
  return last_positive;
}

StateVector new_state(const std::vector<QubitDescriptor>& descriptors,
                      const LogicalBasisState& bits) {
  if (descriptors.empty()) {
    throw std::invalid_argument("new_state: register must hold at least one qubit");
  }
  if (descriptors.size() != bits.size()) {
    throw std::invalid_argument("new_state: " + std::to_string(bits.size()) +
                                " bits for " + std::to_string(descriptors.size()) +
                                " qubits");
  }
  if (descriptors.size() > 63) {
    throw std::invalid_argument("new_state: register too large");
  }
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) {
      throw std::invalid_argument("new_state: bits must be 0 or 1");
    }
    key |= static_cast<std::uint64_t>(bits[i]) << i;
  }
  StateVector state;
  state.qubits = descriptors;
  state.amplitudes[key] = Complex{1.0, 0.0};
  return state;
}

void extend(StateVector& state, const QubitDescriptor& descriptor, int bit) {
  if (bit != 0 && bit != 1) {
    throw std::invalid_argument("extend: bit must be 0 or 1");
  }
  if (state.qubits.size() >= 63) {
    throw std::invalid_argument("extend: register too large");
  }
  const std::size_t q = state.qubits.size();
  state.qubits.push_back(descriptor);
  if (bit == 1) {
    std::map<std::uint64_t, Complex> shifted;
    for (const auto& [key, amp] : state.amplitudes) {
      shifted[key | (std::uint64_t{1} << q)] = amp;
    }
    state.amplitudes = std::move(shifted);
  }
}

void remove_qubit(StateVector& state, std::size_t qubit_index) {
  check_index(state, qubit_index);
  const std::uint64_t low_mask = (std::uint64_t{1} << qubit_index) - 1;
  if (!state.amplitudes.empty()) {
    const int definite = bit_of(state.amplitudes.begin()->first, qubit_index);
    for (const auto& [key, amp] : state.amplitudes) {
      if (bit_of(key, qubit_index) != definite) {
        throw std::invalid_argument(
            "remove_qubit: qubit " + std::to_string(qubit_index) +
            " is not in a definite basis state");
      }
    }
    std::map<std::uint64_t, Complex> compressed;
    for (const auto& [key, amp] : state.amplitudes) {
      compressed[(key & low_mask) | ((key >> (qubit_index + 1)) << qubit_index)] = amp;
    }
    state.amplitudes = std::move(compressed);
  }
  state.qubits.erase(state.qubits.begin() + static_cast<std::ptrdiff_t>(qubit_index));
}

void swap_qubits(StateVector& state, std::size_t a, std::size_t b) {
  check_index(state, a);
  check_index(state, b);
  if (a == b) return;
  std::map<std::uint64_t, Complex> swapped;
  for (const auto& [key, amp] : state.amplitudes) {
    const std::uint64_t ba = (key >> a) & 1u;
    const std::uint64_t bb = (key >> b) & 1u;
    std::uint64_t k = key & ~((std::uint64_t{1} << a) | (std::uint64_t{1} << b));
    k |= bb << a;
    k |= ba << b;
    swapped[k] = amp;
  }
  state.amplitudes = std::move(swapped);
  std::swap(state.qubits[a], state.qubits[b]);
}

void apply_unitary(StateVector& state, std::size_t qubit_index,
                   const OneQubitUnitary& u) {
  check_index(state, qubit_index);
  if (unitarity_deviation(u) > kUnitarityTolerance) {
    throw std::invalid_argument("apply_unitary: matrix is not unitary");
  }
  const std::uint64_t mask = std::uint64_t{1} << qubit_index;
  std::map<std::uint64_t, Complex> next;
  for (const auto& [key, amp] : state.amplitudes) {
    const int b = bit_of(key, qubit_index);
    next[key & ~mask] += u.m[0][b] * amp;
    next[key | mask] += u.m[1][b] * amp;
  }
  prune_zeros(next);
  state.amplitudes = std::move(next);
}

void apply_two_qubit(StateVector& state, std::size_t q1, std::size_t q2,
                     const TwoQubitUnitary& u) {
  check_index(state, q1);
  check_index(state, q2);
  if (q1 == q2) {
    throw std::invalid_argument("apply_two_qubit: indices must be distinct");
  }
  if (unitarity_deviation(u) > kUnitarityTolerance) {
    throw std::invalid_argument("apply_two_qubit: matrix is not unitary");
  }
  const std::uint64_t m1 = std::uint64_t{1} << q1;
  const std::uint64_t m2 = std::uint64_t{1} << q2;
  std::map<std::uint64_t, Complex> next;
  for (const auto& [key, amp] : state.amplitudes) {
    const int in = 2 * bit_of(key, q1) + bit_of(key, q2);
    const std::uint64_t base = key & ~(m1 | m2);
    for (int out = 0; out < 4; ++out) {
      const Complex c = u.m[out][in];
      if (c == Complex{0.0, 0.0}) continue;
      std::uint64_t k = base;
      if (out & 2) k |= m1;
      if (out & 1) k |= m2;
      next[k] += c * amp;
    }
  }
  prune_zeros(next);
  state.amplitudes = std::move(next);
}

void apply_rotation(StateVector& state, std::size_t qubit_index, Axis axis,
                    double theta) {
  apply_unitary(state, qubit_index, rotation_matrix(axis, theta));
}

void absorb(StateVector& state, std::size_t qubit_index,
            double survival_amplitude, const std::string& event,
            AbsorptionTag tag) {
  check_index(state, qubit_index);
  if (!(survival_amplitude >= 0.0 && survival_amplitude <= 1.0)) {
    throw std::invalid_argument("absorb: survival amplitude must lie in [0, 1]");
  }
  double lost = 0.0;
  for (auto it = state.amplitudes.begin(); it != state.amplitudes.end();) {
    if (bit_of(it->first, qubit_index) == 1) {
      const Complex damped = survival_amplitude * it->second;
      lost += std::norm(it->second) - std::norm(damped);
      if (damped == Complex{0.0, 0.0}) {
        it = state.amplitudes.erase(it);
        continue;
      }
      it->second = damped;
    }
    ++it;
  }
  if (lost > 0.0) {
    state.absorbed.push_back({lost, event, tag});
  }
}

void absorb_controlled(StateVector& state, std::size_t control_index,
                       std::size_t target_index, double survival_amplitude,
                       const std::string& event, AbsorptionTag tag) {
  check_index(state, control_index);
  check_index(state, target_index);
  if (control_index == target_index) {
    throw std::invalid_argument("absorb_controlled: indices must be distinct");
  }
  if (!(survival_amplitude >= 0.0 && survival_amplitude <= 1.0)) {
    throw std::invalid_argument(
        "absorb_controlled: survival amplitude must lie in [0, 1]");
  }
  double lost = 0.0;
  for (auto it = state.amplitudes.begin(); it != state.amplitudes.end();) {
    if (bit_of(it->first, control_index) == 1 &&
        bit_of(it->first, target_index) == 1) {
      const Complex damped = survival_amplitude * it->second;
      lost += std::norm(it->second) - std::norm(damped);
      if (damped == Complex{0.0, 0.0}) {
        it = state.amplitudes.erase(it);
        continue;
      }
      it->second = damped;
    }
    ++it;
  }
  if (lost > 0.0) {
    for (auto& record : state.absorbed) {
      if (record.event == event && record.tag == tag) {
        record.mass += lost;
        return;
      }
    }
    state.absorbed.push_back({lost, event, tag});
  }
}

MeasurementResult measure(StateVector& state, std::size_t qubit_index,
                          Rng& rng) {
  check_index(state, qubit_index);
  if (state.amplitudes.empty()) {
    throw std::runtime_error("measure: state is fully absorbed");
  }
  std::vector<double> weights(2 + state.absorbed.size(), 0.0);
  for (const auto& [key, amp] : state.amplitudes) {
    weights[static_cast<std::size_t>(bit_of(key, qubit_index))] += std::norm(amp);
  }
  for (std::size_t i = 0; i < state.absorbed.size(); ++i) {
    weights[2 + i] = state.absorbed[i].mass;
  }
  const std::size_t pick = sample_discrete(rng, weights);

  if (pick >= 2) {
    AbsorbedRecord record = state.absorbed[pick - 2];
    state.amplitudes.clear();
    record.mass = 1.0;
    state.absorbed = {record};
    MeasurementResult result;
    result.kind = MeasurementResult::Kind::absorbed;
    result.event = record.event;
    result.tag = record.tag;
    return result;
  }

  const int outcome = static_cast<int>(pick);
  const double norm = std::sqrt(weights[pick]);
  for (auto it = state.amplitudes.begin(); it != state.amplitudes.end();) {
    if (bit_of(it->first, qubit_index) != outcome) {
      it = state.amplitudes.erase(it);
    } else {
      it->second /= norm;
      ++it;
    }
  }
  state.absorbed.clear();
  MeasurementResult result;
  result.kind = MeasurementResult::Kind::bit;
  result.bit = outcome;
  return result;
}

double fidelity(const StateVector& state, const StateVector& reference) {
  if (state.qubits.size() != reference.qubits.size()) {
    throw std::invalid_argument("fidelity: register sizes differ");
  }
  for (std::size_t i = 0; i < state.qubits.size(); ++i) {
    if (state.qubits[i].species != reference.qubits[i].species) {
      throw std::invalid_argument("fidelity: register species differ at index " +
                                  std::to_string(i));
    }
  }
  if (!reference.absorbed.empty()) {
    throw std::invalid_argument("fidelity: reference must have an empty ledger");
  }
  Complex overlap = 0.0;
  for (const auto& [key, ref_amp] : reference.amplitudes) {
    const auto it = state.amplitudes.find(key);
    if (it != state.amplitudes.end()) {
      overlap += std::conj(ref_amp) * it->second;
    }
  }
  return std::norm(overlap);
}

double coherent_weight(const StateVector& state) {
  double total = 0.0;
  for (const auto& [key, amp] : state.amplitudes) total += std::norm(amp);
  return total;
}

double absorbed_weight(const StateVector& state) {
  double total = 0.0;
  for (const auto& record : state.absorbed) total += record.mass;
  return total;
}

double total_weight(const StateVector& state) {
  return coherent_weight(state) + absorbed_weight(state);
}

Complex amplitude(const StateVector& state, const LogicalBasisState& bits) {
  if (bits.size() != state.qubits.size()) {
    throw std::invalid_argument("amplitude: wrong number of bits");
  }
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) {
      throw std::invalid_argument("amplitude: bits must be 0 or 1");
    }
    key |= static_cast<std::uint64_t>(bits[i]) << i;
  }
  const auto it = state.amplitudes.find(key);
  return it == state.amplitudes.end() ? Complex{0.0, 0.0} : it->second;
}

namespace {
OneQubitUnitary matrix2(Complex a, Complex b, Complex c, Complex d) {
  OneQubitUnitary u;
  u.m[0][0] = a;
  u.m[0][1] = b;
  u.m[1][0] = c;
  u.m[1][1] = d;
  return u;
}
}  // namespace

OneQubitUnitary identity_matrix() { return matrix2(1.0, 0.0, 0.0, 1.0); }

OneQubitUnitary pauli_x() { return matrix2(0.0, 1.0, 1.0, 0.0); }

OneQubitUnitary pauli_y() {
  return matrix2(0.0, Complex{0.0, -1.0}, Complex{0.0, 1.0}, 0.0);
}

OneQubitUnitary pauli_z() { return matrix2(1.0, 0.0, 0.0, -1.0); }

OneQubitUnitary hadamard() {
  const double s = 1.0 / std::numbers::sqrt2;
  return matrix2(s, s, s, -s);
}

OneQubitUnitary beam_splitter(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return matrix2(c, -s, s, c);
}

OneQubitUnitary rotation_matrix(Axis axis, double theta) {
  if (!(theta >= 0.0 && theta < 4.0 * std::numbers::pi)) {
    throw std::invalid_argument("rotation: theta must lie in [0, 4*pi)");
  }
  const double c = std::cos(theta / 2.0);
  const Complex ms{0.0, -std::sin(theta / 2.0)};  // -i sin(theta/2)
  OneQubitUnitary sigma;
  switch (axis) {
    case Axis::x: sigma = pauli_x(); break;
    case Axis::y: sigma = pauli_y(); break;
    case Axis::z: sigma = pauli_z(); break;
  }
  OneQubitUnitary r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r.m[i][j] = (i == j ? Complex{c, 0.0} : Complex{0.0, 0.0}) + ms * sigma.m[i][j];
    }
  }
  return r;
}

TwoQubitUnitary kron(const OneQubitUnitary& a, const OneQubitUnitary& b) {
  TwoQubitUnitary out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          out.m[2 * i + k][2 * j + l] = a.m[i][j] * b.m[k][l];
        }
      }
    }
  }
  return out;
}

TwoQubitUnitary matmul(const TwoQubitUnitary& a, const TwoQubitUnitary& b) {
  TwoQubitUnitary out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Complex sum = 0.0;
      for (int k = 0; k < 4; ++k) sum += a.m[i][k] * b.m[k][j];
      out.m[i][j] = sum;
    }
  }
  return out;
}

TwoQubitUnitary cnot_matrix() {
  TwoQubitUnitary u;
  u.m[0][0] = 1.0;
  u.m[1][1] = 1.0;
  u.m[2][3] = 1.0;
  u.m[3][2] = 1.0;
  return u;
}

}  // namespace ifm
