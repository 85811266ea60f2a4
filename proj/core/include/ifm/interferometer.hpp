#pragma once

#include <array>
#include <vector>

namespace ifm {

/// Parameters of the N-beam-splitter cascade probing a partially transparent
/// object. Each splitter rotates the probe's two rails by theta = pi/(2N),
/// so the full cascade adds up to a quarter turn; eta is the probability that
/// the object fails to absorb an encountering particle (eta = 0 is a perfect
/// absorber).
struct CascadeParams {
  int n_splitters = 1;
  double eta = 0.0;

  double theta() const;
};

/// Real 2x2 matrix in the (|0>, |1>) rail basis.
struct Mat2 {
  std::array<std::array<double, 2>, 2> m{};
};

/// The cascade's two building blocks: the beam splitter
/// B = [[cos t, -sin t], [sin t, cos t]] and the absorption step
/// A = diag(1, sqrt(eta)) damping the rail that meets the object.
struct TransferMatrices {
  Mat2 beam_splitter;
  Mat2 absorber;
};

TransferMatrices transfer_matrices(const CascadeParams& params);

/// Survival amplitude <0|(BA)^(N-1) B|0> of a probe that enters on the lower
/// rail with the object present, evaluated by an iterated 2x2 product in
/// double precision. For N = 1 this is cos(pi/2) = 0; for eta = 0 it is
/// cos^N(pi/2N).
/// Requires n_splitters >= 1 and eta in [0, 1).
double transfer_amplitude_exact(const CascadeParams& params);

/// Square of transfer_amplitude_exact: the probability that the probe
/// traverses the whole cascade untouched and exits on the lower rail.
double success_probability_exact(const CascadeParams& params);

/// First-order (in 1/N) closed form of the survival amplitude, squared.
/// Implements the full bracketed expansion including both geometric-series
/// terms in r = sqrt(eta); at eta = 0 those terms vanish analytically and the
/// bracket reduces to 1/2. Requires n_splitters >= 2 and eta in [0, 1).
double success_probability_approx(const CascadeParams& params);

/// Smallest cascade size that the first-order estimate
/// N ~ (pi/2)^2 * 1/(1-P) * (1+sqrt(eta))/(1-sqrt(eta)) predicts will reach
/// success probability target_p, rounded up. The estimate is asymptotic and
/// trustworthy only for target_p close to 1. Requires 0 < target_p < 1 and
/// eta in [0, 1).
int required_splitters(double target_p, double eta);

struct SweepRow {
  int n_splitters;
  double eta;
  double p_exact;
  double p_approx;
};

/// Row-per-(N, eta) table of exact and approximate success probabilities,
/// n-major then eta-minor. Requires every N >= 2 and every eta in [0, 1).
std::vector<SweepRow> sweep(const std::vector<int>& n_values,
                            const std::vector<double>& eta_values);

}  // namespace ifm
