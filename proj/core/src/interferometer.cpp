#include "ifm/interferometer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ifm {

namespace {

void check_params(const CascadeParams& params, int min_n) {
  if (params.n_splitters < min_n) {
    throw std::invalid_argument("cascade: n_splitters must be at least " +
                                std::to_string(min_n));
  }
  if (!(params.eta >= 0.0 && params.eta < 1.0)) {
    throw std::invalid_argument("cascade: eta must lie in [0, 1)");
  }
}

}  // namespace

double CascadeParams::theta() const {
  return std::numbers::pi / (2.0 * n_splitters);
}

TransferMatrices transfer_matrices(const CascadeParams& params) {
  check_params(params, 1);
  const double c = std::cos(params.theta());
  const double s = std::sin(params.theta());
  TransferMatrices t;
  t.beam_splitter.m = {{{c, -s}, {s, c}}};
  t.absorber.m = {{{1.0, 0.0}, {0.0, std::sqrt(params.eta)}}};
  return t;
}

double transfer_amplitude_exact(const CascadeParams& params) {
  check_params(params, 1);
  const double c = std::cos(params.theta());
  const double s = std::sin(params.theta());
  const double r = std::sqrt(params.eta);
  // v = B |0>, then (BA) applied N-1 times.
  double v0 = c;
  double v1 = s;
  for (int k = 1; k < params.n_splitters; ++k) {
    const double damped = r * v1;
    v1 = s * v0 + c * damped;
    v0 = c * v0 - s * damped;
  }
  return v0;
}

double success_probability_exact(const CascadeParams& params) {
  const double a = transfer_amplitude_exact(params);
  return a * a;
}

double success_probability_approx(const CascadeParams& params) {
  check_params(params, 2);
  const int n = params.n_splitters;
  const double r = std::sqrt(params.eta);
  // Bracketed first-order coefficient: 1/2 plus two geometric-series terms
  // that vanish at r = 0 (the empty-sum convention for the N = 2 edge is
  // honoured automatically because r^(N-1) handles l running over 1..N-2).
  double bracket = 0.5;
  if (r > 0.0) {
    const double rn1 = std::pow(r, n - 1);
    bracket += r * (1.0 - rn1) / (1.0 - r);
    bracket -= (1.0 / n) * r * (1.0 - n * rn1 + (n - 1) * rn1 * r) /
               ((1.0 - r) * (1.0 - r));
  }
  const double half_pi = std::numbers::pi / 2.0;
  const double amp = 1.0 - half_pi * half_pi * bracket / n;
  return amp * amp;
}

int required_splitters(double target_p, double eta) {
  if (!(target_p > 0.0 && target_p < 1.0)) {
    throw std::invalid_argument("required_splitters: target_p must lie in (0, 1)");
  }
  if (!(eta >= 0.0 && eta < 1.0)) {
    throw std::invalid_argument("required_splitters: eta must lie in [0, 1)");
  }
  const double r = std::sqrt(eta);
  const double half_pi = std::numbers::pi / 2.0;
  const double estimate =
      half_pi * half_pi * (1.0 / (1.0 - target_p)) * ((1.0 + r) / (1.0 - r));
  return static_cast<int>(std::ceil(estimate));
}

std::vector<SweepRow> sweep(const std::vector<int>& n_values,
                            const std::vector<double>& eta_values) {
  std::vector<SweepRow> rows;
  rows.reserve(n_values.size() * eta_values.size());
  for (int n : n_values) {
    for (double eta : eta_values) {
      const CascadeParams params{n, eta};
      rows.push_back({n, eta, success_probability_exact(params),
                      success_probability_approx(params)});
    }
  }
  return rows;
}

}  // namespace ifm
