#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "qaoap/common.hpp"
#include "qaoap/ising.hpp"
#include "qaoap/rng.hpp"

namespace qaoap {

inline constexpr int kMaxSimQubits = 24;

/// Linear-ramp schedule parameters: total amplitudes and layer count.
struct RampParams {
  double delta_gamma = 0.5;
  double delta_beta = 0.5;
  int p = 1;
};

struct Schedule {
  std::vector<double> gamma;  // gamma_k = dg * k / p, increasing
  std::vector<double> beta;   // beta_k  = db * (1 - k / p), decreasing to 0
};

inline Schedule schedule(const RampParams& rp) {
  if (rp.p < 1) throw ConfigError("schedule: p must be >= 1");
  Schedule s;
  s.gamma.resize(rp.p);
  s.beta.resize(rp.p);
  for (int k = 1; k <= rp.p; ++k) {
    const double frac = static_cast<double>(k) / rp.p;
    s.gamma[k - 1] = rp.delta_gamma * frac;
    s.beta[k - 1] = rp.delta_beta * (1.0 - frac);
  }
  return s;
}

using StateVector = std::vector<std::complex<double>>;

/// Uniform superposition: every amplitude 2^(-n/2).
inline StateVector init_plus(int n) {
  if (n < 1 || n > kMaxSimQubits) throw ConfigError("init_plus: n out of range");
  const double amp = std::pow(2.0, -0.5 * n);
  return StateVector(std::size_t{1} << n, std::complex<double>(amp, 0.0));
}

/// Diagonal cost evolution: amplitude z multiplied by exp(+i * gamma * costs[z]).
inline void apply_cost_phase(StateVector& state, const std::vector<double>& costs,
                             double gamma) {
  if (state.size() != costs.size())
    throw ConfigError("apply_cost_phase: state/cost length mismatch");
  if (gamma == 0.0) return;
  for (std::size_t z = 0; z < state.size(); ++z) {
    const double a = gamma * costs[z];
    const double c = std::cos(a);
    const double s = std::sin(a);
    const double re = state[z].real();
    const double im = state[z].imag();
    state[z] = {re * c - im * s, re * s + im * c};
  }
}

/// Transverse-field mixer exp(-i * beta * X_i) on every qubit: each amplitude
/// pair (a, b) differing in bit i maps to
/// (cos(b)*a - i sin(b)*b, -i sin(b)*a + cos(b)*b).
inline void apply_mixer(StateVector& state, double beta, int n) {
  if (state.size() != (std::size_t{1} << n))
    throw ConfigError("apply_mixer: state length is not 2^n");
  if (beta == 0.0) return;
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  for (int qubit = 0; qubit < n; ++qubit) {
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t base = 0; base < state.size(); base += 2 * stride) {
      for (std::size_t off = 0; off < stride; ++off) {
        const std::size_t lo = base + off;
        const std::size_t hi = lo + stride;
        const double ar = state[lo].real(), ai = state[lo].imag();
        const double br = state[hi].real(), bi = state[hi].imag();
        state[lo] = {c * ar + s * bi, c * ai - s * br};
        state[hi] = {s * ai + c * br, -s * ar + c * bi};
      }
    }
  }
}

struct SimOptions {
  int shots = 0;               // 0: exact probability; >0: empirical frequency
  std::uint64_t shot_seed = 0;
};

/// Runs the full linear-ramp circuit over a precomputed cost vector and sums
/// the probability mass on the optimal states.
inline double success_probability_from_costs(const std::vector<double>& costs,
                                             const OptimalSet& opt, int n,
                                             const RampParams& rp,
                                             const SimOptions& options = {}) {
  const Schedule sched = schedule(rp);
  StateVector state = init_plus(n);
  for (int k = 0; k < rp.p; ++k) {
    apply_cost_phase(state, costs, sched.gamma[k]);
    apply_mixer(state, sched.beta[k], n);
  }
  double prob = 0.0;
  for (std::uint32_t z : opt.states) prob += std::norm(state[z]);
  if (options.shots <= 0) return prob;
  Rng rng(options.shot_seed);
  long long hits = 0;
  for (int i = 0; i < options.shots; ++i)
    if (rng.uniform01() < prob) ++hits;
  return static_cast<double>(hits) / options.shots;
}

inline double success_probability(const IsingModel& m, const RampParams& rp,
                                  const SimOptions& options = {}) {
  if (m.n > kMaxSimQubits) throw ConfigError("success_probability: n over limit");
  const std::vector<double> costs = cost_vector(m);
  return success_probability_from_costs(costs, optimal_set(costs), m.n, rp, options);
}

}  // namespace qaoap
