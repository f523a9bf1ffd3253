#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "qaoap/common.hpp"
#include "qaoap/qubo.hpp"

namespace qaoap {

inline constexpr int kMaxCostVectorQubits = 24;   // 2^24 doubles, memory guard
inline constexpr double kDegeneracyTol = 1e-12;   // tie tolerance after normalization

struct Coupling {
  int i = 0;  // i < j
  int j = 0;
  double value = 0.0;
};

/// Spin model H(s) = sum_{i<j} J_ij s_i s_j + sum_i h_i s_i with s_i in {-1,+1}.
/// For the source QUBO, qubo_cost(x) = norm_factor * (H(s(x)) + offset) where
/// s_i = 2 x_i - 1.
struct IsingModel {
  int n = 0;
  std::vector<Coupling> couplings;  // nonzero, ordered by (i, j)
  std::vector<double> fields;       // size n
  double offset = 0.0;
  double norm_factor = 1.0;
};

/// Exact substitution x_i = (1 + s_i) / 2 into the QUBO objective.
inline IsingModel to_ising(const QuboInstance& q) {
  IsingModel m;
  m.n = q.n;
  m.fields.assign(q.n, 0.0);
  for (int i = 0; i < q.n; ++i) {
    const double d = q.q(i, i);
    m.fields[i] += d / 2.0;
    m.offset += d / 2.0;
    for (int j = i + 1; j < q.n; ++j) {
      const double v = q.q(i, j);
      if (v == 0.0) continue;
      m.couplings.push_back({i, j, v / 4.0});
      m.fields[i] += v / 4.0;
      m.fields[j] += v / 4.0;
      m.offset += v / 4.0;
    }
  }
  return m;
}

/// Divides couplings, fields and offset by the maximum |J_ij| (falling back to
/// max |h_i| for coupling-free models). norm_factor accumulates the divisor so
/// the QUBO equivalence above keeps holding.
inline IsingModel normalize(const IsingModel& m) {
  double f = 0.0;
  for (const auto& c : m.couplings) f = std::max(f, std::abs(c.value));
  if (f == 0.0)
    for (double h : m.fields) f = std::max(f, std::abs(h));
  if (f == 0.0) throw ConfigError("normalize: degenerate instance");
  IsingModel out = m;
  for (auto& c : out.couplings) c.value /= f;
  for (auto& h : out.fields) h /= f;
  out.offset /= f;
  out.norm_factor = m.norm_factor * f;
  return out;
}

inline double ising_cost(const IsingModel& m, std::uint32_t state) {
  const auto spin = [state](int i) {
    return ((state >> i) & 1u) ? 1.0 : -1.0;
  };
  double total = 0.0;
  for (const auto& c : m.couplings) total += c.value * spin(c.i) * spin(c.j);
  for (int i = 0; i < m.n; ++i) total += m.fields[i] * spin(i);
  return total;
}

/// Classical cost of every basis state (offset excluded). Entry z uses spins
/// s_i = 2*bit_i(z) - 1 with bit 0 = variable 0. Incremental single-flip
/// updates make this O(2^n * degree).
inline std::vector<double> cost_vector(const IsingModel& m) {
  if (m.n < 1 || m.n > kMaxCostVectorQubits)
    throw ConfigError("cost_vector: n out of range");
  std::vector<std::vector<std::pair<int, double>>> adj(m.n);
  for (const auto& c : m.couplings) {
    adj[c.i].push_back({c.j, c.value});
    adj[c.j].push_back({c.i, c.value});
  }
  const std::size_t size = std::size_t{1} << m.n;
  std::vector<double> costs(size);
  double c0 = 0.0;
  for (const auto& c : m.couplings) c0 += c.value;  // all spins -1
  for (double h : m.fields) c0 -= h;
  costs[0] = c0;
  for (std::size_t z = 1; z < size; ++z) {
    const int i = std::countr_zero(z);
    const std::size_t prev = z & (z - 1);  // bit i flipped from -1 to +1
    double delta = 2.0 * m.fields[i];
    for (const auto& [j, v] : adj[i]) {
      const double sj = ((prev >> j) & 1u) ? 1.0 : -1.0;
      delta += 2.0 * v * sj;
    }
    costs[z] = costs[prev] + delta;
  }
  return costs;
}

struct OptimalSet {
  double min_cost = 0.0;
  std::vector<std::uint32_t> states;
};

/// Global minimum and all argmin states; ties within kDegeneracyTol included.
inline OptimalSet optimal_set(const std::vector<double>& costs) {
  if (costs.empty()) throw ConfigError("optimal_set: empty cost array");
  OptimalSet out;
  out.min_cost = *std::min_element(costs.begin(), costs.end());
  for (std::size_t z = 0; z < costs.size(); ++z)
    if (costs[z] <= out.min_cost + kDegeneracyTol)
      out.states.push_back(static_cast<std::uint32_t>(z));
  return out;
}

inline nlohmann::json ising_to_json(const IsingModel& m) {
  nlohmann::json j;
  j["n"] = m.n;
  j["offset"] = m.offset;
  j["norm_factor"] = m.norm_factor;
  nlohmann::json triples = nlohmann::json::array();
  for (int i = 0; i < m.n; ++i)
    if (m.fields[i] != 0.0) triples.push_back({i, i, m.fields[i]});
  for (const auto& c : m.couplings) triples.push_back({c.i, c.j, c.value});
  j["q"] = std::move(triples);
  return j;
}

}  // namespace qaoap
