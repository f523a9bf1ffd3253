#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "qaoap/common.hpp"
#include "qaoap/graphs.hpp"
#include "qaoap/qubo.hpp"
#include "qaoap/rng.hpp"

namespace qaoap {

inline constexpr int kMinEncodeSize = 5;
inline constexpr int kMaxEncodeSize = 20;
inline constexpr int kTspSize = 9;  // 3 cities x 3 tour positions
inline constexpr double kSparseZeroProb = 0.7;

/// Raw combinatorial data behind an encoded QUBO, kept so that solutions of
/// the QUBO can be checked against the original problem by direct enumeration.
struct ProblemExtras {
  WeightedGraph graph;                 // graph classes (TSP: distance graph on 3 nodes)
  int primary_vars = 0;                // decision variables before slack bits
  std::vector<int> int_values;         // numbers / item weights
  std::vector<double> real_values;     // knapsack profits
  long long target = 0;                // subset-sum target or knapsack capacity
  std::vector<std::vector<int>> sets;  // set cover: members of each set
  int universe = 0;                    // set cover: number of elements
};

struct EncodedProblem {
  QuboInstance qubo;
  ProblemExtras extras;
};

namespace detail {

/// Bits needed to represent `values` distinct slack levels 0..values-1.
inline int slack_bits_for(int values) {
  int bits = 0;
  while ((1 << bits) < values) ++bits;
  return bits;
}

struct LinearTerm {
  int var;
  double coef;
};

/// Adds penalty * (sum coef_v x_v + constant)^2 to the QUBO, dropping the
/// global constant (it shifts all costs equally and never moves minimizers).
inline void add_squared_penalty(QuboInstance& q, const std::vector<LinearTerm>& terms,
                                double constant, double penalty) {
  for (std::size_t a = 0; a < terms.size(); ++a) {
    const auto& ta = terms[a];
    q.add(ta.var, ta.var, penalty * (ta.coef * ta.coef + 2.0 * constant * ta.coef));
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      const auto& tb = terms[b];
      q.add(ta.var, tb.var, 2.0 * penalty * ta.coef * tb.coef);
    }
  }
}

}  // namespace detail

/// Max-Cut: minimize sum_e w_e (2 x_u x_v - x_u - x_v); the minimum is the
/// negated maximum cut weight.
inline QuboInstance max_cut_qubo(const WeightedGraph& g) {
  QuboInstance q;
  q.resize(g.n);
  for (const auto& e : g.edges) {
    q.add(e.u, e.v, 2.0 * e.w);
    q.add(e.u, e.u, -e.w);
    q.add(e.v, e.v, -e.w);
  }
  return q;
}

/// Minimum vertex cover: sum_i x_i + A * sum_e (1 - x_u)(1 - x_v).
inline QuboInstance vertex_cover_qubo(const WeightedGraph& g, double penalty) {
  QuboInstance q;
  q.resize(g.n);
  for (int i = 0; i < g.n; ++i) q.add(i, i, 1.0);
  for (const auto& e : g.edges) {
    q.add(e.u, e.u, -penalty);
    q.add(e.v, e.v, -penalty);
    q.add(e.u, e.v, penalty);
  }
  return q;
}

/// Maximum independent set: -sum_i x_i + A * sum_e x_u x_v.
inline QuboInstance independent_set_qubo(const WeightedGraph& g, double penalty) {
  QuboInstance q;
  q.resize(g.n);
  for (int i = 0; i < g.n; ++i) q.add(i, i, -1.0);
  for (const auto& e : g.edges) q.add(e.u, e.v, penalty);
  return q;
}

/// Number of qubits a dominating-set encoding of g needs: one per vertex plus
/// slack bits for each covering constraint sum_{j in N[i]} x_j >= 1.
inline int dominating_set_required_qubits(const WeightedGraph& g) {
  int total = g.n;
  for (int d : g.degrees()) total += detail::slack_bits_for(d + 1);
  return total;
}

/// Minimum dominating set with per-vertex integer slack, padded with extra
/// slack bits so the instance occupies exactly `total_qubits`.
inline QuboInstance dominating_set_qubo(const WeightedGraph& g, int total_qubits,
                                        double penalty) {
  const auto deg = g.degrees();
  std::vector<int> bits(g.n);
  int used = g.n;
  for (int i = 0; i < g.n; ++i) {
    bits[i] = detail::slack_bits_for(deg[i] + 1);
    used += bits[i];
  }
  if (used > total_qubits)
    throw ConfigError("dominating_set_qubo: qubit budget too small");
  for (int extra = total_qubits - used, i = 0; extra > 0; --extra, i = (i + 1) % g.n)
    ++bits[i];

  std::vector<std::vector<int>> neighbors(g.n);
  for (const auto& e : g.edges) {
    neighbors[e.u].push_back(e.v);
    neighbors[e.v].push_back(e.u);
  }

  QuboInstance q;
  q.resize(total_qubits);
  for (int i = 0; i < g.n; ++i) q.add(i, i, 1.0);
  int slack_base = g.n;
  for (int i = 0; i < g.n; ++i) {
    std::vector<detail::LinearTerm> terms;
    terms.push_back({i, 1.0});
    for (int j : neighbors[i]) terms.push_back({j, 1.0});
    for (int b = 0; b < bits[i]; ++b)
      terms.push_back({slack_base + b, -static_cast<double>(1 << b)});
    detail::add_squared_penalty(q, terms, -1.0, penalty);
    slack_base += bits[i];
  }
  return q;
}

/// 3-city TSP on 9 qubits; variable 3*c + t means city c at tour position t.
inline QuboInstance tsp_qubo(const std::array<std::array<double, 3>, 3>& dist,
                             double penalty) {
  QuboInstance q;
  q.resize(9);
  const auto var = [](int city, int pos) { return 3 * city + pos; };
  for (int t = 0; t < 3; ++t) {
    const int t2 = (t + 1) % 3;
    for (int u = 0; u < 3; ++u)
      for (int v = 0; v < 3; ++v)
        if (u != v) q.add(var(u, t), var(v, t2), dist[u][v]);
  }
  for (int c = 0; c < 3; ++c) {
    std::vector<detail::LinearTerm> terms;
    for (int t = 0; t < 3; ++t) terms.push_back({var(c, t), 1.0});
    detail::add_squared_penalty(q, terms, -1.0, penalty);
  }
  for (int t = 0; t < 3; ++t) {
    std::vector<detail::LinearTerm> terms;
    for (int c = 0; c < 3; ++c) terms.push_back({var(c, t), 1.0});
    detail::add_squared_penalty(q, terms, -1.0, penalty);
  }
  return q;
}

/// 0/1 knapsack: maximize profits subject to sum w_i x_i <= capacity, encoded
/// with a binary slack register (capacity + slack = weight used).
inline QuboInstance knapsack_qubo(const std::vector<int>& weights,
                                  const std::vector<double>& profits,
                                  long long capacity, int total_qubits,
                                  double penalty) {
  const int k = static_cast<int>(weights.size());
  const int bits = total_qubits - k;
  if (bits < detail::slack_bits_for(static_cast<int>(capacity) + 1))
    throw ConfigError("knapsack_qubo: slack register too small");
  QuboInstance q;
  q.resize(total_qubits);
  for (int i = 0; i < k; ++i) q.add(i, i, -profits[i]);
  std::vector<detail::LinearTerm> terms;
  for (int i = 0; i < k; ++i) terms.push_back({i, static_cast<double>(weights[i])});
  for (int b = 0; b < bits; ++b)
    terms.push_back({k + b, static_cast<double>(1LL << b)});
  detail::add_squared_penalty(q, terms, -static_cast<double>(capacity), penalty);
  return q;
}

/// Number partitioning: minimize (sum_i a_i s_i)^2 with s_i = 2 x_i - 1.
inline QuboInstance number_partition_qubo(const std::vector<int>& numbers) {
  QuboInstance q;
  q.resize(static_cast<int>(numbers.size()));
  long long total = std::accumulate(numbers.begin(), numbers.end(), 0LL);
  std::vector<detail::LinearTerm> terms;
  for (std::size_t i = 0; i < numbers.size(); ++i)
    terms.push_back({static_cast<int>(i), 2.0 * numbers[i]});
  detail::add_squared_penalty(q, terms, -static_cast<double>(total), 1.0);
  return q;
}

/// Subset sum: minimize (sum_i a_i x_i - target)^2.
inline QuboInstance subset_sum_qubo(const std::vector<int>& numbers, long long target) {
  QuboInstance q;
  q.resize(static_cast<int>(numbers.size()));
  std::vector<detail::LinearTerm> terms;
  for (std::size_t i = 0; i < numbers.size(); ++i)
    terms.push_back({static_cast<int>(i), static_cast<double>(numbers[i])});
  detail::add_squared_penalty(q, terms, -static_cast<double>(target), 1.0);
  return q;
}

inline int set_cover_required_qubits(const std::vector<std::vector<int>>& sets,
                                     int universe) {
  std::vector<int> cover(universe, 0);
  for (const auto& s : sets)
    for (int e : s) ++cover[e];
  int total = static_cast<int>(sets.size());
  for (int c : cover) total += detail::slack_bits_for(c);
  return total;
}

/// Minimum set cover with per-element integer slack, padded to `total_qubits`.
inline QuboInstance set_cover_qubo(const std::vector<std::vector<int>>& sets,
                                   int universe, int total_qubits, double penalty) {
  const int m = static_cast<int>(sets.size());
  std::vector<std::vector<int>> covered_by(universe);
  for (int s = 0; s < m; ++s)
    for (int e : sets[s]) covered_by[e].push_back(s);
  std::vector<int> bits(universe);
  int used = m;
  for (int e = 0; e < universe; ++e) {
    bits[e] = detail::slack_bits_for(static_cast<int>(covered_by[e].size()));
    used += bits[e];
  }
  if (used > total_qubits) throw ConfigError("set_cover_qubo: qubit budget too small");
  for (int extra = total_qubits - used, e = 0; extra > 0; --extra, e = (e + 1) % universe)
    ++bits[e];

  QuboInstance q;
  q.resize(total_qubits);
  for (int s = 0; s < m; ++s) q.add(s, s, 1.0);
  int slack_base = m;
  for (int e = 0; e < universe; ++e) {
    std::vector<detail::LinearTerm> terms;
    for (int s : covered_by[e]) terms.push_back({s, 1.0});
    for (int b = 0; b < bits[e]; ++b)
      terms.push_back({slack_base + b, -static_cast<double>(1 << b)});
    detail::add_squared_penalty(q, terms, -1.0, penalty);
    slack_base += bits[e];
  }
  return q;
}

inline QuboInstance uniform_qubo(int n, Rng& rng) {
  QuboInstance q;
  q.resize(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) q.set(i, j, rng.uniform(-1.0, 1.0));
  return q;
}

inline QuboInstance sparse_uniform_qubo(int n, Rng& rng,
                                        double zero_prob = kSparseZeroProb) {
  QuboInstance q;
  q.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = rng.uniform(-1.0, 1.0);
      if (j > i && rng.bernoulli(zero_prob)) v = 0.0;
      q.set(i, j, v);
    }
  }
  return q;
}

namespace detail {

inline GraphMeta require_meta(ClassTag c, const std::optional<GraphMeta>& meta) {
  if (!meta)
    throw ConfigError(std::string("encode: class ") + std::string(class_name(c)) +
                      " requires graph metadata");
  return *meta;
}

/// Penalty weight: 2 * (max objective coefficient) * n. Large enough that any
/// violated integer constraint costs more than the entire objective range.
inline double penalty_weight(double max_obj_coef, int n) {
  return 2.0 * max_obj_coef * n;
}

}  // namespace detail

/// Generates a problem instance of the given class on exactly `n` qubits.
/// All randomness is a pure function of `seed`. See docs/formulations.md for
/// the per-class constructions.
inline EncodedProblem encode_detailed(ClassTag cls, int n,
                                      std::optional<GraphMeta> meta,
                                      std::uint64_t seed) {
  if (cls == ClassTag::TravelingSalesperson) {
    if (n != kTspSize) throw ConfigError("encode: tsp requires n = 9");
  } else if (n < kMinEncodeSize || n > kMaxEncodeSize) {
    throw ConfigError("encode: n must be in [5, 20]");
  }

  EncodedProblem out;
  Rng rng(seed);
  switch (cls) {
    case ClassTag::MaxCut:
    case ClassTag::WeightedMaxCut: {
      const GraphMeta gm = detail::require_meta(cls, meta);
      const bool weighted = cls == ClassTag::WeightedMaxCut;
      WeightedGraph g = generate_graph(n, gm.graph_type, gm.density,
                                       seed_combine(seed, 1), weighted);
      ensure_edge(g, rng, weighted);
      out.qubo = max_cut_qubo(g);
      out.extras.graph = std::move(g);
      out.extras.primary_vars = n;
      break;
    }
    case ClassTag::MinimumVertexCover:
    case ClassTag::MaximumIndependentSet: {
      const GraphMeta gm = detail::require_meta(cls, meta);
      WeightedGraph g = generate_graph(n, gm.graph_type, gm.density,
                                       seed_combine(seed, 1), false);
      ensure_edge(g, rng, false);
      const double penalty = detail::penalty_weight(1.0, n);
      out.qubo = cls == ClassTag::MinimumVertexCover
                     ? vertex_cover_qubo(g, penalty)
                     : independent_set_qubo(g, penalty);
      out.extras.graph = std::move(g);
      out.extras.primary_vars = n;
      break;
    }
    case ClassTag::DominatingSet: {
      const GraphMeta gm = detail::require_meta(cls, meta);
      WeightedGraph g;
      for (int v = n - 1; v >= 2; --v) {
        Rng vrng(seed_combine(seed, 2, v));
        WeightedGraph cand = generate_graph(v, gm.graph_type, gm.density,
                                            seed_combine(seed, 1, v), false);
        ensure_edge(cand, vrng, false);
        if (dominating_set_required_qubits(cand) <= n) {
          g = std::move(cand);
          break;
        }
      }
      if (g.n == 0) throw ConfigError("encode: no dominating-set layout fits n");
      out.qubo = dominating_set_qubo(g, n, detail::penalty_weight(1.0, n));
      out.extras.primary_vars = g.n;
      out.extras.graph = std::move(g);
      break;
    }
    case ClassTag::TravelingSalesperson: {
      const GraphMeta gm = detail::require_meta(cls, meta);
      WeightedGraph g = generate_graph(3, gm.graph_type, gm.density,
                                       seed_combine(seed, 1), true);
      ensure_edge(g, rng, true);
      std::array<std::array<double, 3>, 3> dist;
      for (auto& row : dist) row.fill(2.0);  // absent edges: far distance
      for (int c = 0; c < 3; ++c) dist[c][c] = 0.0;
      double max_d = 2.0;
      for (const auto& e : g.edges) {
        dist[e.u][e.v] = dist[e.v][e.u] = e.w;
      }
      for (int u = 0; u < 3; ++u)
        for (int v = u + 1; v < 3; ++v) max_d = std::max(max_d, dist[u][v]);
      out.qubo = tsp_qubo(dist, detail::penalty_weight(max_d, kTspSize));
      out.extras.primary_vars = 9;
      out.extras.graph = std::move(g);
      for (int u = 0; u < 3; ++u)
        for (int v = u + 1; v < 3; ++v) out.extras.real_values.push_back(dist[u][v]);
      break;
    }
    case ClassTag::Knapsack: {
      int items = 0;
      std::vector<int> weights;
      long long capacity = 0;
      for (int k = n - 1; k >= 1; --k) {
        Rng krng(seed_combine(seed, 3, k));
        std::vector<int> w(k);
        long long sum = 0;
        for (int i = 0; i < k; ++i) {
          w[i] = static_cast<int>(krng.uniform_int(1, 10));
          sum += w[i];
        }
        const long long cap = std::max<long long>(1, sum / 2);
        if (k + detail::slack_bits_for(static_cast<int>(cap) + 1) <= n) {
          items = k;
          weights = std::move(w);
          capacity = cap;
          break;
        }
      }
      if (items == 0) throw ConfigError("encode: no knapsack layout fits n");
      Rng krng(seed_combine(seed, 4, items));
      std::vector<double> profits(items);
      double max_p = 0.0;
      for (int i = 0; i < items; ++i) {
        profits[i] = krng.uniform(0.1, 1.0);
        max_p = std::max(max_p, profits[i]);
      }
      out.qubo = knapsack_qubo(weights, profits, capacity, n,
                               detail::penalty_weight(max_p, n));
      out.extras.primary_vars = items;
      out.extras.int_values = std::move(weights);
      out.extras.real_values = std::move(profits);
      out.extras.target = capacity;
      break;
    }
    case ClassTag::Uniform:
      out.qubo = uniform_qubo(n, rng);
      out.extras.primary_vars = n;
      break;
    case ClassTag::SparseUniform:
      out.qubo = sparse_uniform_qubo(n, rng);
      out.extras.primary_vars = n;
      break;
    case ClassTag::NumberPartition: {
      std::vector<int> numbers(n);
      for (int i = 0; i < n; ++i) numbers[i] = static_cast<int>(rng.uniform_int(1, 50));
      out.qubo = number_partition_qubo(numbers);
      out.extras.primary_vars = n;
      out.extras.int_values = std::move(numbers);
      break;
    }
    case ClassTag::SubsetSum: {
      std::vector<int> numbers(n);
      for (int i = 0; i < n; ++i) numbers[i] = static_cast<int>(rng.uniform_int(1, 50));
      long long target = 0;
      for (int i = 0; i < n; ++i)
        if (rng.bernoulli(0.5)) target += numbers[i];
      out.qubo = subset_sum_qubo(numbers, target);
      out.extras.primary_vars = n;
      out.extras.int_values = std::move(numbers);
      out.extras.target = target;
      break;
    }
    case ClassTag::SetCover: {
      int chosen_m = 0;
      std::vector<std::vector<int>> sets;
      int universe = 0;
      for (int m = n - 1; m >= 2; --m) {
        Rng mrng(seed_combine(seed, 5, m));
        const int u = m;
        std::vector<std::vector<int>> cand(m);
        std::vector<int> cover(u, 0);
        for (int s = 0; s < m; ++s) {
          for (int e = 0; e < u; ++e) {
            if (mrng.bernoulli(0.4)) {
              cand[s].push_back(e);
              ++cover[e];
            }
          }
        }
        for (int e = 0; e < u; ++e) {
          if (cover[e] == 0) {
            const int s = static_cast<int>(mrng.uniform_int(0, m - 1));
            cand[s].push_back(e);
            ++cover[e];
          }
        }
        if (set_cover_required_qubits(cand, u) <= n) {
          chosen_m = m;
          sets = std::move(cand);
          universe = u;
          break;
        }
      }
      if (chosen_m == 0) throw ConfigError("encode: no set-cover layout fits n");
      out.qubo = set_cover_qubo(sets, universe, n, detail::penalty_weight(1.0, n));
      out.extras.primary_vars = chosen_m;
      out.extras.universe = universe;
      out.extras.sets = std::move(sets);
      break;
    }
  }
  out.qubo.class_tag = cls;
  out.qubo.graph_meta = is_graph_class(cls) ? meta : std::nullopt;
  out.qubo.seed = seed;
  out.qubo.n = n;
  return out;
}

inline QuboInstance encode(ClassTag cls, int n, std::optional<GraphMeta> meta,
                           std::uint64_t seed) {
  return encode_detailed(cls, n, meta, seed).qubo;
}

}  // namespace qaoap
