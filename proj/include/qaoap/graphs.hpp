#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "qaoap/common.hpp"
#include "qaoap/qubo.hpp"
#include "qaoap/rng.hpp"

namespace qaoap {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

struct WeightedGraph {
  int n = 0;
  std::vector<WeightedEdge> edges;  // u < v, no duplicates

  std::vector<int> degrees() const {
    std::vector<int> deg(n, 0);
    for (const auto& e : edges) {
      ++deg[e.u];
      ++deg[e.v];
    }
    return deg;
  }
};

/// Random graph on n >= 2 vertices.
///  - ErdosRenyi: each pair is an edge independently with probability `density`.
///  - BarabasiAlbert: preferential attachment with m = clamp(round(d*(n-1)/2), 1, n-1).
///  - CompleteBipartite: left partition size clamp(round(d*n), 1, n-1), all cross edges.
/// Weights are U[0.1, 1.0] when `weighted`, otherwise 1.0, drawn in edge order.
inline WeightedGraph generate_graph(int n, GraphType type, double density,
                                    std::uint64_t seed, bool weighted) {
  if (n < 2) throw ConfigError("generate_graph: n must be >= 2");
  if (!(density > 0.0) || density > 1.0)
    throw ConfigError("generate_graph: density must be in (0, 1]");
  Rng rng(seed);
  WeightedGraph g;
  g.n = n;
  switch (type) {
    case GraphType::ErdosRenyi: {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (rng.uniform01() < density) g.edges.push_back({i, j, 1.0});
      break;
    }
    case GraphType::BarabasiAlbert: {
      int m = static_cast<int>(std::lround(density * (n - 1) / 2.0));
      m = std::clamp(m, 1, n - 1);
      std::vector<int> deg(n, 0);
      // Start from m isolated seed vertices; each new vertex attaches to
      // min(m, existing) distinct targets, degree-proportional (uniform while
      // the graph has no edges yet).
      for (int v = m; v < n; ++v) {
        const int attach = std::min(m, v);
        std::vector<int> targets;
        while (static_cast<int>(targets.size()) < attach) {
          long long total = 0;
          for (int u = 0; u < v; ++u) total += deg[u];
          int pick;
          if (total == 0) {
            pick = static_cast<int>(rng.uniform_int(0, v - 1));
          } else {
            const long long r = rng.uniform_int(0, total - 1);
            long long acc = 0;
            pick = v - 1;
            for (int u = 0; u < v; ++u) {
              acc += deg[u];
              if (r < acc) {
                pick = u;
                break;
              }
            }
          }
          if (std::find(targets.begin(), targets.end(), pick) == targets.end())
            targets.push_back(pick);
        }
        for (int t : targets) {
          g.edges.push_back({std::min(t, v), std::max(t, v), 1.0});
          ++deg[t];
          ++deg[v];
        }
      }
      std::sort(g.edges.begin(), g.edges.end(), [](const auto& a, const auto& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
      });
      break;
    }
    case GraphType::CompleteBipartite: {
      int left = static_cast<int>(std::lround(density * n));
      left = std::clamp(left, 1, n - 1);
      for (int i = 0; i < left; ++i)
        for (int j = left; j < n; ++j) g.edges.push_back({i, j, 1.0});
      break;
    }
  }
  if (weighted) {
    for (auto& e : g.edges) e.w = rng.uniform(0.1, 1.0);
  }
  return g;
}

/// Adds one uniformly random edge when the graph came out empty (possible for
/// sparse Erdos-Renyi draws). Problem encodings require a non-degenerate QUBO.
inline void ensure_edge(WeightedGraph& g, Rng& rng, bool weighted) {
  if (!g.edges.empty()) return;
  const int u = static_cast<int>(rng.uniform_int(0, g.n - 2));
  const int v = static_cast<int>(rng.uniform_int(u + 1, g.n - 1));
  g.edges.push_back({u, v, weighted ? rng.uniform(0.1, 1.0) : 1.0});
}

}  // namespace qaoap
