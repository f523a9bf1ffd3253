#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qaoap/common.hpp"

namespace qaoap {

/// The twelve supported problem classes. The first six are graph-based.
enum class ClassTag {
  MaxCut,
  WeightedMaxCut,
  MinimumVertexCover,
  MaximumIndependentSet,
  DominatingSet,
  TravelingSalesperson,
  Knapsack,
  Uniform,
  SparseUniform,
  NumberPartition,
  SubsetSum,
  SetCover,
};

inline constexpr int kClassCount = 12;

inline constexpr std::array<ClassTag, kClassCount> kAllClasses = {
    ClassTag::MaxCut,        ClassTag::WeightedMaxCut,
    ClassTag::MinimumVertexCover, ClassTag::MaximumIndependentSet,
    ClassTag::DominatingSet, ClassTag::TravelingSalesperson,
    ClassTag::Knapsack,      ClassTag::Uniform,
    ClassTag::SparseUniform, ClassTag::NumberPartition,
    ClassTag::SubsetSum,     ClassTag::SetCover,
};

constexpr bool is_graph_class(ClassTag c) {
  switch (c) {
    case ClassTag::MaxCut:
    case ClassTag::WeightedMaxCut:
    case ClassTag::MinimumVertexCover:
    case ClassTag::MaximumIndependentSet:
    case ClassTag::DominatingSet:
    case ClassTag::TravelingSalesperson:
      return true;
    default:
      return false;
  }
}

constexpr std::string_view class_name(ClassTag c) {
  switch (c) {
    case ClassTag::MaxCut: return "max_cut";
    case ClassTag::WeightedMaxCut: return "weighted_max_cut";
    case ClassTag::MinimumVertexCover: return "min_vertex_cover";
    case ClassTag::MaximumIndependentSet: return "max_independent_set";
    case ClassTag::DominatingSet: return "dominating_set";
    case ClassTag::TravelingSalesperson: return "tsp";
    case ClassTag::Knapsack: return "knapsack";
    case ClassTag::Uniform: return "uniform";
    case ClassTag::SparseUniform: return "sparse_uniform";
    case ClassTag::NumberPartition: return "number_partition";
    case ClassTag::SubsetSum: return "subset_sum";
    case ClassTag::SetCover: return "set_cover";
  }
  return "unknown";
}

inline std::optional<ClassTag> class_from_name(std::string_view name) {
  for (ClassTag c : kAllClasses)
    if (class_name(c) == name) return c;
  return std::nullopt;
}

enum class GraphType { ErdosRenyi, BarabasiAlbert, CompleteBipartite };

inline constexpr std::array<GraphType, 3> kAllGraphTypes = {
    GraphType::ErdosRenyi, GraphType::BarabasiAlbert,
    GraphType::CompleteBipartite};

inline constexpr std::array<double, 5> kGraphDensities = {0.1, 0.25, 0.5, 0.75,
                                                          0.9};

constexpr std::string_view graph_type_name(GraphType t) {
  switch (t) {
    case GraphType::ErdosRenyi: return "erdos_renyi";
    case GraphType::BarabasiAlbert: return "barabasi_albert";
    case GraphType::CompleteBipartite: return "complete_bipartite";
  }
  return "unknown";
}

inline std::optional<GraphType> graph_type_from_name(std::string_view name) {
  for (GraphType t : kAllGraphTypes)
    if (graph_type_name(t) == name) return t;
  return std::nullopt;
}

struct GraphMeta {
  GraphType graph_type = GraphType::ErdosRenyi;
  double density = 0.5;
};

/// QUBO instance with upper-triangular coefficient storage: for i <= j,
/// q(i, j) is the coefficient of x_i * x_j; the diagonal holds linear terms.
struct QuboInstance {
  int n = 0;
  std::vector<double> upper;  // row-major upper triangle, n*(n+1)/2 entries
  ClassTag class_tag = ClassTag::Uniform;
  std::optional<GraphMeta> graph_meta;
  std::uint64_t seed = 0;

  static std::size_t upper_size(int n) {
    return static_cast<std::size_t>(n) * (n + 1) / 2;
  }

  void resize(int nvars) {
    n = nvars;
    upper.assign(upper_size(nvars), 0.0);
  }

  std::size_t index(int i, int j) const {
    // caller guarantees 0 <= i <= j < n
    return static_cast<std::size_t>(i) * n - static_cast<std::size_t>(i) * (i - 1) / 2 +
           static_cast<std::size_t>(j - i);
  }

  double q(int i, int j) const { return upper[index(i, j)]; }

  void add(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    upper[index(i, j)] += v;
  }

  void set(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    upper[index(i, j)] = v;
  }
};

/// Objective value sum_{i<=j} q_ij x_i x_j for the assignment encoded by
/// `bits` (bit i = x_i, little-endian).
inline double qubo_cost(const QuboInstance& q, std::uint32_t bits) {
  double total = 0.0;
  for (int i = 0; i < q.n; ++i) {
    if (((bits >> i) & 1u) == 0) continue;
    for (int j = i; j < q.n; ++j) {
      if ((bits >> j) & 1u) total += q.q(i, j);
    }
  }
  return total;
}

inline nlohmann::json qubo_to_json(const QuboInstance& inst) {
  nlohmann::json j;
  j["class"] = std::string(class_name(inst.class_tag));
  j["n"] = inst.n;
  j["seed"] = inst.seed;
  if (inst.graph_meta) {
    j["graph_type"] = std::string(graph_type_name(inst.graph_meta->graph_type));
    j["density"] = inst.graph_meta->density;
  } else {
    j["graph_type"] = nullptr;
    j["density"] = nullptr;
  }
  nlohmann::json triples = nlohmann::json::array();
  for (int i = 0; i < inst.n; ++i) {
    for (int k = i; k < inst.n; ++k) {
      const double v = inst.q(i, k);
      if (v != 0.0) triples.push_back({i, k, v});
    }
  }
  j["q"] = std::move(triples);
  return j;
}

inline QuboInstance qubo_from_json(const nlohmann::json& j) {
  QuboInstance inst;
  const auto cls = class_from_name(j.at("class").get<std::string>());
  if (!cls) throw DataError("unknown problem class: " + j.at("class").get<std::string>());
  inst.class_tag = *cls;
  inst.resize(j.at("n").get<int>());
  if (inst.n < 1) throw DataError("instance has n < 1");
  inst.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("graph_type") && !j.at("graph_type").is_null()) {
    const auto gt = graph_type_from_name(j.at("graph_type").get<std::string>());
    if (!gt) throw DataError("unknown graph type");
    inst.graph_meta = GraphMeta{*gt, j.at("density").get<double>()};
  }
  for (const auto& t : j.at("q")) {
    const int a = t.at(0).get<int>();
    const int b = t.at(1).get<int>();
    if (a > b || a < 0 || b >= inst.n) throw DataError("bad coefficient triple");
    inst.set(a, b, t.at(2).get<double>());
  }
  return inst;
}

}  // namespace qaoap
