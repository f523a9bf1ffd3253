#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "qaoap/io.hpp"
#include "qaoap/ising.hpp"
#include "qaoap/parallel.hpp"
#include "qaoap/problems.hpp"
#include "qaoap/simulator.hpp"

namespace qaoap {

/// Graph cells per (class, size): 3 graph types x 5 densities. Non-graph
/// classes draw the same number of instances per size so per-class counts
/// match cell for cell.
inline constexpr int kCellsPerSize = 15;

struct GridSpec {
  std::vector<int> sizes;
  std::vector<double> deltas;
  std::vector<int> layers;
  int instances_per_cell = 1;
  std::vector<ClassTag> classes{kAllClasses.begin(), kAllClasses.end()};
  std::string split_tag = "train";
};

namespace presets {

inline std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

inline std::vector<int> decades(int hi) {
  std::vector<int> out = {1};
  for (int p = 10; p <= hi; p += 10) out.push_back(p);
  return out;
}

inline GridSpec paper_train() {
  return {range(5, 15), {0.3, 0.5}, decades(100), 50,
          {kAllClasses.begin(), kAllClasses.end()}, "train"};
}

inline GridSpec paper_validation() {
  auto layers = decades(100);
  layers.insert(layers.end(), {150, 250, 500});
  return {range(5, 20), {0.3, 0.5}, layers, 10,
          {kAllClasses.begin(), kAllClasses.end()}, "validation"};
}

inline GridSpec paper_finetune() {
  auto spec = paper_validation();
  spec.instances_per_cell = 1;
  spec.split_tag = "finetune";
  return spec;
}

inline GridSpec desk_train() {
  return {range(5, 12), {0.3, 0.5}, decades(50), 10,
          {kAllClasses.begin(), kAllClasses.end()}, "train"};
}

inline GridSpec desk_validation() {
  return {range(5, 14), {0.3, 0.5}, decades(100), 4,
          {kAllClasses.begin(), kAllClasses.end()}, "validation"};
}

inline GridSpec desk_finetune() {
  return {range(5, 14), {0.3, 0.5}, {1, 20, 50, 80, 100}, 1,
          {kAllClasses.begin(), kAllClasses.end()}, "finetune"};
}

}  // namespace presets

inline GridSpec grid_spec_from_name(const std::string& name) {
  if (name == "paper-train") return presets::paper_train();
  if (name == "paper-validation") return presets::paper_validation();
  if (name == "paper-finetune") return presets::paper_finetune();
  if (name == "desk-train") return presets::desk_train();
  if (name == "desk-validation") return presets::desk_validation();
  if (name == "desk-finetune") return presets::desk_finetune();
  throw ConfigError("unknown grid preset: " + name);
}

inline nlohmann::json grid_spec_to_json(const GridSpec& spec) {
  nlohmann::json j;
  j["sizes"] = spec.sizes;
  j["deltas"] = spec.deltas;
  j["layers"] = spec.layers;
  j["instances_per_cell"] = spec.instances_per_cell;
  std::vector<std::string> names;
  for (ClassTag c : spec.classes) names.emplace_back(class_name(c));
  j["classes"] = names;
  j["split_tag"] = spec.split_tag;
  return j;
}

inline GridSpec grid_spec_from_json(const nlohmann::json& j) {
  GridSpec spec;
  spec.sizes = j.at("sizes").get<std::vector<int>>();
  spec.deltas = j.at("deltas").get<std::vector<double>>();
  spec.layers = j.at("layers").get<std::vector<int>>();
  spec.instances_per_cell = j.at("instances_per_cell").get<int>();
  if (j.contains("classes")) {
    spec.classes.clear();
    for (const auto& name : j.at("classes")) {
      const auto c = class_from_name(name.get<std::string>());
      if (!c) throw ConfigError("unknown class in spec: " + name.get<std::string>());
      spec.classes.push_back(*c);
    }
  }
  if (j.contains("split_tag")) spec.split_tag = j.at("split_tag").get<std::string>();
  if (spec.sizes.empty() || spec.deltas.empty() || spec.layers.empty() ||
      spec.instances_per_cell < 1 || spec.classes.empty())
    throw ConfigError("grid spec has empty dimensions");
  return spec;
}

/// Instances a class contributes at one size (0 when absent at that size).
inline std::uint64_t cell_instances(const GridSpec& spec, ClassTag cls, int n) {
  if (cls == ClassTag::TravelingSalesperson && n != kTspSize) return 0;
  return static_cast<std::uint64_t>(kCellsPerSize) * spec.instances_per_cell;
}

inline std::uint64_t instance_count(const GridSpec& spec) {
  std::uint64_t total = 0;
  for (ClassTag cls : spec.classes)
    for (int n : spec.sizes) total += cell_instances(spec, cls, n);
  return total;
}

inline std::uint64_t datapoint_count(const GridSpec& spec) {
  return instance_count(spec) * spec.deltas.size() * spec.layers.size();
}

struct LabeledSample {
  std::string instance_id;
  int n = 0;
  ClassTag class_tag = ClassTag::Uniform;
  double delta = 0.0;
  int p = 0;
  double label = 0.0;
};

struct InstanceRecord {
  std::string id;
  QuboInstance qubo;
};

struct GenerateStats {
  std::uint64_t instances = 0;
  std::uint64_t records = 0;
  std::uint64_t skipped = 0;
};

namespace detail {

struct InstanceRequest {
  ClassTag cls;
  int n;
  std::optional<GraphMeta> meta;
  std::uint64_t seed;
  std::string id;
};

inline std::vector<InstanceRequest> enumerate_instances(const GridSpec& spec,
                                                        std::uint64_t master_seed) {
  std::vector<InstanceRequest> out;
  const std::uint64_t split_hash = hash_str(spec.split_tag);
  for (ClassTag cls : spec.classes) {
    for (int n : spec.sizes) {
      if (cell_instances(spec, cls, n) == 0) continue;
      for (int cell = 0; cell < kCellsPerSize; ++cell) {
        std::optional<GraphMeta> meta;
        // Graph classes sweep the type x density grid; non-graph classes
        // reuse the cell index purely as a seed dimension.
        if (is_graph_class(cls))
          meta = GraphMeta{kAllGraphTypes[cell / 5], kGraphDensities[cell % 5]};
        for (int i = 0; i < spec.instances_per_cell; ++i) {
          InstanceRequest req;
          req.cls = cls;
          req.n = n;
          req.meta = meta;
          req.seed = seed_combine(master_seed, split_hash,
                                  static_cast<std::uint64_t>(cls), n, cell, i);
          char buf[96];
          std::snprintf(buf, sizeof buf, "%s_%s_n%02d_c%02d_i%03d",
                        spec.split_tag.c_str(),
                        std::string(class_name(cls)).c_str(), n, cell, i);
          req.id = buf;
          out.push_back(std::move(req));
        }
      }
    }
  }
  return out;
}

struct InstanceResult {
  bool ok = false;
  std::string error;
  std::string instance_json;
  std::vector<double> labels;  // deltas-major, layers-minor
};

}  // namespace detail

/// Generates instances, labels every (delta, p) grid point by exact
/// simulation and writes instances.jsonl / samples.jsonl / manifest.json.
/// Failed instances are skipped and counted, never silently dropped.
inline GenerateStats generate_split(const GridSpec& spec, std::uint64_t master_seed,
                                    const SimOptions& sim, int threads,
                                    const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto instances_out = open_output(out_dir / "instances.jsonl");
  auto samples_out = open_output(out_dir / "samples.jsonl");

  const auto requests = detail::enumerate_instances(spec, master_seed);
  GenerateStats stats;
  const std::size_t chunk = 512;
  std::vector<detail::InstanceResult> results(std::min(chunk, requests.size()));
  for (std::size_t base = 0; base < requests.size(); base += chunk) {
    const std::size_t count = std::min(chunk, requests.size() - base);
    parallel_for(count, threads, [&](std::size_t k) {
      const auto& req = requests[base + k];
      detail::InstanceResult& res = results[k];
      res = {};
      try {
        const QuboInstance qubo = encode(req.cls, req.n, req.meta, req.seed);
        const IsingModel model = normalize(to_ising(qubo));
        const auto costs = cost_vector(model);
        const auto opt = optimal_set(costs);
        res.labels.reserve(spec.deltas.size() * spec.layers.size());
        for (double delta : spec.deltas) {
          for (int p : spec.layers) {
            SimOptions local = sim;
            local.shot_seed = seed_combine(req.seed, static_cast<std::uint64_t>(p),
                                           static_cast<std::uint64_t>(delta * 1000));
            res.labels.push_back(success_probability_from_costs(
                costs, opt, model.n, {delta, delta, p}, local));
          }
        }
        nlohmann::json j = qubo_to_json(qubo);
        j["id"] = req.id;
        res.instance_json = j.dump();
        res.ok = true;
      } catch (const std::exception& e) {
        res.error = e.what();
      }
    });
    for (std::size_t k = 0; k < count; ++k) {
      const auto& req = requests[base + k];
      const auto& res = results[k];
      if (!res.ok) {
        ++stats.skipped;
        std::fprintf(stderr, "skip %s: %s\n", req.id.c_str(), res.error.c_str());
        continue;
      }
      instances_out << res.instance_json << '\n';
      ++stats.instances;
      std::size_t li = 0;
      for (double delta : spec.deltas) {
        for (int p : spec.layers) {
          samples_out << "{\"instance_id\":\"" << req.id << "\",\"class\":\""
                      << class_name(req.cls) << "\",\"n\":" << req.n
                      << ",\"delta\":" << fmt_double(delta) << ",\"p\":" << p
                      << ",\"label\":" << fmt_double(res.labels[li++]) << "}\n";
          ++stats.records;
        }
      }
    }
  }

  nlohmann::json manifest;
  manifest["spec"] = grid_spec_to_json(spec);
  manifest["master_seed"] = master_seed;
  manifest["instances"] = stats.instances;
  manifest["records"] = stats.records;
  manifest["skipped"] = stats.skipped;
  manifest["shots"] = sim.shots;
  manifest["version"] = kVersion;
  manifest["generator"] = {{"weight_range", {0.1, 1.0}},
                           {"sparse_zero_prob", kSparseZeroProb},
                           {"number_range", {1, 50}},
                           {"knapsack_weight_range", {1, 10}},
                           {"features_on", "normalized_ising"}};
  auto manifest_out = open_output(out_dir / "manifest.json");
  manifest_out << manifest.dump(2) << '\n';
  return stats;
}

struct DataSet {
  std::vector<InstanceRecord> instances;
  std::unordered_map<std::string, std::size_t> instance_index;  // id -> slot
  std::vector<LabeledSample> samples;
  std::map<int, std::vector<std::size_t>> by_n;        // sample indices
  std::map<int, std::vector<std::size_t>> by_p;
  std::map<int, std::vector<std::size_t>> by_class;    // key: ClassTag as int

  void build_indexes() {
    by_n.clear();
    by_p.clear();
    by_class.clear();
    for (std::size_t i = 0; i < samples.size(); ++i) {
      by_n[samples[i].n].push_back(i);
      by_p[samples[i].p].push_back(i);
      by_class[static_cast<int>(samples[i].class_tag)].push_back(i);
    }
  }
};

inline LabeledSample sample_from_json(const nlohmann::json& j) {
  LabeledSample s;
  s.instance_id = j.at("instance_id").get<std::string>();
  const auto cls = class_from_name(j.at("class").get<std::string>());
  if (!cls) throw DataError("unknown class");
  s.class_tag = *cls;
  s.n = j.at("n").get<int>();
  s.delta = j.at("delta").get<double>();
  s.p = j.at("p").get<int>();
  s.label = j.at("label").get<double>();
  if (s.label < 0.0 || s.label > 1.0) throw DataError("label outside [0,1]");
  return s;
}

/// Loads instances.jsonl + samples.jsonl from a split directory. Schema
/// violations report the offending file and 1-based line number.
inline DataSet load_split(const std::filesystem::path& dir) {
  DataSet ds;
  const auto instances_path = dir / "instances.jsonl";
  const auto samples_path = dir / "samples.jsonl";
  for_each_line(instances_path, [&](std::size_t lineno, const std::string& line) {
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      InstanceRecord rec;
      rec.id = j.at("id").get<std::string>();
      rec.qubo = qubo_from_json(j);
      if (ds.instance_index.count(rec.id))
        throw DataError("duplicate instance id " + rec.id);
      ds.instance_index[rec.id] = ds.instances.size();
      ds.instances.push_back(std::move(rec));
    } catch (const std::exception& e) {
      throw DataError(instances_path.string() + ":" + std::to_string(lineno) +
                      ": " + e.what());
    }
  });
  std::unordered_set<std::string> seen_keys;
  for_each_line(samples_path, [&](std::size_t lineno, const std::string& line) {
    try {
      const LabeledSample s = sample_from_json(nlohmann::json::parse(line));
      if (!ds.instance_index.count(s.instance_id))
        throw DataError("sample references unknown instance " + s.instance_id);
      std::string key = s.instance_id + "|" + fmt_double(s.delta) + "|" +
                        std::to_string(s.p);
      if (!seen_keys.insert(std::move(key)).second)
        throw DataError("duplicate (instance, delta, p) sample");
      ds.samples.push_back(s);
    } catch (const std::exception& e) {
      throw DataError(samples_path.string() + ":" + std::to_string(lineno) +
                      ": " + e.what());
    }
  });
  ds.build_indexes();
  return ds;
}

}  // namespace qaoap
