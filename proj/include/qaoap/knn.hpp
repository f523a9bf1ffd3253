#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "qaoap/common.hpp"
#include "qaoap/features.hpp"
#include "qaoap/parallel.hpp"

namespace qaoap {

/// Distance-weighted k-nearest-neighbors regressor over standardized
/// 11-dimensional feature vectors. Exact brute-force search, no index.
struct KnnModel {
  int k = 10;
  std::vector<double> store;   // standardized rows, row-major N x kDim
  std::vector<double> labels;  // size N
  std::array<double, FeatureVector::kDim> mean{};
  std::array<double, FeatureVector::kDim> stdev{};

  std::size_t size() const { return labels.size(); }

  std::array<double, FeatureVector::kDim> standardize(
      const std::array<double, FeatureVector::kDim>& raw) const {
    std::array<double, FeatureVector::kDim> out;
    for (int c = 0; c < FeatureVector::kDim; ++c)
      out[c] = (raw[c] - mean[c]) / stdev[c];
    return out;
  }
};

inline KnnModel knn_fit(const std::vector<std::array<double, FeatureVector::kDim>>& rows,
                        const std::vector<double>& labels, int k = 10) {
  if (rows.size() != labels.size()) throw ConfigError("knn_fit: rows/labels mismatch");
  if (static_cast<int>(rows.size()) < k)
    throw ConfigError("knn_fit: fewer samples than neighbors");
  KnnModel m;
  m.k = k;
  const std::size_t count = rows.size();
  for (int c = 0; c < FeatureVector::kDim; ++c) {
    double sum = 0.0;
    for (const auto& r : rows) sum += r[c];
    m.mean[c] = sum / count;
    double sq = 0.0;
    for (const auto& r : rows) sq += (r[c] - m.mean[c]) * (r[c] - m.mean[c]);
    const double sd = std::sqrt(sq / count);
    m.stdev[c] = sd > 0.0 ? sd : 1.0;  // constant columns contribute nothing
  }
  m.store.resize(count * FeatureVector::kDim);
  for (std::size_t r = 0; r < count; ++r) {
    const auto z = m.standardize(rows[r]);
    std::copy(z.begin(), z.end(), m.store.begin() + r * FeatureVector::kDim);
  }
  m.labels = labels;
  return m;
}

namespace detail {

/// Prediction from (squared distance, row) candidates: exact matches short-
/// circuit to the mean zero-distance label; otherwise 1/d weighting over the
/// k nearest, ties broken by row index.
inline double knn_combine(std::vector<std::pair<double, std::size_t>>& cands,
                          const std::vector<double>& labels, int k) {
  std::sort(cands.begin(), cands.end());
  if (!cands.empty() && cands.front().first <= 0.0) {
    double sum = 0.0;
    int count = 0;
    for (const auto& [d2, row] : cands) {
      if (d2 > 0.0) break;
      sum += labels[row];
      ++count;
    }
    return sum / count;
  }
  const int take = std::min<int>(k, static_cast<int>(cands.size()));
  double wsum = 0.0, lsum = 0.0;
  for (int i = 0; i < take; ++i) {
    const double w = 1.0 / std::sqrt(cands[i].first);
    wsum += w;
    lsum += w * labels[cands[i].second];
  }
  return std::clamp(lsum / wsum, 0.0, 1.0);
}

}  // namespace detail

inline double knn_predict(const KnnModel& m,
                          const std::array<double, FeatureVector::kDim>& raw) {
  if (m.size() == 0) throw ConfigError("knn_predict: empty model");
  const auto q = m.standardize(raw);
  std::vector<std::pair<double, std::size_t>> cands(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    const double* row = m.store.data() + r * FeatureVector::kDim;
    double d2 = 0.0;
    for (int c = 0; c < FeatureVector::kDim; ++c) {
      const double d = q[c] - row[c];
      d2 += d * d;
    }
    cands[r] = {d2, r};
  }
  return detail::knn_combine(cands, m.labels, m.k);
}

/// Batch prediction exploiting the dataset grid structure: when the store is
/// organized as groups of `group_records` rows sharing their first 9 columns
/// (one instance, all its (delta, p) records) the structural distance is
/// computed once per group and only a provably sufficient candidate shortlist
/// (groups with D <= k-th smallest D) is scanned in full. Produces bit-equal
/// results to knn_predict; falls back to it when the layout does not hold.
inline std::vector<double> knn_predict_batch(
    const KnnModel& m, const std::vector<std::array<double, FeatureVector::kDim>>& raw,
    int group_records, int threads) {
  constexpr int kDim = FeatureVector::kDim;
  constexpr int kStruct = kDim - 2;
  std::vector<double> out(raw.size());
  const std::size_t rows = m.size();
  bool grouped = group_records > 0 && rows % group_records == 0 &&
                 rows / group_records >= static_cast<std::size_t>(m.k);
  // Layout check: rows of a group share their structural prefix, and every
  // group carries the same (delta, p) column sequence as the first one.
  for (std::size_t r = 0; grouped && r < rows; ++r) {
    const std::size_t group_head = (r / group_records) * group_records;
    for (int c = 0; c < kStruct; ++c)
      if (m.store[r * kDim + c] != m.store[group_head * kDim + c]) {
        grouped = false;
        break;
      }
    const std::size_t slot = r - group_head;
    for (int c = kStruct; grouped && c < kDim; ++c)
      if (m.store[r * kDim + c] != m.store[slot * kDim + c]) grouped = false;
  }
  if (!grouped) {
    parallel_for(raw.size(), threads,
                 [&](std::size_t i) { out[i] = knn_predict(m, raw[i]); });
    return out;
  }

  const std::size_t groups = rows / group_records;
  parallel_for(raw.size(), threads, [&](std::size_t i) {
    const auto q = m.standardize(raw[i]);
    std::vector<double> dist(groups);
    for (std::size_t g = 0; g < groups; ++g) {
      const double* row = m.store.data() + g * group_records * kDim;
      double d2 = 0.0;
      for (int c = 0; c < kStruct; ++c) {
        const double d = q[c] - row[c];
        d2 += d * d;
      }
      dist[g] = d2;
    }
    std::vector<double> sorted = dist;
    const std::size_t kth = std::min<std::size_t>(m.k, groups) - 1;
    std::nth_element(sorted.begin(), sorted.begin() + kth, sorted.end());
    const double cutoff = sorted[kth];
    std::vector<std::pair<double, std::size_t>> cands;
    for (std::size_t g = 0; g < groups; ++g) {
      if (dist[g] > cutoff) continue;
      for (int r = 0; r < group_records; ++r) {
        const std::size_t row = g * group_records + r;
        const double* p = m.store.data() + row * kDim;
        double d2 = dist[g];
        for (int c = kStruct; c < kDim; ++c) {
          const double d = q[c] - p[c];
          d2 += d * d;
        }
        cands.push_back({d2, row});
      }
    }
    out[i] = detail::knn_combine(cands, m.labels, m.k);
  });
  return out;
}

inline void save_knn(const std::filesystem::path& path, const KnnModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  const char magic[8] = {'Q', 'A', 'P', 'K', 'N', 'N', '0', '1'};
  out.write(magic, 8);
  const std::uint64_t count = m.size();
  const std::uint64_t k = m.k;
  out.write(reinterpret_cast<const char*>(&k), 8);
  out.write(reinterpret_cast<const char*>(&count), 8);
  out.write(reinterpret_cast<const char*>(m.mean.data()), sizeof m.mean);
  out.write(reinterpret_cast<const char*>(m.stdev.data()), sizeof m.stdev);
  out.write(reinterpret_cast<const char*>(m.store.data()),
            static_cast<std::streamsize>(m.store.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(m.labels.data()),
            static_cast<std::streamsize>(m.labels.size() * sizeof(double)));
}

inline KnnModel load_knn(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, "QAPKNN01", 8) != 0)
    throw DataError("bad knn model file: " + path.string());
  std::uint64_t k = 0, count = 0;
  in.read(reinterpret_cast<char*>(&k), 8);
  in.read(reinterpret_cast<char*>(&count), 8);
  KnnModel m;
  m.k = static_cast<int>(k);
  in.read(reinterpret_cast<char*>(m.mean.data()), sizeof m.mean);
  in.read(reinterpret_cast<char*>(m.stdev.data()), sizeof m.stdev);
  m.store.resize(count * FeatureVector::kDim);
  m.labels.resize(count);
  in.read(reinterpret_cast<char*>(m.store.data()),
          static_cast<std::streamsize>(m.store.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(m.labels.data()),
          static_cast<std::streamsize>(m.labels.size() * sizeof(double)));
  if (!in) throw DataError("truncated knn model file: " + path.string());
  return m;
}

}  // namespace qaoap
