#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdio>
#include <vector>

#include "qaoap/common.hpp"
#include "qaoap/ising.hpp"

namespace qaoap {

/// Structural statistics of the (normalized) Ising matrix. Off-diagonal
/// moments come in two conventions: `full` divides by n(n-1) over all i != j
/// entries (zeros included); `nz` averages over the nonzero couplings only.
struct StructuralStats {
  int num_edges = 0;
  double density = 0.0;
  double avg_degree = 0.0;
  double diag_mean = 0.0;
  double diag_std = 0.0;
  double off_mean_full = 0.0;
  double off_std_full = 0.0;
  double off_mean_nz = 0.0;
  double off_std_nz = 0.0;
};

inline StructuralStats structural_stats(const IsingModel& m) {
  if (m.n < 2) throw ConfigError("structural_stats: n must be >= 2");
  StructuralStats s;
  s.num_edges = static_cast<int>(m.couplings.size());
  const double pairs = static_cast<double>(m.n) * (m.n - 1) / 2.0;
  s.density = s.num_edges / pairs;
  s.avg_degree = 2.0 * s.num_edges / m.n;

  double sum = 0.0, sq = 0.0;
  for (double h : m.fields) {
    sum += std::abs(h);
    sq += h * h;
  }
  s.diag_mean = sum / m.n;
  s.diag_std = std::sqrt(std::max(0.0, sq / m.n - s.diag_mean * s.diag_mean));

  double jsum = 0.0, jsq = 0.0;
  for (const auto& c : m.couplings) {
    jsum += std::abs(c.value);
    jsq += c.value * c.value;
  }
  const double all = static_cast<double>(m.n) * (m.n - 1);  // ordered pairs
  s.off_mean_full = 2.0 * jsum / all;
  s.off_std_full =
      std::sqrt(std::max(0.0, 2.0 * jsq / all - s.off_mean_full * s.off_mean_full));
  if (s.num_edges > 0) {
    s.off_mean_nz = jsum / s.num_edges;
    s.off_std_nz =
        std::sqrt(std::max(0.0, jsq / s.num_edges - s.off_mean_nz * s.off_mean_nz));
  }
  return s;
}

/// The fixed 11-slot regression feature vector.
struct FeatureVector {
  double n = 0;
  double density = 0;
  double sparsity = 0;
  double diag_mean = 0;
  double diag_std = 0;
  double off_diag_mean = 0;
  double off_diag_std = 0;
  double num_edges = 0;
  double avg_degree = 0;
  double delta = 0;
  double p = 0;

  static constexpr int kDim = 11;

  std::array<double, kDim> to_array() const {
    return {n,           density,      sparsity,  diag_mean, diag_std,
            off_diag_mean, off_diag_std, num_edges, avg_degree, delta, p};
  }

  static const std::array<const char*, kDim>& names() {
    static const std::array<const char*, kDim> kNames = {
        "n",           "density",      "sparsity",  "diag_mean", "diag_std",
        "off_diag_mean", "off_diag_std", "num_edges", "avg_degree", "delta", "p"};
    return kNames;
  }
};

inline FeatureVector assemble_features(int n, const StructuralStats& s, double delta,
                                       int p) {
  FeatureVector f;
  f.n = n;
  f.density = s.density;
  f.sparsity = 1.0 - s.density;
  f.diag_mean = s.diag_mean;
  f.diag_std = s.diag_std;
  f.off_diag_mean = s.off_mean_full;
  f.off_diag_std = s.off_std_full;
  f.num_edges = s.num_edges;
  f.avg_degree = s.avg_degree;
  f.delta = delta;
  f.p = p;
  return f;
}

inline FeatureVector extract(const IsingModel& m, double delta, int p) {
  return assemble_features(m.n, structural_stats(m), delta, p);
}

struct PcaResult {
  std::vector<std::vector<double>> coords;  // one row per input, k columns
  std::vector<double> explained_ratio;      // k entries
  std::vector<int> dropped_columns;         // zero-variance inputs
};

/// PCA on standardized features via eigendecomposition of the covariance
/// matrix. Zero-variance columns are dropped with a warning. Component signs
/// follow a deterministic convention: the largest-magnitude loading is
/// positive.
inline PcaResult pca_embed(const std::vector<std::vector<double>>& rows, int k = 2) {
  if (rows.size() < 2) throw ConfigError("pca_embed: need at least 2 vectors");
  const int dim = static_cast<int>(rows[0].size());
  const int count = static_cast<int>(rows.size());
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != dim)
      throw ConfigError("pca_embed: ragged input");

  std::vector<double> mean(dim, 0.0), stdev(dim, 0.0);
  for (const auto& r : rows)
    for (int c = 0; c < dim; ++c) mean[c] += r[c];
  for (double& v : mean) v /= count;
  for (const auto& r : rows)
    for (int c = 0; c < dim; ++c) stdev[c] += (r[c] - mean[c]) * (r[c] - mean[c]);

  PcaResult result;
  std::vector<int> keep;
  for (int c = 0; c < dim; ++c) {
    stdev[c] = std::sqrt(stdev[c] / count);
    if (stdev[c] > 0.0) {
      keep.push_back(c);
    } else {
      result.dropped_columns.push_back(c);
      std::fprintf(stderr, "pca_embed: dropping zero-variance column %d\n", c);
    }
  }
  const int kept = static_cast<int>(keep.size());
  if (kept == 0) throw ConfigError("pca_embed: all columns have zero variance");
  if (k > kept) k = kept;

  Eigen::MatrixXd x(count, kept);
  for (int r = 0; r < count; ++r)
    for (int c = 0; c < kept; ++c)
      x(r, c) = (rows[r][keep[c]] - mean[keep[c]]) / stdev[keep[c]];

  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(count - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw DataError("pca_embed: eigensolver failed");
  const Eigen::VectorXd evals = solver.eigenvalues();   // ascending
  const Eigen::MatrixXd evecs = solver.eigenvectors();

  double total = 0.0;
  for (int c = 0; c < kept; ++c) total += std::max(0.0, evals(c));

  Eigen::MatrixXd components(kept, k);
  result.explained_ratio.resize(k);
  for (int comp = 0; comp < k; ++comp) {
    const int src = kept - 1 - comp;  // descending eigenvalue order
    Eigen::VectorXd v = evecs.col(src);
    int arg = 0;
    for (int c = 1; c < kept; ++c)
      if (std::abs(v(c)) > std::abs(v(arg))) arg = c;
    if (v(arg) < 0.0) v = -v;
    components.col(comp) = v;
    result.explained_ratio[comp] =
        total > 0.0 ? std::max(0.0, evals(src)) / total : 0.0;
  }

  const Eigen::MatrixXd proj = x * components;
  result.coords.assign(count, std::vector<double>(k));
  for (int r = 0; r < count; ++r)
    for (int c = 0; c < k; ++c) result.coords[r][c] = proj(r, c);
  return result;
}

}  // namespace qaoap
