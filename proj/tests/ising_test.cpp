#include "qaoap/ising.hpp"

#include <gtest/gtest.h>

#include "qaoap/problems.hpp"

namespace qaoap {
namespace {

// Term-by-term reevaluation, independent of the incremental cost_vector path.
double cost_oracle(const IsingModel& m, std::uint32_t z) {
  double total = 0.0;
  for (const auto& c : m.couplings) {
    const double si = ((z >> c.i) & 1u) ? 1.0 : -1.0;
    const double sj = ((z >> c.j) & 1u) ? 1.0 : -1.0;
    total += c.value * si * sj;
  }
  for (int i = 0; i < m.n; ++i)
    total += m.fields[i] * (((z >> i) & 1u) ? 1.0 : -1.0);
  return total;
}

TEST(ToIsing, SingleCoupling) {
  QuboInstance q;
  q.resize(2);
  q.set(0, 1, 4.0);
  const auto m = to_ising(q);
  ASSERT_EQ(m.couplings.size(), 1u);
  EXPECT_DOUBLE_EQ(m.couplings[0].value, 1.0);
  EXPECT_DOUBLE_EQ(m.fields[0], 1.0);
  EXPECT_DOUBLE_EQ(m.fields[1], 1.0);
  EXPECT_DOUBLE_EQ(m.offset, 1.0);
  EXPECT_DOUBLE_EQ(m.norm_factor, 1.0);
  for (std::uint32_t z = 0; z < 4; ++z)
    EXPECT_NEAR(qubo_cost(q, z), cost_oracle(m, z) + m.offset, 1e-12);
}

TEST(ToIsing, SingleLinearTerm) {
  QuboInstance q;
  q.resize(1);
  q.set(0, 0, 2.0);
  const auto m = to_ising(q);
  EXPECT_TRUE(m.couplings.empty());
  EXPECT_DOUBLE_EQ(m.fields[0], 1.0);
  EXPECT_DOUBLE_EQ(m.offset, 1.0);
}

TEST(ToIsing, AllZero) {
  QuboInstance q;
  q.resize(3);
  const auto m = to_ising(q);
  EXPECT_TRUE(m.couplings.empty());
  for (double h : m.fields) EXPECT_EQ(h, 0.0);
  EXPECT_EQ(m.offset, 0.0);
  EXPECT_THROW(normalize(m), ConfigError);
}

TEST(Normalize, DividesByMaxCoupling) {
  IsingModel m;
  m.n = 2;
  m.couplings = {{0, 1, -2.0}};
  m.fields = {4.0, 0.0};
  const auto out = normalize(m);
  EXPECT_DOUBLE_EQ(out.couplings[0].value, -1.0);
  EXPECT_DOUBLE_EQ(out.fields[0], 2.0);
  EXPECT_DOUBLE_EQ(out.norm_factor, 2.0);
}

TEST(Normalize, CouplingFreeFallsBackToFields) {
  IsingModel m;
  m.n = 2;
  m.fields = {3.0, -6.0};
  const auto out = normalize(m);
  EXPECT_DOUBLE_EQ(out.fields[0], 0.5);
  EXPECT_DOUBLE_EQ(out.fields[1], -1.0);
  EXPECT_DOUBLE_EQ(out.norm_factor, 6.0);
}

TEST(Normalize, IdempotentOnNormalizedModel) {
  IsingModel m;
  m.n = 2;
  m.couplings = {{0, 1, 1.0}};
  m.fields = {0.25, 0.0};
  const auto out = normalize(m);
  EXPECT_DOUBLE_EQ(out.norm_factor, 1.0);
  EXPECT_DOUBLE_EQ(out.couplings[0].value, 1.0);
  EXPECT_DOUBLE_EQ(out.fields[0], 0.25);
}

TEST(Normalize, ScaleCovariant) {
  Rng rng(5);
  IsingModel m;
  m.n = 6;
  m.fields.resize(6);
  for (auto& h : m.fields) h = rng.uniform(-2.0, 2.0);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      m.couplings.push_back({i, j, rng.uniform(-3.0, 3.0)});
  IsingModel scaled = m;
  for (auto& c : scaled.couplings) c.value *= 7.5;
  for (auto& h : scaled.fields) h *= 7.5;
  scaled.offset *= 7.5;
  const auto a = normalize(m);
  const auto b = normalize(scaled);
  for (std::size_t i = 0; i < a.couplings.size(); ++i)
    EXPECT_NEAR(a.couplings[i].value, b.couplings[i].value, 1e-12);
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(a.fields[i], b.fields[i], 1e-12);
}

TEST(CostVector, TinyModels) {
  IsingModel m;
  m.n = 1;
  m.fields = {1.0};
  const auto c1 = cost_vector(m);
  EXPECT_DOUBLE_EQ(c1[0], -1.0);
  EXPECT_DOUBLE_EQ(c1[1], 1.0);

  IsingModel m2;
  m2.n = 2;
  m2.couplings = {{0, 1, 1.0}};
  m2.fields = {0.0, 0.0};
  const auto c2 = cost_vector(m2);
  EXPECT_DOUBLE_EQ(c2[0], 1.0);
  EXPECT_DOUBLE_EQ(c2[1], -1.0);
  EXPECT_DOUBLE_EQ(c2[2], -1.0);
  EXPECT_DOUBLE_EQ(c2[3], 1.0);
}

TEST(CostVector, MatchesOracleOnRandomModel) {
  Rng rng(11);
  IsingModel m;
  m.n = 8;
  m.fields.resize(8);
  for (auto& h : m.fields) h = rng.uniform(-1.0, 1.0);
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      if (rng.bernoulli(0.6)) m.couplings.push_back({i, j, rng.uniform(-1.0, 1.0)});
  const auto costs = cost_vector(m);
  for (std::uint32_t z = 0; z < 256; ++z)
    EXPECT_NEAR(costs[z], cost_oracle(m, z), 1e-12);
}

TEST(CostVector, RejectsOversizedModels) {
  IsingModel m;
  m.n = 25;
  m.fields.assign(25, 0.1);
  EXPECT_THROW(cost_vector(m), ConfigError);
}

TEST(OptimalSet, Basics) {
  const auto r = optimal_set({1.0, -1.0, -1.0, 1.0});
  EXPECT_DOUBLE_EQ(r.min_cost, -1.0);
  ASSERT_EQ(r.states.size(), 2u);
  EXPECT_EQ(r.states[0], 1u);
  EXPECT_EQ(r.states[1], 2u);

  const auto all = optimal_set(std::vector<double>(8, 0.5));
  EXPECT_EQ(all.states.size(), 8u);
  EXPECT_THROW(optimal_set({}), ConfigError);
}

TEST(OptimalSet, MaxCutFourCycle) {
  WeightedGraph g;
  g.n = 4;
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}};
  const auto m = normalize(to_ising(max_cut_qubo(g)));
  const auto r = optimal_set(cost_vector(m));
  ASSERT_EQ(r.states.size(), 2u);
  EXPECT_EQ(r.states[0], 5u);
  EXPECT_EQ(r.states[1], 10u);
}

TEST(OptimalSet, ArgminInvariantUnderNormalization) {
  const GraphMeta meta{GraphType::ErdosRenyi, 0.5};
  for (int k = 0; k < 10; ++k) {
    const auto q = encode(ClassTag::WeightedMaxCut, 8, meta, 900 + k);
    const auto raw = to_ising(q);
    const auto norm = normalize(raw);
    const auto a = optimal_set(cost_vector(raw));
    const auto b = optimal_set(cost_vector(norm));
    EXPECT_EQ(a.states, b.states);
  }
}

// Round-trip equivalence: QUBO cost equals norm_factor * (ising + offset)
// on every assignment, across classes. The acceptance suite runs the full
// 200-instance version of this check.
TEST(RoundTrip, QuboIsingEquivalence) {
  const GraphMeta meta{GraphType::BarabasiAlbert, 0.75};
  for (ClassTag cls : kAllClasses) {
    const int n = cls == ClassTag::TravelingSalesperson ? 9 : 8;
    for (int k = 0; k < 5; ++k) {
      const auto q = encode(cls, n, meta, seed_combine(31, static_cast<int>(cls), k));
      const auto m = normalize(to_ising(q));
      const auto costs = cost_vector(m);
      for (std::uint32_t z = 0; z < (1u << n); ++z) {
        const double lhs = qubo_cost(q, z);
        const double rhs = m.norm_factor * (costs[z] + m.offset);
        EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(lhs)))
            << class_name(cls) << " state " << z;
      }
    }
  }
}

}  // namespace
}  // namespace qaoap
