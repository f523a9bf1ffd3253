#include "qaoap/simulator.hpp"

#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <vector>

#include "qaoap/problems.hpp"

namespace qaoap {
namespace {

using Complex = std::complex<double>;
using Matrix = std::vector<std::vector<Complex>>;

Matrix kron(const Matrix& a, const Matrix& b) {
  const std::size_t ar = a.size(), ac = a[0].size();
  const std::size_t br = b.size(), bc = b[0].size();
  Matrix out(ar * br, std::vector<Complex>(ac * bc));
  for (std::size_t i = 0; i < ar; ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < br; ++k)
        for (std::size_t l = 0; l < bc; ++l)
          out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
  return out;
}

StateVector matvec(const Matrix& m, const StateVector& v) {
  StateVector out(m.size(), Complex{0.0, 0.0});
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) out[i] += m[i][j] * v[j];
  return out;
}

// Dense mixer exp(-i beta sum X_i): Kronecker power of the 2x2 block, with
// qubit k placed as the k-th least significant index.
Matrix dense_mixer(double beta, int n) {
  const Matrix block = {{Complex{std::cos(beta), 0.0}, Complex{0.0, -std::sin(beta)}},
                        {Complex{0.0, -std::sin(beta)}, Complex{std::cos(beta), 0.0}}};
  Matrix u = {{Complex{1.0, 0.0}}};
  for (int k = 0; k < n; ++k) u = kron(block, u);
  return u;
}

StateVector random_state(int n, Rng& rng) {
  StateVector v(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& a : v) {
    a = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    norm += std::norm(a);
  }
  for (auto& a : v) a /= std::sqrt(norm);
  return v;
}

TEST(ScheduleOp, MatchesClosedForm) {
  const auto s = schedule({0.5, 0.5, 4});
  const std::vector<double> gamma = {0.125, 0.25, 0.375, 0.5};
  const std::vector<double> beta = {0.375, 0.25, 0.125, 0.0};
  for (int k = 0; k < 4; ++k) {
    EXPECT_DOUBLE_EQ(s.gamma[k], gamma[k]);
    EXPECT_DOUBLE_EQ(s.beta[k], beta[k]);
  }
}

TEST(ScheduleOp, SingleLayer) {
  const auto s = schedule({0.3, 0.3, 1});
  ASSERT_EQ(s.gamma.size(), 1u);
  EXPECT_DOUBLE_EQ(s.gamma[0], 0.3);
  EXPECT_DOUBLE_EQ(s.beta[0], 0.0);
}

TEST(ScheduleOp, ZeroAmplitudes) {
  const auto s = schedule({0.0, 0.0, 10});
  for (double g : s.gamma) EXPECT_EQ(g, 0.0);
  for (double b : s.beta) EXPECT_EQ(b, 0.0);
}

TEST(ScheduleOp, MonotoneRamps) {
  const auto s = schedule({0.7, 0.4, 25});
  for (int k = 1; k < 25; ++k) {
    EXPECT_GT(s.gamma[k], s.gamma[k - 1]);
    EXPECT_LT(s.beta[k], s.beta[k - 1]);
  }
  EXPECT_DOUBLE_EQ(s.gamma.back(), 0.7);
  EXPECT_EQ(s.beta.back(), 0.0);
}

TEST(InitPlus, UniformAmplitudes) {
  const auto one = init_plus(1);
  EXPECT_NEAR(one[0].real(), std::numbers::sqrt2 / 2.0, 1e-15);
  EXPECT_NEAR(one[1].real(), std::numbers::sqrt2 / 2.0, 1e-15);
  const auto two = init_plus(2);
  for (const auto& a : two) EXPECT_DOUBLE_EQ(a.real(), 0.5);
  for (int n : {3, 9, 15}) {
    const auto v = init_plus(n);
    double norm = 0.0;
    for (const auto& a : v) norm += std::norm(a);
    EXPECT_NEAR(norm, 1.0, 1e-12);
  }
  EXPECT_THROW(init_plus(0), ConfigError);
  EXPECT_THROW(init_plus(25), ConfigError);
}

TEST(CostPhase, ZeroGammaIsIdentity) {
  Rng rng(1);
  auto state = random_state(3, rng);
  const auto before = state;
  apply_cost_phase(state, std::vector<double>(8, 1.25), 0.0);
  for (std::size_t z = 0; z < 8; ++z) EXPECT_EQ(state[z], before[z]);
}

TEST(CostPhase, ConstantCostIsGlobalPhase) {
  Rng rng(2);
  auto state = random_state(3, rng);
  const auto before = state;
  apply_cost_phase(state, std::vector<double>(8, 0.8), 0.61);
  for (std::size_t z = 0; z < 8; ++z)
    EXPECT_NEAR(std::norm(state[z]), std::norm(before[z]), 1e-14);
}

TEST(CostPhase, MatchesDiagonalExponentialOracle) {
  const double gamma = std::numbers::pi / 2.0;
  const std::vector<double> costs = {-1.0, 1.0};
  StateVector state = init_plus(1);
  apply_cost_phase(state, costs, gamma);
  for (std::size_t z = 0; z < 2; ++z) {
    const Complex expected = std::polar(1.0, gamma * costs[z]) / std::numbers::sqrt2;
    EXPECT_NEAR(std::abs(state[z] - expected), 0.0, 1e-14);
    EXPECT_NEAR(std::norm(state[z]), 0.5, 1e-14);
  }
  EXPECT_THROW(apply_cost_phase(state, std::vector<double>(4, 0.0), 1.0), ConfigError);
}

TEST(Mixer, ZeroBetaIsIdentity) {
  Rng rng(3);
  auto state = random_state(2, rng);
  const auto before = state;
  apply_mixer(state, 0.0, 2);
  for (std::size_t z = 0; z < 4; ++z) EXPECT_EQ(state[z], before[z]);
}

TEST(Mixer, HalfPiActsAsBitFlip) {
  StateVector state = {Complex{1.0, 0.0}, Complex{0.0, 0.0}};
  apply_mixer(state, std::numbers::pi / 2.0, 1);
  EXPECT_NEAR(std::abs(state[0]), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(state[1] - Complex{0.0, -1.0}), 0.0, 1e-15);
}

TEST(Mixer, MatchesDenseKroneckerOracle) {
  Rng rng(4);
  auto state = random_state(3, rng);
  const auto expected = matvec(dense_mixer(0.37, 3), state);
  apply_mixer(state, 0.37, 3);
  for (std::size_t z = 0; z < 8; ++z)
    EXPECT_NEAR(std::abs(state[z] - expected[z]), 0.0, 1e-12);
}

TEST(SuccessProbability, ZeroRampIsDegeneracyOverStates) {
  WeightedGraph g;
  g.n = 4;
  g.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, 1.0}};
  const auto m = normalize(to_ising(max_cut_qubo(g)));
  for (int p : {1, 5, 40}) {
    const double prob = success_probability(m, {0.0, 0.0, p});
    EXPECT_NEAR(prob, 2.0 / 16.0, 1e-12);
  }
}

TEST(SuccessProbability, NormConservedThroughDeepCircuit) {
  const auto q = encode(ClassTag::WeightedMaxCut, 10,
                        GraphMeta{GraphType::ErdosRenyi, 0.5}, 21);
  const auto m = normalize(to_ising(q));
  const auto costs = cost_vector(m);
  const auto sched = schedule({0.5, 0.5, 120});
  auto state = init_plus(m.n);
  for (int k = 0; k < 120; ++k) {
    apply_cost_phase(state, costs, sched.gamma[k]);
    apply_mixer(state, sched.beta[k], m.n);
    double norm = 0.0;
    for (const auto& a : state) norm += std::norm(a);
    ASSERT_NEAR(norm, 1.0, 1e-9);
  }
}

TEST(SuccessProbability, InvariantUnderQubitRelabeling) {
  const auto q = encode(ClassTag::WeightedMaxCut, 7,
                        GraphMeta{GraphType::BarabasiAlbert, 0.75}, 33);
  const auto m = normalize(to_ising(q));
  // permutation (0 1 2 3 4 5 6) -> (3 5 0 6 2 1 4)
  const std::array<int, 7> perm = {3, 5, 0, 6, 2, 1, 4};
  IsingModel pm;
  pm.n = 7;
  pm.fields.resize(7);
  for (int i = 0; i < 7; ++i) pm.fields[perm[i]] = m.fields[i];
  for (const auto& c : m.couplings) {
    int a = perm[c.i], b = perm[c.j];
    if (a > b) std::swap(a, b);
    pm.couplings.push_back({a, b, c.value});
  }
  const RampParams rp{0.4, 0.4, 15};
  EXPECT_NEAR(success_probability(m, rp), success_probability(pm, rp), 1e-9);
}

TEST(SuccessProbability, LayeredMatchesDenseUnitaryOracle) {
  Rng rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 3;
    IsingModel m;
    m.n = n;
    m.fields.resize(n);
    for (auto& h : m.fields) h = rng.uniform(-1.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        m.couplings.push_back({i, j, rng.uniform(-1.0, 1.0)});
    const RampParams rp{rng.uniform(0.1, 0.6), rng.uniform(0.1, 0.6),
                        1 + static_cast<int>(rng.uniform_int(0, 9))};
    const auto costs = cost_vector(m);
    const auto sched = schedule(rp);
    auto state = init_plus(n);
    for (int k = 0; k < rp.p; ++k) {
      // diagonal exponential applied densely
      for (std::size_t z = 0; z < state.size(); ++z)
        state[z] *= std::polar(1.0, sched.gamma[k] * costs[z]);
      state = matvec(dense_mixer(sched.beta[k], n), state);
    }
    auto layered = init_plus(n);
    for (int k = 0; k < rp.p; ++k) {
      apply_cost_phase(layered, costs, sched.gamma[k]);
      apply_mixer(layered, sched.beta[k], n);
    }
    for (std::size_t z = 0; z < state.size(); ++z)
      EXPECT_NEAR(std::abs(layered[z] - state[z]), 0.0, 1e-10);
  }
}

TEST(SuccessProbability, ShotModeIsDeterministicAndUnbiased) {
  const auto q = encode(ClassTag::MaxCut, 7, GraphMeta{GraphType::ErdosRenyi, 0.5}, 9);
  const auto m = normalize(to_ising(q));
  const RampParams rp{0.3, 0.3, 20};
  const double exact = success_probability(m, rp);
  const double freq1 = success_probability(m, rp, {10000, 77});
  const double freq2 = success_probability(m, rp, {10000, 77});
  EXPECT_EQ(freq1, freq2);
  EXPECT_NEAR(freq1, exact, 0.03);
}

// Scaled-down version of the Fig.-2-style trend anchor; the acceptance suite
// runs the full 150-instance ensembles at n=7 and n=14.
TEST(SuccessProbability, MaxCutEnsembleAnchor) {
  double sum = 0.0;
  int count = 0;
  for (GraphType type : kAllGraphTypes) {
    for (double density : kGraphDensities) {
      for (int i = 0; i < 2; ++i) {
        const auto q = encode(ClassTag::MaxCut, 7, GraphMeta{type, density},
                              seed_combine(1000, static_cast<int>(type),
                                           static_cast<int>(density * 100), i));
        const auto m = normalize(to_ising(q));
        sum += success_probability(m, {0.3, 0.3, 20});
        ++count;
      }
    }
  }
  const double mean = sum / count;
  EXPECT_GT(mean, 0.65);
  EXPECT_LT(mean, 0.95);
}

}  // namespace
}  // namespace qaoap
