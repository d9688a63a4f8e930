// Copyright 2026 The qspectro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qspectro/circuit.hpp"
#include "qspectro/oracle.hpp"
#include "qspectro/oracle_check.hpp"

using namespace qspectro;

namespace {

using K = DipoleKind;

const FeynmanDiagram kKetKet({{0, Side::Ket, K::Electric}, {1, Side::Ket, K::Electric}});
const FeynmanDiagram kBraKet({{0, Side::Bra, K::Electric}, {1, Side::Ket, K::Electric}});

double stddev(const std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(x.size() - 1));
}

}  // namespace

TEST(Compile, FirstOrderKetKetLayout) {
  const std::vector<double> t{0.0, 2.5}, f{0.1, 0.2};
  const CircuitPlan p = compile(kKetKet, t, f);
  const std::vector<CircuitStep> expected{AncillaHadamard{}, ControlledM{1, K::Electric, 0.1}, Evolve{2.5},
                                          ControlledM{1, K::Electric, 0.2}, MeasureXY{}};
  EXPECT_EQ(p.steps, expected);
  EXPECT_EQ(p.n_f, 2);
  EXPECT_DOUBLE_EQ(p.total_duration(), 2.5);
}

TEST(Compile, BraSideControlsOnZero) {
  const std::vector<double> t{0.0, 2.5}, f{0.1, 0.2};
  const CircuitPlan p = compile(kBraKet, t, f);
  const std::vector<CircuitStep> expected{AncillaHadamard{}, ControlledM{0, K::Electric, 0.1}, Evolve{2.5},
                                          ControlledM{1, K::Electric, 0.2}, MeasureXY{}};
  EXPECT_EQ(p.steps, expected);
}

TEST(Compile, InterleavingMatchesTelescopedFactors) {
  // K = M(F4) U(tau3) M(F3) U(tau2) U(tau1) M(F1), B = U(tau3) U(tau2) M(F2) U(tau1)
  const FeynmanDiagram d = parse_diagram("order 3; t0 ket E; t1 bra E; t2 ket E; signal ket E");
  const std::vector<double> t{0.0, 0.4, 1.0, 1.7}, f{0.1, 0.2, 0.3, 0.4};
  const CircuitPlan p = compile(d, t, f);
  const std::vector<CircuitStep> expected{
      AncillaHadamard{},          ControlledM{1, K::Electric, 0.1}, Evolve{0.4},  ControlledM{0, K::Electric, 0.2},
      Evolve{0.6},                ControlledM{1, K::Electric, 0.3}, Evolve{0.7},  ControlledM{1, K::Electric, 0.4},
      MeasureXY{}};
  ASSERT_EQ(p.steps.size(), expected.size());
  for (size_t k = 0; k < expected.size(); ++k) {
    if (const auto* e = std::get_if<Evolve>(&p.steps[k])) {
      ASSERT_TRUE(std::holds_alternative<Evolve>(expected[k]));
      EXPECT_NEAR(e->duration, std::get<Evolve>(expected[k]).duration, 1e-15);
    } else {
      EXPECT_EQ(p.steps[k], expected[k]) << "step " << k;
    }
  }
  EXPECT_NEAR(p.total_duration(), 1.7, 1e-15);
}

TEST(Compile, StructuralInvariants) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = trial % 5;
    const FeynmanDiagram d = sample::diagram(n, rng, true);
    auto t = sample::times(n, rng);
    if (n >= 2) t[2] = t[1];  // a coincident pair
    const CircuitPlan p = compile(d, t, sample::fields(n, rng));
    EXPECT_TRUE(std::holds_alternative<AncillaHadamard>(p.steps.front()));
    EXPECT_TRUE(std::holds_alternative<MeasureXY>(p.steps.back()));
    int hadamards = 0, measures = 0, controlled = 0;
    for (const auto& s : p.steps) {
      hadamards += std::holds_alternative<AncillaHadamard>(s);
      measures += std::holds_alternative<MeasureXY>(s);
      controlled += std::holds_alternative<ControlledM>(s);
      // every evolution is forward in time and uncontrolled
      if (const auto* e = std::get_if<Evolve>(&s)) {
        EXPECT_GT(e->duration, 0.0);
      }
    }
    EXPECT_EQ(hadamards, 1);
    EXPECT_EQ(measures, 1);
    EXPECT_EQ(controlled, n + 1);
    EXPECT_NEAR(p.total_duration(), t.back(), 1e-12);
  }
}

TEST(Compile, RejectsBadTimes) {
  const std::vector<double> f{0.0, 0.0};
  EXPECT_THROW(compile(kKetKet, std::vector<double>{1.0, 0.5}, f), InvariantError);
  EXPECT_THROW(compile(kKetKet, std::vector<double>{0.0}, f), DimensionError);
  EXPECT_THROW(compile(kKetKet, std::vector<double>{0.0, std::nan("")}, f), InvariantError);
}

TEST(SimulateExact, ZeroFieldGivesUnitReadout) {
  std::mt19937_64 rng(22);
  for (bool open : {false, true}) {
    for (int n = 0; n <= 3; ++n) {
      const ModelSystem m = sample::model(4, rng, open);
      const auto t = sample::times(n, rng);
      const std::vector<double> f(static_cast<size_t>(n) + 1, 0.0);
      const Complex q = simulate_exact(compile(sample::diagram(n, rng, true), t, f), m, sample::state(4, rng));
      EXPECT_LT(std::abs(q - 1.0), 1e-10);
    }
  }
}

TEST(SimulateExact, PauliShortcutTwoLevel) {
  const ModelSystem m = two_level(1.0);
  for (double t : {0.0, 0.5, 2.0, 7.0}) {
    const std::vector<double> times{0.0, t};
    const Complex q = simulate_exact(compile_direct(kKetKet, times), m, m.ground_state());
    EXPECT_LT(std::abs(q - std::exp(-kI * t)), 1e-12);
  }
}

TEST(SimulateExact, DirectInsertionNeedsUnitaryDipole) {
  const ModelSystem m = ladder({0.0, 1.0, 2.0}, {1.0, 0.5});
  const std::vector<double> t{0.0, 1.0};
  EXPECT_THROW(simulate_exact(compile_direct(kKetKet, t), m, m.ground_state()), InvariantError);
}

TEST(SimulateExact, RandomThreeLevelSecondOrder) {
  std::mt19937_64 rng(23);
  const ModelSystem m = sample::model(3, rng);
  const QuantumState rho = sample::state(3, rng);
  const FeynmanDiagram d = sample::diagram(2, rng, true);
  const auto t = sample::times(2, rng);
  const auto f = sample::fields(2, rng);
  EXPECT_LT(std::abs(simulate_exact(compile(d, t, f), m, rho) - oracle::hadamard_overlap(d, t, f, m, rho)), 1e-10);
}

TEST(SimulateExact, MatchesOverlapOracleOnRandomInstances) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 50; ++trial) {
    const Index dim = 2 + trial % 5;
    const int n = trial % 4;
    const ModelSystem m = sample::model(dim, rng);
    const QuantumState rho = trial % 2 ? sample::state(dim, rng) : m.ground_state();
    const FeynmanDiagram d = sample::diagram(n, rng, true);
    const auto t = sample::times(n, rng);
    const auto f = sample::fields(n, rng);
    const Complex q = simulate_exact(compile(d, t, f), m, rho);
    EXPECT_LT(std::abs(q - oracle::hadamard_overlap(d, t, f, m, rho)), 1e-10);
    EXPECT_LE(std::abs(q), 1.0 + 1e-9);
  }
}

TEST(SimulateExact, TelescopedEqualsNonTelescoped) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = trial % 4;
    const ModelSystem m = sample::model(4, rng);
    const QuantumState rho = sample::state(4, rng);
    const FeynmanDiagram d = sample::diagram(n, rng, true);
    const auto t = sample::times(n, rng);
    const auto f = sample::fields(n, rng);
    EXPECT_LT(std::abs(oracle::hadamard_overlap(d, t, f, m, rho) - oracle::non_telescoped_overlap(d, t, f, m, rho)),
              1e-10);
  }
}

TEST(SimulateExact, OpenSystemMatchesJointSpaceOracle) {
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = trial % 4;
    const ModelSystem m = sample::model(3, rng, true);
    const QuantumState rho = sample::state(3, rng);
    const FeynmanDiagram d = sample::diagram(n, rng, true);
    const auto t = sample::times(n, rng);
    const auto f = sample::fields(n, rng);
    const Complex q = simulate_exact(compile(d, t, f), m, rho);
    EXPECT_LT(std::abs(q - oracle::joint_space_readout(d, t, f, m, rho)), 1e-10);
    EXPECT_LE(std::abs(q), 1.0 + 1e-9);
  }
}

TEST(SimulateExact, DimensionMismatchThrows) {
  const ModelSystem m = two_level(1.0);
  const std::vector<double> t{0.0, 1.0}, f{0.1, 0.1};
  EXPECT_THROW(simulate_exact(compile(kKetKet, t, f), m, QuantumState::basis(3, 0)), DimensionError);
}

TEST(SimulateExact, MagneticWithoutMThrows) {
  const FeynmanDiagram d({{0, Side::Ket, K::Magnetic}, {1, Side::Ket, K::Electric}});
  const ModelSystem m = two_level(1.0);
  const std::vector<double> t{0.0, 1.0}, f{0.1, 0.1};
  EXPECT_THROW(simulate_exact(compile(d, t, f), m, m.ground_state()), InvariantError);
}

TEST(Shots, IdentityCircuitIsDeterministic) {
  const ModelSystem m = two_level(1.0);
  const std::vector<double> t{0.0, 3.0}, f{0.0, 0.0};
  for (std::uint64_t seed : {1u, 2u, 99u}) {
    const MeasurementRecord r = simulate_shots(compile(kKetKet, t, f), m, m.ground_state(), 100, seed);
    EXPECT_EQ(r.exp_x, 1.0);
    EXPECT_EQ(r.shots, 100u);
    EXPECT_EQ(r.seed, seed);
  }
}

TEST(Shots, EmpiricalMeanWithinBinomialError) {
  int inside = 0;
  const double bound = 5.0 * std::sqrt(0.75 / 5000.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const MeasurementRecord r = sample_measurements({0.5, 0.0}, 10000, seed);
    inside += std::abs(r.exp_x - 0.5) <= bound;
  }
  EXPECT_GE(inside, 198);
}

TEST(Shots, StandardErrorScalesAsInverseRoot) {
  const Complex q{0.3, -0.4};
  auto spread = [&](std::uint64_t shots) {
    std::vector<double> xs;
    for (std::uint64_t seed = 0; seed < 100; ++seed) xs.push_back(sample_measurements(q, shots, 1000 + seed).exp_x);
    return stddev(xs);
  };
  const double ratio = spread(100) / spread(10000);
  EXPECT_NEAR(ratio, 10.0, 2.0);
}

TEST(Shots, SplitAndReproducible) {
  const ModelSystem m = with_chiral_magnetic(two_level(1.0), 0.5);
  const std::vector<double> t{0.0, 1.3}, f{0.4, -0.2};
  const CircuitPlan p = compile(kBraKet, t, f);
  const MeasurementRecord a = simulate_shots(p, m, m.ground_state(), 1001, 7);
  const MeasurementRecord b = simulate_shots(p, m, m.ground_state(), 1001, 7);
  EXPECT_EQ(a.exp_x, b.exp_x);
  EXPECT_EQ(a.exp_y, b.exp_y);
  // 501 sigma_x shots: the mean is a multiple of 1/501
  EXPECT_NEAR(a.exp_x * 501.0, std::round(a.exp_x * 501.0), 1e-9);
  EXPECT_NEAR(a.exp_y * 500.0, std::round(a.exp_y * 500.0), 1e-9);
  EXPECT_GE(a.exp_x, -1.0);
  EXPECT_LE(a.exp_x, 1.0);
}

TEST(Shots, ZeroShotsRejected) {
  const ModelSystem m = two_level(1.0);
  const std::vector<double> t{0.0, 1.0}, f{0.0, 0.0};
  EXPECT_THROW(simulate_shots(compile(kKetKet, t, f), m, m.ground_state(), 0, 1), InvariantError);
  EXPECT_THROW(sample_measurements({1.0, 0.0}, 0, 1), InvariantError);
}
