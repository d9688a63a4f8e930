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

#pragma once

// Randomised comparison of the circuit path against the direct operator-product oracle.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "qspectro/circuit.hpp"
#include "qspectro/diagrams.hpp"
#include "qspectro/models.hpp"
#include "qspectro/oracle.hpp"
#include "qspectro/parallel.hpp"

namespace qspectro {

/// Random instances for property checks. All draws come from the caller's engine.
namespace sample {

inline Complex gaussian_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

inline Matrix hermitian(Index d, std::mt19937_64& rng, double scale = 1.0) {
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = gaussian_complex(rng);
  return scale * 0.5 * (a + a.adjoint());
}

/// Mixed state of full rank.
inline QuantumState state(Index d, std::mt19937_64& rng) {
  Matrix a(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) a(i, j) = gaussian_complex(rng);
  Matrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return QuantumState::density(0.5 * (rho + rho.adjoint()));
}

/// Random closed model with a magnetic dipole; `open` adds dephasing and one decay channel.
inline ModelSystem model(Index d, std::mt19937_64& rng, bool open = false) {
  ModelSystem m{HermitianOperator(hermitian(d, rng, 1.0)), HermitianOperator(hermitian(d, rng, 0.7)),
                HermitianOperator(hermitian(d, rng, 0.5)), std::nullopt, {}, d};
  if (open) {
    std::uniform_real_distribution<double> u(0.05, 0.4);
    Matrix lower = Matrix::Zero(d, d);
    lower(0, d - 1) = 1.0;
    m.jumps.push_back({lower, u(rng)});
    m.jumps.push_back({hermitian(d, rng, 0.5), u(rng)});
  }
  return m;
}

inline FeynmanDiagram diagram(int n, std::mt19937_64& rng, bool magnetic = false) {
  std::vector<Interaction> xs;
  std::uniform_int_distribution<int> coin(0, 1);
  for (int s = 0; s <= n; ++s) {
    const Side side = (s == n || coin(rng) == 0) ? Side::Ket : Side::Bra;
    const DipoleKind kind = magnetic && coin(rng) == 1 ? DipoleKind::Magnetic : DipoleKind::Electric;
    xs.push_back({s, side, kind});
  }
  return FeynmanDiagram(xs);
}

/// t_0 = 0 and non-decreasing later times with delays in [0, max_delay).
inline std::vector<double> times(int n, std::mt19937_64& rng, double max_delay = 3.0) {
  std::uniform_real_distribution<double> u(0.0, max_delay);
  std::vector<double> t(static_cast<size_t>(n) + 1, 0.0);
  for (size_t j = 1; j < t.size(); ++j) t[j] = t[j - 1] + u(rng);
  return t;
}

inline std::vector<double> fields(int n, std::mt19937_64& rng, double max_abs = 1.0) {
  std::uniform_real_distribution<double> u(-max_abs, max_abs);
  std::vector<double> f(static_cast<size_t>(n) + 1);
  for (auto& x : f) x = u(rng);
  return f;
}

}  // namespace sample

struct OracleCheckReport {
  std::string model;
  int order = 0;
  int trials = 0;
  double max_overlap_deviation = 0.0;      ///< |simulate_exact(compile) - Tr(B^dagger K rho0)|
  double max_correlation_deviation = 0.0;  ///< |simulate_exact(compile_direct) - correlation|
  double max_deviation() const { return std::max(max_overlap_deviation, max_correlation_deviation); }
};

inline const std::vector<std::string>& oracle_check_models() {
  static const std::vector<std::string> names = {"two_level", "ladder3", "vtype", "displaced", "random", "random_open"};
  return names;
}

inline ModelSystem oracle_check_model(const std::string& name, std::mt19937_64& rng) {
  if (name == "two_level") return with_chiral_magnetic(two_level(1.0), 0.3);
  if (name == "ladder3") return with_chiral_magnetic(ladder({0.0, 1.0, 2.5}, {1.0, 0.6}), 0.2);
  if (name == "vtype") return vtype(1.0, 0.2);
  if (name == "displaced") return with_chiral_magnetic(displaced_oscillator(3.0, 0.5, 0.8, 3), 0.1);
  if (name == "random") return sample::model(std::uniform_int_distribution<Index>(2, 6)(rng), rng);
  if (name == "random_open") return sample::model(std::uniform_int_distribution<Index>(2, 5)(rng), rng, true);
  std::string known;
  for (const auto& n : oracle_check_models()) known += (known.empty() ? "" : ", ") + n;
  throw InvariantError("unknown oracle-check model '" + name + "' (available: " + known + ")");
}

/// Evaluates `trials` random diagrams, delays and field values of order `order`. The
/// circuit readout is compared with the telescoped matrix-exponential overlap (closed
/// models) or the joint-space Lindblad readout (open models). Diagrams whose dipoles are
/// unitary also run through the direct-dipole circuit against the plain correlation.
inline OracleCheckReport oracle_check(const std::string& model_name, int order, int trials, std::uint64_t seed = 0) {
  if (order < 0) throw InvariantError("order must be >= 0");
  if (trials < 1) throw InvariantError("trials must be >= 1");
  OracleCheckReport report{model_name, order, trials};
  std::mt19937_64 rng(stream_seed(seed, 0x0c));
  for (int k = 0; k < trials; ++k) {
    const ModelSystem model = oracle_check_model(model_name, rng);
    const QuantumState rho0 = model_name.starts_with("random") ? sample::state(model.dim(), rng) : model.ground_state();
    const FeynmanDiagram d = sample::diagram(order, rng, true);
    const auto t = sample::times(order, rng);
    const auto f = sample::fields(order, rng);
    const auto dyn = default_dynamics(model);
    const Complex q = simulate_exact(compile(d, t, f), model, rho0, *dyn);
    const Complex expected = model.is_open() ? oracle::joint_space_readout(d, t, f, model, rho0)
                                             : oracle::hadamard_overlap(d, t, f, model, rho0);
    report.max_overlap_deviation = std::max(report.max_overlap_deviation, std::abs(q - expected));
    bool unitary = true;
    for (const auto& x : d.interactions()) unitary = unitary && is_unitary(model.dipole(x.kind).matrix());
    if (unitary) {
      const Complex direct = simulate_exact(compile_direct(d, t), model, rho0, *dyn);
      report.max_correlation_deviation =
          std::max(report.max_correlation_deviation, std::abs(direct - oracle::correlation_open(d, t, model, rho0)));
    }
  }
  return report;
}

}  // namespace qspectro
