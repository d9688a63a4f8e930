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

// Hadamard-test circuits for double-sided Feynman diagrams.
//
// The ancilla starts in |0>, a Hadamard prepares |+>, and the interactions are applied
// in global time order: the register evolves (uncontrolled) between interaction times
// and each dipole exponential M(F) = exp(-i mu F) is controlled on |1> for ket-side and
// on |0> for bra-side interactions. The |0> branch then carries B, the |1> branch K, and
// <sigma_x> + i <sigma_y> on the ancilla equals Tr(B^dagger K rho0).

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "qspectro/diagrams.hpp"
#include "qspectro/dynamics.hpp"
#include "qspectro/parallel.hpp"

namespace qspectro {

struct AncillaHadamard {
  friend bool operator==(const AncillaHadamard&, const AncillaHadamard&) = default;
};

/// Uncontrolled forward evolution of the register.
struct Evolve {
  double duration = 0.0;
  friend bool operator==(const Evolve&, const Evolve&) = default;
};

/// exp(-i D f_value) applied to the register when the ancilla is in |control_on>,
/// D the electric or magnetic dipole.
struct ControlledM {
  int control_on = 1;
  DipoleKind kind = DipoleKind::Electric;
  double f_value = 0.0;
  friend bool operator==(const ControlledM&, const ControlledM&) = default;
};

/// The dipole operator itself, controlled on |control_on>; valid only for unitary dipoles.
struct ControlledDipole {
  int control_on = 1;
  DipoleKind kind = DipoleKind::Electric;
  friend bool operator==(const ControlledDipole&, const ControlledDipole&) = default;
};

struct MeasureXY {
  friend bool operator==(const MeasureXY&, const MeasureXY&) = default;
};

using CircuitStep = std::variant<AncillaHadamard, Evolve, ControlledM, ControlledDipole, MeasureXY>;

struct CircuitPlan {
  std::vector<CircuitStep> steps;
  int n_f = 0;

  double total_duration() const {
    double t = 0.0;
    for (const auto& s : steps)
      if (const auto* e = std::get_if<Evolve>(&s)) t += e->duration;
    return t;
  }
};

namespace detail {

inline void check_times(const FeynmanDiagram& diagram, std::span<const double> times) {
  if (times.size() != static_cast<size_t>(diagram.order() + 1))
    throw DimensionError("need one interaction time per slot");
  for (size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i])) throw InvariantError("interaction times must be finite");
    if (i > 0 && times[i] < times[i - 1]) throw InvariantError("interaction times must be ascending");
  }
}

template <class MakeOp>
CircuitPlan build_plan(const FeynmanDiagram& diagram, std::span<const double> times, MakeOp make_op) {
  CircuitPlan plan;
  plan.n_f = diagram.order() + 1;
  plan.steps.push_back(AncillaHadamard{});
  double now = times.empty() ? 0.0 : times[0];
  for (const auto& x : diagram.interactions()) {
    const double t = times[static_cast<size_t>(x.slot)];
    if (t > now) plan.steps.push_back(Evolve{t - now});
    now = t;
    plan.steps.push_back(make_op(x));
  }
  plan.steps.push_back(MeasureXY{});
  return plan;
}

}  // namespace detail

/// Circuit for Q(F) of `diagram` with interaction times `times[slot]` (slot 0 is
/// normally 0) and dipole angles `f[slot]`. Zero-length evolutions are omitted.
inline CircuitPlan compile(const FeynmanDiagram& diagram, std::span<const double> times,
                           std::span<const double> f) {
  detail::check_times(diagram, times);
  if (f.size() != times.size()) throw DimensionError("need one F value per slot");
  for (double v : f)
    if (!std::isfinite(v)) throw InvariantError("F values must be finite");
  return detail::build_plan(diagram, times, [&](const Interaction& x) -> CircuitStep {
    return ControlledM{x.side == Side::Ket ? 1 : 0, x.kind, f[static_cast<size_t>(x.slot)]};
  });
}

/// Circuit inserting the dipoles directly (two-level shortcut); Q is then the
/// correlation function itself.
inline CircuitPlan compile_direct(const FeynmanDiagram& diagram, std::span<const double> times) {
  detail::check_times(diagram, times);
  return detail::build_plan(diagram, times, [](const Interaction& x) -> CircuitStep {
    return ControlledDipole{x.side == Side::Ket ? 1 : 0, x.kind};
  });
}

/// Ancilla (x) register density matrix stored as 2x2 blocks: rho = sum_ab |a><b| (x) block(a, b).
struct JointState {
  Matrix b00, b01, b10, b11;

  static JointState from(const QuantumState& joint, Index register_dim) {
    if (joint.dim() != 2 * register_dim) throw DimensionError("joint state must be ancilla (x) register");
    const Matrix rho = joint.density_matrix();
    const Index d = register_dim;
    return {rho.block(0, 0, d, d), rho.block(0, d, d, d), rho.block(d, 0, d, d), rho.block(d, d, d, d)};
  }

  Matrix matrix() const {
    const Index d = b00.rows();
    Matrix rho(2 * d, 2 * d);
    rho.block(0, 0, d, d) = b00;
    rho.block(0, d, d, d) = b01;
    rho.block(d, 0, d, d) = b10;
    rho.block(d, d, d, d) = b11;
    return rho;
  }

  void hadamard() {
    const Matrix p = b00, q = b01, r = b10, s = b11;
    b00 = 0.5 * (p + q + r + s);
    b01 = 0.5 * (p - q + r - s);
    b10 = 0.5 * (p + q - r - s);
    b11 = 0.5 * (p - q - r + s);
  }

  /// Applies `op` to the register in the branch |control_on>.
  void controlled(const Matrix& op, int control_on) {
    if (control_on == 1) {
      b11 = op * b11 * op.adjoint();
      b10 = op * b10;
      b01 = b01 * op.adjoint();
    } else {
      b00 = op * b00 * op.adjoint();
      b01 = op * b01;
      b10 = b10 * op.adjoint();
    }
  }

  void evolve(const Dynamics& dyn, double duration) {
    b00 = dyn.evolve(b00, duration);
    b01 = dyn.evolve(b01, duration);
    b10 = dyn.evolve(b10, duration);
    b11 = dyn.evolve(b11, duration);
  }

  double exp_x() const { return (b01.trace() + b10.trace()).real(); }
  double exp_y() const { return (-kI * b10.trace() + kI * b01.trace()).real(); }
};

namespace detail {

inline JointState run_plan(const CircuitPlan& plan, const ModelSystem& model, const QuantumState& rho0,
                           const Dynamics& dyn) {
  if (rho0.dim() != model.dim()) throw DimensionError("initial state and model dimensions differ");
  if (dyn.space_dim() % model.dim() != 0) throw DimensionError("dynamics does not match the model");
  const Matrix start = dyn.embed_state(rho0.density_matrix());
  const Index d = start.rows();
  JointState s{start, Matrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
  for (const auto& step : plan.steps) {
    if (std::holds_alternative<AncillaHadamard>(step)) {
      s.hadamard();
    } else if (const auto* e = std::get_if<Evolve>(&step)) {
      if (e->duration < 0.0) throw InvariantError("negative evolution duration");
      s.evolve(dyn, e->duration);
    } else if (const auto* cm = std::get_if<ControlledM>(&step)) {
      const Matrix op = model.dipole(cm->kind).exp_minus_i(cm->f_value);
      s.controlled(dyn.embed_operator(op), cm->control_on);
    } else if (const auto* cd = std::get_if<ControlledDipole>(&step)) {
      const Matrix& op = model.dipole(cd->kind).matrix();
      if (!is_unitary(op)) throw InvariantError("direct dipole insertion requires a unitary dipole");
      s.controlled(dyn.embed_operator(op), cd->control_on);
    }
  }
  return s;
}

}  // namespace detail

/// Q = <sigma_x> + i <sigma_y> from the final joint state.
inline Complex simulate_exact(const CircuitPlan& plan, const ModelSystem& model, const QuantumState& rho0,
                              const Dynamics& dyn) {
  const JointState s = detail::run_plan(plan, model, rho0, dyn);
  return {s.exp_x(), s.exp_y()};
}

inline Complex simulate_exact(const CircuitPlan& plan, const ModelSystem& model, const QuantumState& rho0) {
  return simulate_exact(plan, model, rho0, *default_dynamics(model));
}

struct MeasurementRecord {
  double exp_x = 0.0;
  double exp_y = 0.0;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  Complex q() const { return {exp_x, exp_y}; }
};

/// Empirical mean of `count` +/-1 outcomes with P(+1) = (1 + expectation) / 2.
inline double sample_pauli_mean(double expectation, std::uint64_t count, std::uint64_t seed) {
  if (count == 0) return 0.0;
  const double p_plus = std::clamp(0.5 * (1.0 + expectation), 0.0, 1.0);
  std::mt19937_64 rng(seed);
  std::int64_t sum = 0;
  for (std::uint64_t k = 0; k < count; ++k) sum += uniform01(rng) < p_plus ? 1 : -1;
  return static_cast<double>(sum) / static_cast<double>(count);
}

/// Shot-sampled readout: ceil(shots/2) sigma_x and floor(shots/2) sigma_y measurements on
/// independent streams derived from `seed`. Deterministic for a given seed.
inline MeasurementRecord sample_measurements(Complex exact_q, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw InvariantError("shots must be >= 1 (use simulate_exact for exact mode)");
  MeasurementRecord rec;
  rec.shots = shots;
  rec.seed = seed;
  rec.exp_x = sample_pauli_mean(exact_q.real(), (shots + 1) / 2, stream_seed(seed, 0x5858));
  rec.exp_y = sample_pauli_mean(exact_q.imag(), shots / 2, stream_seed(seed, 0x5959));
  return rec;
}

inline MeasurementRecord simulate_shots(const CircuitPlan& plan, const ModelSystem& model,
                                        const QuantumState& rho0, std::uint64_t shots, std::uint64_t seed,
                                        const Dynamics& dyn) {
  if (shots == 0) throw InvariantError("shots must be >= 1 (use simulate_exact for exact mode)");
  return sample_measurements(simulate_exact(plan, model, rho0, dyn), shots, seed);
}

inline MeasurementRecord simulate_shots(const CircuitPlan& plan, const ModelSystem& model,
                                        const QuantumState& rho0, std::uint64_t shots, std::uint64_t seed) {
  return simulate_shots(plan, model, rho0, shots, seed, *default_dynamics(model));
}

/// Applies e^{L t} (system Lindbladian, identity on the ancilla) to an ancilla (x) system
/// density matrix.
inline QuantumState evolve_channel(const QuantumState& joint, double duration, const ModelSystem& model) {
  if (!(duration >= 0.0)) throw InvariantError("duration must be >= 0");
  const LindbladDynamics dyn(model);
  JointState s = JointState::from(joint, model.dim());
  s.evolve(dyn, duration);
  return QuantumState::density(s.matrix());
}

/// Unitary evolution of an ancilla (x) system (x) bath density matrix under
/// 1 (x) (h0 (x) 1 + 1 (x) h_bath + coupling).
inline QuantumState evolve_explicit_bath(const QuantumState& joint, double duration, const ModelSystem& model,
                                         const BathSpec& bath) {
  if (!(duration >= 0.0)) throw InvariantError("duration must be >= 0");
  const ExplicitBathDynamics dyn(model, bath);
  JointState s = JointState::from(joint, dyn.space_dim());
  s.evolve(dyn, duration);
  return QuantumState::density(s.matrix());
}

}  // namespace qspectro
