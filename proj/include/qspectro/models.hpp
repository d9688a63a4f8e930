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

// Benchmark molecular models. Units: hbar = 1, energies are angular frequencies and
// dipoles are dimensionless.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qspectro/errors.hpp"
#include "qspectro/operators.hpp"

namespace qspectro {

enum class DipoleKind { Electric, Magnetic };

struct JumpOperator {
  Matrix op;
  double rate = 0.0;
};

struct ModelSystem {
  HermitianOperator h0;
  HermitianOperator mu;
  std::optional<HermitianOperator> m;
  /// Dipole projected on the second lab axis, used only by linear dichroism.
  std::optional<HermitianOperator> mu_perp;
  std::vector<JumpOperator> jumps;
  /// Dimension of the leading electronic factor (dim for purely electronic models).
  Index electronic_dim = 0;

  Index dim() const { return h0.dim(); }
  bool is_open() const {
    for (const auto& j : jumps)
      if (j.rate > 0.0) return true;
    return false;
  }

  const HermitianOperator& dipole(DipoleKind kind) const {
    if (kind == DipoleKind::Electric) return mu;
    if (!m) throw InvariantError("model has no magnetic dipole operator");
    return *m;
  }

  /// Lowest eigenvector of h0 as a pure state.
  QuantumState ground_state() const {
    Vector v = h0.eigenvectors().col(0);
    return QuantumState::pure(v / v.norm());
  }
};

namespace detail {

inline void check_model(const ModelSystem& model) {
  const Index d = model.dim();
  if (model.mu.dim() != d) throw DimensionError("mu dimension differs from h0");
  if (model.m && model.m->dim() != d) throw DimensionError("m dimension differs from h0");
  if (model.mu_perp && model.mu_perp->dim() != d)
    throw DimensionError("mu_perp dimension differs from h0");
  for (const auto& j : model.jumps) {
    if (j.op.rows() != d || j.op.cols() != d) throw DimensionError("jump operator dimension");
    if (!(j.rate >= 0.0)) throw InvariantError("jump rates must be >= 0");
  }
}

}  // namespace detail

/// |g> = index 0, |e> = index 1; h0 = omega0 |e><e|, mu = sigma_x.
inline ModelSystem two_level(double omega0) {
  if (!(omega0 > 0.0)) throw InvariantError("two_level: omega0 must be > 0");
  Matrix h = Matrix::Zero(2, 2);
  h(1, 1) = omega0;
  return ModelSystem{HermitianOperator(h), HermitianOperator(sigma_x()), {}, {}, {}, 2};
}

/// Diagonal h0 with nearest-neighbour real dipoles on the first off-diagonals.
inline ModelSystem ladder(const std::vector<double>& energies, const std::vector<double>& dipoles) {
  if (energies.empty()) throw InvariantError("ladder: need at least one level");
  if (dipoles.size() + 1 != energies.size())
    throw InvariantError("ladder: need exactly one dipole per adjacent pair of levels");
  const Index d = static_cast<Index>(energies.size());
  Matrix h = Matrix::Zero(d, d);
  Matrix mu = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) h(i, i) = energies[static_cast<size_t>(i)];
  for (Index i = 0; i + 1 < d; ++i) {
    mu(i, i + 1) = dipoles[static_cast<size_t>(i)];
    mu(i + 1, i) = dipoles[static_cast<size_t>(i)];
  }
  return ModelSystem{HermitianOperator(h), HermitianOperator(mu), {}, {}, {}, d};
}

/// Truncated harmonic-oscillator annihilation operator on n_fock levels.
inline Matrix annihilation(Index n_fock) {
  Matrix a = Matrix::Zero(n_fock, n_fock);
  for (Index k = 1; k < n_fock; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

/// Two electronic states (outer factor) linearly coupled to one vibrational mode.
///
/// h0 = omega_e |e><e| (x) 1 + omega_v 1 (x) a^dagger a + omega_v d |e><e| (x) q,
/// with q = (a + a^dagger)/sqrt(2) the dimensionless coordinate, so the excited
/// surface is shifted by d and the Huang-Rhys factor is d^2/2. mu = sigma_x (x) 1
/// (Condon approximation).
inline ModelSystem displaced_oscillator(double omega_e, double omega_v, double d, Index n_fock) {
  if (n_fock < 2) throw InvariantError("displaced_oscillator: n_fock must be >= 2");
  const Matrix a = annihilation(n_fock);
  const Matrix num = a.adjoint() * a;
  const Matrix q = (a + a.adjoint()) / std::sqrt(2.0);
  Matrix pe = Matrix::Zero(2, 2);
  pe(1, 1) = 1.0;
  const Matrix h = omega_e * tensor(pe, identity(n_fock)) + omega_v * tensor(identity(2), num) +
                   omega_v * d * tensor(pe, q);
  const Matrix mu = tensor(sigma_x(), identity(n_fock));
  return ModelSystem{HermitianOperator(h), HermitianOperator(mu), {}, {}, {}, 2};
}

/// h0 -> h0 + delta_h (static-field term); everything else unchanged.
inline ModelSystem with_static_field(const ModelSystem& model, const Matrix& delta_h) {
  if (delta_h.rows() != model.dim() || delta_h.cols() != model.dim())
    throw DimensionError("with_static_field: dimension mismatch");
  ModelSystem out = model;
  out.h0 = HermitianOperator(model.h0.matrix() + HermitianOperator(delta_h).matrix());
  return out;
}

/// Projector onto the excited electronic manifold (all electronic levels above the
/// first), tensored with the identity on any vibrational factor.
inline Matrix excited_projector(const ModelSystem& model) {
  const Index ne = model.electronic_dim > 0 ? model.electronic_dim : model.dim();
  const Index nv = model.dim() / ne;
  Matrix pe = Matrix::Identity(ne, ne);
  pe(0, 0) = 0.0;
  return tensor(pe, identity(nv));
}

/// Appends the pure-dephasing jump L = P_excited with rate gamma; electronic
/// coherences then decay as exp(-gamma t / 2).
inline ModelSystem with_dephasing(const ModelSystem& model, double gamma) {
  if (!(gamma >= 0.0)) throw InvariantError("with_dephasing: gamma must be >= 0");
  ModelSystem out = model;
  out.jumps.push_back(JumpOperator{excited_projector(model), gamma});
  return out;
}

inline ModelSystem with_jump(const ModelSystem& model, const Matrix& op, double rate) {
  ModelSystem out = model;
  out.jumps.push_back(JumpOperator{op, rate});
  detail::check_model(out);
  return out;
}

inline ModelSystem with_magnetic(const ModelSystem& model, const Matrix& m) {
  ModelSystem out = model;
  out.m = HermitianOperator(m);
  detail::check_model(out);
  return out;
}

/// Magnetic dipole alpha * sigma_y-like partner of mu: upper-triangle entries of mu
/// multiplied by -i, lower by +i. For mu = sigma_x (x) 1 this is alpha sigma_y (x) 1.
inline Matrix chiral_partner(const HermitianOperator& mu, double alpha) {
  const Matrix& u = mu.matrix();
  Matrix m = Matrix::Zero(u.rows(), u.cols());
  for (Index i = 0; i < u.rows(); ++i)
    for (Index j = 0; j < u.cols(); ++j) {
      if (i < j) m(i, j) = -kI * alpha * u(i, j);
      if (i > j) m(i, j) = kI * alpha * u(i, j);
    }
  return m;
}

inline ModelSystem with_chiral_magnetic(const ModelSystem& model, double alpha) {
  return with_magnetic(model, chiral_partner(model.mu, alpha));
}

inline ModelSystem with_perpendicular_dipole(const ModelSystem& model, const Matrix& mu_perp) {
  ModelSystem out = model;
  out.mu_perp = HermitianOperator(mu_perp);
  detail::check_model(out);
  return out;
}

/// Model whose magnetic dipole is replaced by its complex conjugate m* (elementwise,
/// in the model basis).
inline ModelSystem with_conjugated_magnetic(const ModelSystem& model) {
  if (!model.m) throw InvariantError("model has no magnetic dipole operator");
  return with_magnetic(model, model.m->matrix().conjugate());
}

/// V-type three-level system: ground |0> and two excited states at omega0 +/- splitting/2
/// coupled by unit dipoles. With chiral_partner the two transitions carry opposite
/// rotatory strengths.
inline ModelSystem vtype(double omega0, double splitting) {
  if (!(omega0 > 0.0)) throw InvariantError("vtype: omega0 must be > 0");
  Matrix h = Matrix::Zero(3, 3);
  h(1, 1) = omega0 + 0.5 * splitting;
  h(2, 2) = omega0 - 0.5 * splitting;
  Matrix mu = Matrix::Zero(3, 3);
  mu(0, 1) = mu(1, 0) = 1.0;
  mu(0, 2) = mu(2, 0) = 1.0;
  Matrix m = Matrix::Zero(3, 3);
  m(0, 1) = -kI;
  m(1, 0) = kI;
  m(0, 2) = kI;
  m(2, 0) = -kI;
  ModelSystem out{HermitianOperator(h), HermitianOperator(mu), HermitianOperator(m), {}, {}, 3};
  return out;
}

}  // namespace qspectro
