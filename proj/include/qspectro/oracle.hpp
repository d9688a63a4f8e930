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

// Reference evaluations by direct operator algebra, with no ancilla, no circuit and no
// finite differences. Used by the oracle-check subcommand and the test suites.

#include <span>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "qspectro/diagrams.hpp"
#include "qspectro/models.hpp"
#include "qspectro/operators.hpp"

namespace qspectro::oracle {

/// U^dagger(t) A U(t).
inline Matrix heisenberg(const Matrix& a, const HermitianOperator& h, double t) {
  const Matrix u = h.exp_minus_i(t);
  return u.adjoint() * a * u;
}

/// <D_k(t_Kk) ... D_1(t_K1) rho0 D(t_B1) ... D(t_Bb)> for a closed model.
inline Complex correlation(const FeynmanDiagram& diagram, std::span<const double> times, const ModelSystem& model,
                           const QuantumState& rho0) {
  const Matrix rho = rho0.density_matrix();
  Matrix left = identity(model.dim());
  Matrix right = identity(model.dim());
  for (const auto& x : diagram.interactions()) {
    const Matrix op = heisenberg(model.dipole(x.kind).matrix(), model.h0, times[static_cast<size_t>(x.slot)]);
    if (x.side == Side::Ket)
      left = op * left;
    else
      right = right * op;
  }
  return (left * rho * right).trace();
}

/// Lindbladian built entry by entry in row-major vectorisation, vec(X)_(i*d+j) = X_ij.
inline Matrix lindbladian_row_major(const ModelSystem& model) {
  const Index d = model.dim();
  const Index d2 = d * d;
  Matrix l = Matrix::Zero(d2, d2);
  auto add_left_right = [&](const Matrix& a, const Matrix& b, Complex c) {
    // X -> c * a X b: (a X b)_ij = sum_kl a_ik X_kl b_lj
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j)
        for (Index k = 0; k < d; ++k)
          for (Index m = 0; m < d; ++m) l(i * d + j, k * d + m) += c * a(i, k) * b(m, j);
  };
  const Matrix id = identity(d);
  add_left_right(model.h0.matrix(), id, -kI);
  add_left_right(id, model.h0.matrix(), kI);
  for (const auto& jump : model.jumps) {
    const Matrix ldl = jump.op.adjoint() * jump.op;
    add_left_right(jump.op, jump.op.adjoint(), jump.rate);
    add_left_right(ldl, id, -0.5 * jump.rate);
    add_left_right(id, ldl, -0.5 * jump.rate);
  }
  return l;
}

/// Same correlation for open or closed models, in the Schroedinger picture: the state
/// is propagated forward between interactions and dipoles act on its left (ket) or
/// right (bra); the signal dipole is traced at the end.
inline Complex correlation_open(const FeynmanDiagram& diagram, std::span<const double> times,
                                const ModelSystem& model, const QuantumState& rho0) {
  const Index d = model.dim();
  const Matrix l = lindbladian_row_major(model);
  auto propagate = [&](const Matrix& x, double t) -> Matrix {
    if (t == 0.0) return x;
    Vector v(d * d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) v(i * d + j) = x(i, j);
    const Vector w = Matrix((l * t).exp()) * v;
    Matrix y(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) y(i, j) = w(i * d + j);
    return y;
  };
  Matrix x = rho0.density_matrix();
  double now = 0.0;
  const int n = diagram.order();
  for (const auto& it : diagram.interactions()) {
    const double t = times[static_cast<size_t>(it.slot)];
    x = propagate(x, t - now);
    now = t;
    const Matrix& op = model.dipole(it.kind).matrix();
    if (it.slot == n) return (op * x).trace();
    x = it.side == Side::Ket ? Matrix(op * x) : Matrix(x * op);
  }
  return 0.0;
}

/// mu(t_n)[mu(t_{n-1}), ... [mu(t_0), rho0]] traced, evaluated recursively (closed model).
inline Complex nested_commutator(int n, std::span<const double> times, const ModelSystem& model,
                                 const QuantumState& rho0, const std::vector<DipoleKind>& kinds = {}) {
  auto kind = [&](int s) { return kinds.empty() ? DipoleKind::Electric : kinds[static_cast<size_t>(s)]; };
  auto op = [&](int s) { return heisenberg(model.dipole(kind(s)).matrix(), model.h0, times[static_cast<size_t>(s)]); };
  Matrix x = rho0.density_matrix();
  for (int s = 0; s < n; ++s) {
    const Matrix a = op(s);
    x = a * x - x * a;
  }
  return (op(n) * x).trace();
}

/// Tr(B^dagger K rho0) with B and K assembled from matrix exponentials in the
/// telescoped, forward-only form: between consecutive interactions both factors evolve
/// by the same interval; K collects exp(-i D F) at ket interactions, B at bra ones.
inline Complex hadamard_overlap(const FeynmanDiagram& diagram, std::span<const double> times,
                                std::span<const double> f, const ModelSystem& model, const QuantumState& rho0) {
  Matrix k = identity(model.dim());
  Matrix b = identity(model.dim());
  double now = 0.0;
  for (const auto& x : diagram.interactions()) {
    const double t = times[static_cast<size_t>(x.slot)];
    const Matrix u = matexp_skewherm(model.h0, t - now);
    now = t;
    k = u * k;
    b = u * b;
    const Matrix m = matexp_skewherm(model.dipole(x.kind), f[static_cast<size_t>(x.slot)]);
    if (x.side == Side::Ket)
      k = m * k;
    else
      b = m * b;
  }
  return (b.adjoint() * k * rho0.density_matrix()).trace();
}

/// The same overlap written with Heisenberg-picture factors and explicit backward
/// evolutions U^dagger(t), before telescoping.
inline Complex non_telescoped_overlap(const FeynmanDiagram& diagram, std::span<const double> times,
                                      std::span<const double> f, const ModelSystem& model,
                                      const QuantumState& rho0) {
  const Index d = model.dim();
  auto u = [&](double t) { return matexp_skewherm(model.h0, t); };
  Matrix k = identity(d);
  Matrix b_dag = identity(d);
  double t_final = 0.0;
  for (const auto& x : diagram.interactions()) {
    const double t = times[static_cast<size_t>(x.slot)];
    const Matrix m = matexp_skewherm(model.dipole(x.kind), f[static_cast<size_t>(x.slot)]);
    if (x.side == Side::Ket) {
      k = u(t).adjoint() * m * u(t) * k;
    } else {
      b_dag = b_dag * u(t).adjoint() * m.adjoint() * u(t);
    }
    t_final = t;
  }
  // K ends with U(t) on the left and B^dagger with U^dagger(t) on the right.
  k = u(t_final) * k;
  b_dag = b_dag * u(t_final).adjoint();
  return (b_dag * k * rho0.density_matrix()).trace();
}

/// Hadamard-test readout <sigma_x> + i <sigma_y> computed on the full ancilla (x) system
/// density matrix: gates as 2d x 2d matrices, evolution by the entrywise Lindbladian of
/// the joint model whose jump operators are I (x) L_k. Valid for open and closed models.
inline Complex joint_space_readout(const FeynmanDiagram& diagram, std::span<const double> times,
                                   std::span<const double> f, const ModelSystem& model, const QuantumState& rho0) {
  const Index d = model.dim();
  const Matrix i2 = identity(2);
  const Matrix id = identity(d);
  auto kron = [](const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  ModelSystem joint{HermitianOperator(kron(i2, model.h0.matrix())), HermitianOperator(kron(i2, model.mu.matrix())),
                    std::nullopt, std::nullopt, {}, 2 * d};
  for (const auto& j : model.jumps) joint.jumps.push_back({kron(i2, j.op), j.rate});
  const Matrix l = lindbladian_row_major(joint);
  const Index n2 = 2 * d;
  auto propagate = [&](const Matrix& x, double t) -> Matrix {
    if (t == 0.0) return x;
    Vector v(n2 * n2);
    for (Index i = 0; i < n2; ++i)
      for (Index j = 0; j < n2; ++j) v(i * n2 + j) = x(i, j);
    const Vector w = Matrix((l * t).exp()) * v;
    Matrix y(n2, n2);
    for (Index i = 0; i < n2; ++i)
      for (Index j = 0; j < n2; ++j) y(i, j) = w(i * n2 + j);
    return y;
  };
  Matrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  const Matrix had = kron(h / std::sqrt(2.0), id);
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  Matrix anc = Matrix::Zero(2, 2);
  anc(0, 0) = 1.0;
  Matrix x = had * kron(anc, rho0.density_matrix()) * had.adjoint();
  double now = 0.0;
  for (const auto& it : diagram.interactions()) {
    const double t = times[static_cast<size_t>(it.slot)];
    x = propagate(x, t - now);
    now = t;
    const Matrix m = matexp_skewherm(model.dipole(it.kind), f[static_cast<size_t>(it.slot)]);
    const Matrix gate = it.side == Side::Ket ? Matrix(kron(p0, id) + kron(p1, m)) : Matrix(kron(p0, m) + kron(p1, id));
    x = gate * x * gate.adjoint();
  }
  Matrix raise = Matrix::Zero(2, 2);
  raise(0, 1) = 2.0;  // sigma_x + i sigma_y
  return (kron(raise, id) * x).trace();
}

/// Response function of a diagram set, evaluated term by term with `correlation_open`.
inline Complex response(const DiagramSet& set, std::span<const double> times, const ModelSystem& model,
                        const QuantumState& rho0) {
  std::vector<Complex> values;
  for (const auto& t : set.terms) values.push_back(correlation_open(t.diagram, times, model, rho0));
  return set.combine(values);
}

}  // namespace qspectro::oracle
