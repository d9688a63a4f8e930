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

// Dense complex linear algebra for small quantum systems: Hermitian operators with
// cached spectral decompositions, unitary propagators, states, Kronecker products and
// partial traces.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <utility>

#include "qspectro/errors.hpp"

namespace qspectro {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

inline double max_abs(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& a, double rel_tol = 1e-12) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= rel_tol * max_abs(a);
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) < tol;
}

inline Matrix identity(Index dim) { return Matrix::Identity(dim, dim); }

inline Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix sigma_y() {
  Matrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

inline Matrix sigma_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

/// Hermitian operator with its eigendecomposition computed once at construction.
///
/// Copies share the decomposition; the value is immutable and safe to read from
/// several threads.
class HermitianOperator {
 public:
  /// Throws InvariantError unless `m` is square and Hermitian to 1e-12 relative
  /// (max-norm). The stored matrix is the exactly symmetrised (m + m^dagger) / 2.
  explicit HermitianOperator(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1) {
      throw InvariantError("operator must be square with dim >= 1");
    }
    if (!is_hermitian(m)) {
      throw InvariantError("operator is not Hermitian (max |A - A^dagger| = " +
                           std::to_string(max_abs(m - m.adjoint())) + ")");
    }
    auto data = std::make_shared<Data>();
    data->matrix = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(data->matrix);
    if (solver.info() != Eigen::Success) {
      throw InvariantError("eigendecomposition failed");
    }
    data->eigenvalues = solver.eigenvalues();
    data->eigenvectors = solver.eigenvectors();
    data_ = std::move(data);
  }

  static HermitianOperator zero(Index dim) { return HermitianOperator(Matrix::Zero(dim, dim)); }

  Index dim() const { return data_->matrix.rows(); }
  const Matrix& matrix() const { return data_->matrix; }
  const RealVector& eigenvalues() const { return data_->eigenvalues; }
  const Matrix& eigenvectors() const { return data_->eigenvectors; }

  /// Largest |eigenvalue|, i.e. the spectral norm.
  double norm() const { return data_->eigenvalues.cwiseAbs().maxCoeff(); }

  /// exp(-i * this * t). Exactly the identity at t == 0.
  Matrix exp_minus_i(double t) const {
    if (t == 0.0) return identity(dim());
    const Vector phases = (data_->eigenvalues * (-t)).unaryExpr([](double x) {
      return std::polar(1.0, x);
    });
    return data_->eigenvectors * phases.asDiagonal() * data_->eigenvectors.adjoint();
  }

 private:
  struct Data {
    Matrix matrix;
    RealVector eigenvalues;
    Matrix eigenvectors;
  };
  std::shared_ptr<const Data> data_;
};

/// exp(-iHt) through the spectral decomposition of H.
inline Matrix matexp_skewherm(const HermitianOperator& h, double t) {
  if (!std::isfinite(t)) throw InvariantError("evolution time must be finite");
  return h.exp_minus_i(t);
}

inline Matrix matexp_skewherm(const Matrix& h, double t) {
  return matexp_skewherm(HermitianOperator(h), t);
}

/// Pure state vector or density matrix on a finite Hilbert space.
class QuantumState {
 public:
  /// Throws InvariantError unless the vector has unit norm within 1e-10.
  static QuantumState pure(Vector psi) {
    if (psi.size() < 1) throw InvariantError("state dimension must be >= 1");
    if (std::abs(psi.norm() - 1.0) > 1e-10) {
      throw InvariantError("pure state is not normalised (norm = " + std::to_string(psi.norm()) +
                           ")");
    }
    QuantumState s;
    s.pure_ = true;
    s.vector_ = std::move(psi);
    return s;
  }

  /// Throws InvariantError unless rho is Hermitian, has unit trace within 1e-10 and
  /// eigenvalues >= -1e-9.
  static QuantumState density(Matrix rho) {
    if (rho.rows() != rho.cols() || rho.rows() < 1) {
      throw InvariantError("density matrix must be square with dim >= 1");
    }
    if (max_abs(rho - rho.adjoint()) > 1e-10) {
      throw InvariantError("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - 1.0) > 1e-10) {
      throw InvariantError("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-9) {
      throw InvariantError("density matrix has a negative eigenvalue");
    }
    QuantumState s;
    s.pure_ = false;
    s.density_ = std::move(rho);
    return s;
  }

  static QuantumState basis(Index dim, Index index) {
    if (index < 0 || index >= dim) throw DimensionError("basis index out of range");
    Vector v = Vector::Zero(dim);
    v(index) = 1.0;
    return pure(std::move(v));
  }

  static QuantumState maximally_mixed(Index dim) {
    return density(identity(dim) / static_cast<double>(dim));
  }

  bool is_pure() const { return pure_; }
  Index dim() const { return pure_ ? vector_.size() : density_.rows(); }

  const Vector& vector() const {
    if (!pure_) throw InvariantError("state is not a pure vector");
    return vector_;
  }

  Matrix density_matrix() const { return pure_ ? Matrix(vector_ * vector_.adjoint()) : density_; }

 private:
  QuantumState() = default;
  bool pure_ = true;
  Vector vector_;
  Matrix density_;
};

/// Tr(O rho), or <psi|O|psi> for pure states.
inline Complex expectation(const QuantumState& state, const Matrix& op) {
  if (op.rows() != state.dim() || op.cols() != state.dim()) {
    throw DimensionError("operator and state dimensions differ");
  }
  if (state.is_pure()) return state.vector().dot(op * state.vector());
  const Matrix rho = state.density_matrix();
  // Tr(O rho) without forming the product.
  return (op.transpose().cwiseProduct(rho)).sum();
}

inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

inline QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  if (a.is_pure() && b.is_pure()) return QuantumState::pure(tensor(a.vector(), b.vector()));
  return QuantumState::density(tensor(a.density_matrix(), b.density_matrix()));
}

enum class Subsystem { A, B };

/// Reduced density matrix of the factor `keep` of a state on C^dA (x) C^dB.
inline Matrix partial_trace(const Matrix& rho, Subsystem keep, Index dim_a, Index dim_b) {
  if (rho.rows() != rho.cols() || dim_a < 1 || dim_b < 1 || dim_a * dim_b != rho.rows()) {
    throw DimensionError("partial trace: dims do not factor the state dimension");
  }
  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
      for (Index j = 0; j < dim_a; ++j) out(i, j) = rho.block(i * dim_b, j * dim_b, dim_b, dim_b).trace();
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (Index i = 0; i < dim_a; ++i) out += rho.block(i * dim_b, i * dim_b, dim_b, dim_b);
  return out;
}

inline QuantumState partial_trace(const QuantumState& rho, Subsystem keep,
                                  std::pair<Index, Index> dims) {
  if (rho.is_pure() && rho.dim() != dims.first * dims.second) {
    throw DimensionError("partial trace: dims do not factor the state dimension");
  }
  return QuantumState::density(partial_trace(rho.density_matrix(), keep, dims.first, dims.second));
}

}  // namespace qspectro
