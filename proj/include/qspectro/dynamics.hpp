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

// Evolution backends acting on system operators (or on system (x) bath operators):
// closed unitary conjugation, Lindblad channels through the exponentiated vectorised
// superoperator, and an explicit finite bath evolved unitarily with the system.

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "qspectro/models.hpp"
#include "qspectro/operators.hpp"

namespace qspectro {

/// Linear map X -> E_t(X) on the space the circuit's system register lives in.
class Dynamics {
 public:
  virtual ~Dynamics() = default;

  /// Dimension of the register (system, or system (x) bath).
  virtual Index space_dim() const = 0;

  /// Applies the forward evolution for `duration` >= 0 to an arbitrary (not necessarily
  /// Hermitian) operator on the register.
  virtual Matrix evolve(const Matrix& x, double duration) const = 0;

  /// Lifts a system operator to the register.
  virtual Matrix embed_operator(const Matrix& system_op) const { return system_op; }

  /// Lifts a system density matrix to the register's initial state.
  virtual Matrix embed_state(const Matrix& rho0) const { return rho0; }

  /// True when the evolution is unitary on the register.
  virtual bool is_unitary() const = 0;
};

class ClosedDynamics final : public Dynamics {
 public:
  explicit ClosedDynamics(HermitianOperator h) : h_(std::move(h)) {}

  Index space_dim() const override { return h_.dim(); }
  bool is_unitary() const override { return true; }

  Matrix evolve(const Matrix& x, double duration) const override {
    if (duration == 0.0) return x;
    const Matrix u = h_.exp_minus_i(duration);
    return u * x * u.adjoint();
  }

 private:
  HermitianOperator h_;
};

/// Column-stacking vectorisation: vec(A X B) = (B^T (x) A) vec(X).
inline Matrix lindblad_superoperator(const ModelSystem& model) {
  const Index d = model.dim();
  const Matrix id = identity(d);
  const Matrix& h = model.h0.matrix();
  Matrix l = -kI * (tensor(id, h) - tensor(h.transpose(), id));
  for (const auto& jump : model.jumps) {
    if (jump.rate == 0.0) continue;
    const Matrix& op = jump.op;
    const Matrix ldl = op.adjoint() * op;
    l += jump.rate * (tensor(op.conjugate(), op) - 0.5 * tensor(id, ldl) - 0.5 * tensor(ldl.transpose(), id));
  }
  return l;
}

inline Vector vec(const Matrix& x) { return Eigen::Map<const Vector>(x.data(), x.size()); }

inline Matrix unvec(const Vector& v, Index d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

/// e^{L t} with L the model's Lindbladian, acting on the system only.
///
/// Propagators for the step sizes passed at construction are precomputed together with
/// their power-of-two multiples; durations that are integer multiples of a cached step
/// are applied as products of cached matrices, anything else is exponentiated on demand.
class LindbladDynamics final : public Dynamics {
 public:
  explicit LindbladDynamics(const ModelSystem& model, const std::vector<double>& cached_steps = {})
      : dim_(model.dim()), generator_(lindblad_superoperator(model)) {
    for (double step : cached_steps) {
      if (!(step > 0.0)) continue;
      bool known = false;
      for (const auto& c : cache_) known = known || std::abs(c.step - step) <= 1e-12 * step;
      if (known) continue;
      CachedStep c{step, {}};
      c.powers.push_back(Matrix((generator_ * step).exp()));
      for (int j = 1; j < kMaxDoublings; ++j) c.powers.push_back(c.powers.back() * c.powers.back());
      cache_.push_back(std::move(c));
    }
  }

  Index space_dim() const override { return dim_; }
  bool is_unitary() const override { return false; }
  const Matrix& generator() const { return generator_; }

  /// Superoperator e^{L t} (d^2 x d^2).
  Matrix propagator(double duration) const {
    if (duration == 0.0) return identity(dim_ * dim_);
    for (const auto& c : cache_) {
      const long k = multiple(c.step, duration);
      if (k > 0) {
        Matrix out = identity(dim_ * dim_);
        for (int j = 0; j < kMaxDoublings && (k >> j) != 0; ++j)
          if ((k >> j) & 1L) out = c.powers[static_cast<size_t>(j)] * out;
        return out;
      }
    }
    return (generator_ * duration).exp();
  }

  Matrix evolve(const Matrix& x, double duration) const override {
    if (duration == 0.0) return x;
    for (const auto& c : cache_) {
      const long k = multiple(c.step, duration);
      if (k > 0) {
        Vector v = vec(x);
        for (int j = 0; j < kMaxDoublings && (k >> j) != 0; ++j)
          if ((k >> j) & 1L) v = c.powers[static_cast<size_t>(j)] * v;
        return unvec(v, dim_);
      }
    }
    return unvec(Matrix((generator_ * duration).exp()) * vec(x), dim_);
  }

 private:
  static constexpr int kMaxDoublings = 24;

  struct CachedStep {
    double step;
    std::vector<Matrix> powers;  // e^{L step 2^j}
  };

  static long multiple(double step, double duration) {
    const double r = duration / step;
    const double k = std::round(r);
    if (k < 1.0 || k >= static_cast<double>(1L << kMaxDoublings)) return 0;
    return std::abs(r - k) <= 1e-9 * k ? static_cast<long>(k) : 0;
  }

  Index dim_;
  Matrix generator_;
  std::vector<CachedStep> cache_;
};

/// A finite bath evolved unitarily together with the system.
struct BathSpec {
  Matrix h_bath;    ///< bath Hamiltonian (dB x dB)
  Matrix coupling;  ///< Hermitian system-bath coupling on system (x) bath
  Matrix rho_bath;  ///< initial bath density matrix
};

inline constexpr Index kMaxBathDim = 8;
inline constexpr Index kMaxJointBathDim = 512;

class ExplicitBathDynamics final : public Dynamics {
 public:
  ExplicitBathDynamics(const ModelSystem& model, const BathSpec& bath)
      : system_dim_(model.dim()),
        bath_dim_(bath.h_bath.rows()),
        rho_bath_(bath.rho_bath),
        total_(make_total(model, bath)) {}

  Index space_dim() const override { return system_dim_ * bath_dim_; }
  Index system_dim() const { return system_dim_; }
  Index bath_dim() const { return bath_dim_; }
  bool is_unitary() const override { return true; }

  Matrix evolve(const Matrix& x, double duration) const override {
    if (duration == 0.0) return x;
    const Matrix u = total_.exp_minus_i(duration);
    return u * x * u.adjoint();
  }

  Matrix embed_operator(const Matrix& system_op) const override {
    return tensor(system_op, identity(bath_dim_));
  }
  Matrix embed_state(const Matrix& rho0) const override { return tensor(rho0, rho_bath_); }

 private:
  static HermitianOperator make_total(const ModelSystem& model, const BathSpec& bath) {
    const Index ds = model.dim();
    const Index db = bath.h_bath.rows();
    if (db < 1 || db > kMaxBathDim) throw DimensionError("bath dimension must be in 1..8");
    if (2 * ds * db > kMaxJointBathDim) throw DimensionError("ancilla-system-bath dimension exceeds cap");
    if (bath.coupling.rows() != ds * db || bath.coupling.cols() != ds * db)
      throw DimensionError("coupling must act on system (x) bath");
    if (bath.rho_bath.rows() != db || bath.rho_bath.cols() != db)
      throw DimensionError("bath state dimension");
    if (!is_hermitian(bath.coupling)) throw InvariantError("system-bath coupling must be Hermitian");
    QuantumState::density(bath.rho_bath);
    const HermitianOperator hb(bath.h_bath);
    return HermitianOperator(tensor(model.h0.matrix(), identity(db)) + tensor(identity(ds), hb.matrix()) +
                             bath.coupling);
  }

  Index system_dim_;
  Index bath_dim_;
  Matrix rho_bath_;
  HermitianOperator total_;
};

/// Closed dynamics for models without active jumps, Lindblad dynamics otherwise.
inline std::shared_ptr<const Dynamics> default_dynamics(const ModelSystem& model,
                                                        const std::vector<double>& cached_steps = {}) {
  if (model.is_open()) return std::make_shared<LindbladDynamics>(model, cached_steps);
  return std::make_shared<ClosedDynamics>(model.h0);
}

/// Choi matrix sum_ij |i><j| (x) Phi(|i><j|) of the system channel for `duration`.
inline Matrix choi_matrix(const Dynamics& dyn, double duration) {
  const Index d = dyn.space_dim();
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1.0;
      choi.block(i * d, j * d, d, d) = dyn.evolve(e, duration);
    }
  return choi;
}

}  // namespace qspectro
