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

// Response functions from simulated Hadamard-test readouts: mixed finite-difference
// stencils over the dipole angles F, per-diagram estimation, and sampling over grids of
// inter-pulse delays.

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "qspectro/circuit.hpp"
#include "qspectro/diagrams.hpp"
#include "qspectro/parallel.hpp"

namespace qspectro {

struct StencilPoint {
  std::vector<double> f;
  double weight = 0.0;
};

/// Tensor-product central-difference stencil for d^{n+1} / dF_0 ... dF_n at F = 0.
struct Stencil {
  int order = 0;  ///< response order n; the stencil has n + 1 axes
  double delta = 0.0;
  int accuracy = 2;
  std::vector<StencilPoint> points;

  template <class Fn>
  auto apply(Fn&& fn) const {
    decltype(fn(points.front().f)) sum{};
    for (const auto& p : points) sum += p.weight * fn(p.f);
    return sum;
  }
};

/// accuracy 2: offsets +/-delta, weights prod_j s_j / (2 delta)^{n+1} (2^{n+1} points).
/// accuracy 4: offsets {-2,-1,1,2} delta with weights {1,-8,8,-1}/(12 delta) per axis.
inline Stencil build_stencil(int n, double delta, int accuracy = 2) {
  if (n < 0) throw InvariantError("order must be >= 0");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvariantError("stencil step delta must be > 0");
  std::vector<double> offsets;
  std::vector<double> weights;
  if (accuracy == 2) {
    offsets = {delta, -delta};
    weights = {1.0 / (2.0 * delta), -1.0 / (2.0 * delta)};
  } else if (accuracy == 4) {
    offsets = {-2.0 * delta, -delta, delta, 2.0 * delta};
    weights = {1.0 / (12.0 * delta), -8.0 / (12.0 * delta), 8.0 / (12.0 * delta), -1.0 / (12.0 * delta)};
  } else {
    throw InvariantError("stencil accuracy must be 2 or 4");
  }
  Stencil s{n, delta, accuracy, {}};
  const size_t axes = static_cast<size_t>(n) + 1;
  const size_t per_axis = offsets.size();
  size_t total = 1;
  for (size_t a = 0; a < axes; ++a) total *= per_axis;
  s.points.reserve(total);
  for (size_t idx = 0; idx < total; ++idx) {
    StencilPoint p;
    p.f.resize(axes);
    p.weight = 1.0;
    size_t rest = idx;
    for (size_t a = 0; a < axes; ++a) {
      const size_t k = rest % per_axis;
      rest /= per_axis;
      p.f[a] = offsets[k];
      p.weight *= weights[k];
    }
    s.points.push_back(std::move(p));
  }
  return s;
}

struct EstimatorOptions {
  double delta = 1e-2;
  int stencil_accuracy = 2;
  /// 0 selects exact expectation values; otherwise the shot budget per circuit.
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  /// Insert unitary dipoles directly instead of differentiating (two-level systems).
  bool pauli_shortcut = false;
  /// Scale each F axis by the spectral norm of its dipole, so delta is relative to a
  /// unit-norm dipole.
  bool normalize_dipoles = true;
  /// Evaluate grids through conjugate pairs (2^{n-1} diagrams instead of 2^n).
  bool conjugate_reduction = true;

  bool exact() const { return shots == 0; }
};

inline constexpr double kDefaultExactDelta = 1e-2;
inline constexpr double kDefaultShotDelta = 0.3;

namespace detail {

inline Complex readout(const CircuitPlan& plan, const ModelSystem& model, const QuantumState& rho0,
                       const Dynamics& dyn, const EstimatorOptions& opt, std::uint64_t seed) {
  if (opt.exact()) return simulate_exact(plan, model, rho0, dyn);
  return simulate_shots(plan, model, rho0, opt.shots, seed, dyn).q();
}

inline Complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace detail

/// Correlation value <...D(t)...rho0...D(t')...> of one diagram at interaction times
/// `times[slot]`, recovered from circuit readouts.
///
/// With the dipole exponentials M(F) = exp(-i D F) applied in both ancilla branches, each
/// ket-side derivative at F = 0 yields -i D and each bra-side one +i D, so the value is
/// (-1)^b i^{n+1} d^{n+1} Q / dF_0...dF_n. `stream` labels the RNG sub-stream in shot mode.
inline Complex estimate_R(const FeynmanDiagram& diagram, std::span<const double> times, const EstimatorOptions& opt,
                          const ModelSystem& model, const QuantumState& rho0, const Dynamics& dyn,
                          std::uint64_t stream = 0) {
  if (diagram.uses(DipoleKind::Magnetic) && !model.m)
    throw InvariantError("diagram has a magnetic interaction but the model has no m");
  if (opt.pauli_shortcut) {
    const CircuitPlan plan = compile_direct(diagram, times);
    return detail::readout(plan, model, rho0, dyn, opt, stream_seed(opt.seed, stream));
  }
  const int n = diagram.order();
  const Stencil stencil = build_stencil(n, opt.delta, opt.stencil_accuracy);
  std::vector<double> scale(static_cast<size_t>(n) + 1, 1.0);
  double weight_scale = 1.0;
  if (opt.normalize_dipoles) {
    for (const auto& x : diagram.interactions()) {
      const double s = model.dipole(x.kind).norm();
      if (s > 0.0) {
        scale[static_cast<size_t>(x.slot)] = s;
        weight_scale *= s;
      }
    }
  }
  Complex sum = 0.0;
  std::vector<double> f(static_cast<size_t>(n) + 1);
  for (size_t p = 0; p < stencil.points.size(); ++p) {
    const auto& pt = stencil.points[p];
    for (size_t j = 0; j < f.size(); ++j) f[j] = pt.f[j] / scale[j];
    const CircuitPlan plan = compile(diagram, times, f);
    sum += pt.weight * detail::readout(plan, model, rho0, dyn, opt, stream_seed(opt.seed, stream, p));
  }
  const double bra_sign = diagram.bra_count() % 2 == 0 ? 1.0 : -1.0;
  return bra_sign * detail::i_pow(n + 1) * weight_scale * sum;
}

inline Complex estimate_R(const FeynmanDiagram& diagram, std::span<const double> times, const EstimatorOptions& opt,
                          const ModelSystem& model, const QuantumState& rho0, std::uint64_t stream = 0) {
  return estimate_R(diagram, times, opt, model, rho0, *default_dynamics(model), stream);
}

/// One delay axis tau_j. Scanned axes sample tau = k * step for k = 0..count-1.
struct GridAxis {
  std::string label;
  bool scanned = false;
  double step = 0.0;
  size_t count = 1;
  double fixed = 0.0;

  static GridAxis scan(std::string label, double step, size_t count) {
    return GridAxis{std::move(label), true, step, count, 0.0};
  }
  static GridAxis hold(std::string label, double value) { return GridAxis{std::move(label), false, 0.0, 1, value}; }

  double value(size_t k) const { return scanned ? static_cast<double>(k) * step : fixed; }
  size_t size() const { return scanned ? count : 1; }
};

struct GridSpec {
  std::vector<GridAxis> axes;
};

/// R^(n) sampled on a delay grid, values row-major over (tau_1, ..., tau_n).
struct ResponseGrid {
  int order = 0;
  std::vector<GridAxis> axes;
  std::vector<Complex> values;
  bool exact = true;

  std::vector<size_t> shape() const {
    std::vector<size_t> s;
    for (const auto& a : axes) s.push_back(a.size());
    return s;
  }

  size_t flat_index(const std::vector<size_t>& idx) const {
    size_t flat = 0;
    for (size_t a = 0; a < axes.size(); ++a) flat = flat * axes[a].size() + idx[a];
    return flat;
  }

  std::vector<size_t> unflatten(size_t flat) const {
    std::vector<size_t> idx(axes.size());
    for (size_t a = axes.size(); a-- > 0;) {
      idx[a] = flat % axes[a].size();
      flat /= axes[a].size();
    }
    return idx;
  }

  /// Interaction times t_0 = 0, t_j = t_{j-1} + tau_j for a multi-index.
  std::vector<double> times(const std::vector<size_t>& idx) const {
    std::vector<double> t(axes.size() + 1, 0.0);
    for (size_t a = 0; a < axes.size(); ++a) t[a + 1] = t[a] + axes[a].value(idx[a]);
    return t;
  }

  Complex at(const std::vector<size_t>& idx) const { return values.at(flat_index(idx)); }
};

/// Step sizes worth caching for open-system propagation on this grid.
inline std::vector<double> grid_steps(const GridSpec& grid) {
  std::vector<double> steps;
  for (const auto& a : grid.axes) {
    if (a.scanned && a.step > 0.0) steps.push_back(a.step);
    if (!a.scanned && a.fixed > 0.0) steps.push_back(a.fixed);
  }
  return steps;
}

/// Evaluates the diagram set (conjugate-reduced when enabled) at every delay tuple.
/// Grid points, diagrams and stencil points draw from distinct RNG sub-streams.
inline ResponseGrid response_grid(const DiagramSet& set, const GridSpec& grid, const EstimatorOptions& opt,
                                  const ModelSystem& model, const QuantumState& rho0, const Dynamics& dyn) {
  if (grid.axes.size() != static_cast<size_t>(set.order))
    throw DimensionError("grid has " + std::to_string(grid.axes.size()) + " delay axes but the response has order " +
                         std::to_string(set.order));
  for (const auto& a : grid.axes) {
    if (a.scanned && (!(a.step > 0.0) || a.count < 1)) throw InvariantError("scanned axis needs step > 0, count >= 1");
    if (!a.scanned && !(a.fixed >= 0.0)) throw InvariantError("fixed delays must be >= 0");
  }
  const DiagramSet terms = opt.conjugate_reduction ? conjugate_reduce(set) : set;
  ResponseGrid out;
  out.order = set.order;
  out.axes = grid.axes;
  out.exact = opt.exact();
  size_t total = 1;
  for (const auto& a : grid.axes) total *= a.size();
  out.values.assign(total, Complex{0.0, 0.0});
  parallel_for(total, [&](size_t flat) {
    const auto t = out.times(out.unflatten(flat));
    std::vector<Complex> vals;
    vals.reserve(terms.size());
    for (size_t d = 0; d < terms.size(); ++d) {
      const std::uint64_t stream = (static_cast<std::uint64_t>(flat) << 16) ^ d;
      vals.push_back(estimate_R(terms.terms[d].diagram, t, opt, model, rho0, dyn, stream));
    }
    out.values[flat] = terms.combine(vals);
  });
  return out;
}

inline ResponseGrid response_grid(const DiagramSet& set, const GridSpec& grid, const EstimatorOptions& opt,
                                  const ModelSystem& model, const QuantumState& rho0) {
  const auto dyn = default_dynamics(model, grid_steps(grid));
  return response_grid(set, grid, opt, model, rho0, *dyn);
}

/// Checks the grid against the catalog entry's delay layout and evaluates it.
inline ResponseGrid response_grid(const CatalogEntry& entry, const GridSpec& grid, const EstimatorOptions& opt,
                                  const ModelSystem& model, const QuantumState& rho0) {
  if (grid.axes.size() != entry.delays.size())
    throw DimensionError(entry.name + " needs " + std::to_string(entry.delays.size()) + " delay axes");
  for (size_t a = 0; a < grid.axes.size(); ++a) {
    const auto& role = entry.delays[a];
    const auto& axis = grid.axes[a];
    if (role.role == DelayRole::FixedZero && (axis.scanned || axis.fixed != 0.0))
      throw InvariantError(entry.name + ": delay " + role.label + " must be held at 0");
    if (role.role == DelayRole::Fixed && axis.scanned)
      throw InvariantError(entry.name + ": delay " + role.label + " is held fixed, not scanned");
  }
  return response_grid(entry.diagrams, grid, opt, model, rho0);
}

}  // namespace qspectro
