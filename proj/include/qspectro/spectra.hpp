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

// Post-processing of response functions: convolution with pulse envelopes, one-sided
// Fourier transforms (e^{+i omega t} kernel), and differential spectroscopies.

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qspectro/diagrams.hpp"
#include "qspectro/response.hpp"

namespace qspectro {

struct TimeSeries {
  double dt = 0.0;
  std::vector<Complex> values;

  double time(size_t k) const { return static_cast<double>(k) * dt; }
};

enum class Polarization { Parallel, Perpendicular, Left, Right };

struct DeltaEnvelope {};
struct GaussianEnvelope {
  double width = 0.0;  ///< standard deviation in time
};

/// One pulse. `amplitude` is the pulse area, so a Gaussian tends to the delta pulse of
/// the same amplitude as its width shrinks.
struct Pulse {
  double center = 0.0;
  std::variant<DeltaEnvelope, GaussianEnvelope> envelope = DeltaEnvelope{};
  double amplitude = 1.0;
  Polarization polarization = Polarization::Parallel;

  bool is_delta() const { return std::holds_alternative<DeltaEnvelope>(envelope); }
};

struct FieldSpec {
  std::vector<Pulse> pulses;

  static FieldSpec delta_at_zero(double amplitude = 1.0) { return FieldSpec{{Pulse{0.0, DeltaEnvelope{}, amplitude}}}; }

  bool all_delta() const {
    for (const auto& p : pulses)
      if (!p.is_delta()) return false;
    return true;
  }

  /// Field value of the non-delta pulses at time t.
  double smooth_value(double t) const {
    double e = 0.0;
    for (const auto& p : pulses) {
      if (const auto* g = std::get_if<GaussianEnvelope>(&p.envelope)) {
        const double z = (t - p.center) / g->width;
        e += p.amplitude * std::exp(-0.5 * z * z) / (g->width * std::sqrt(2.0 * std::numbers::pi));
      }
    }
    return e;
  }
};

namespace detail {

inline void validate_field(const FieldSpec& field, double t_max) {
  double previous = 0.0;
  for (const auto& p : field.pulses) {
    if (p.center < 0.0 || p.center > t_max * (1.0 + 1e-12))
      throw InvariantError("pulse at t = " + std::to_string(p.center) + " lies outside the grid support [0, " +
                           std::to_string(t_max) + "]");
    if (p.center < previous) throw InvariantError("pulse centers must be non-decreasing");
    previous = p.center;
    if (const auto* g = std::get_if<GaussianEnvelope>(&p.envelope))
      if (!(g->width > 0.0)) throw InvariantError("Gaussian width must be > 0");
  }
}

inline size_t on_grid(double t, double dt) {
  const double k = std::round(t / dt);
  if (std::abs(t / dt - k) > 1e-9 * std::max(1.0, k)) throw InvariantError("delta pulse is not on the time grid");
  return static_cast<size_t>(k);
}

}  // namespace detail

/// Nested convolution of R^(n) with the field: P(t) = sum over t_1 <= ... <= t_n <= t of
/// E(t_n)...E(t_1) R(t_2 - t_1, ..., t - t_n) dt^n, on the uniform grid t_k = k dt.
/// All delay axes must be scanned with the same step; the output has min(count) samples.
/// Delta pulses must sit on grid points and are summed directly (no quadrature).
inline TimeSeries convolve(const ResponseGrid& r, const FieldSpec& field) {
  const int n = r.order;
  if (n < 1) throw InvariantError("convolution needs order >= 1");
  const double dt = r.axes[0].step;
  size_t len = r.axes[0].size();
  for (const auto& a : r.axes) {
    if (!a.scanned || std::abs(a.step - dt) > 1e-12 * dt)
      throw InvariantError("convolution needs every delay axis scanned with one common step");
    len = std::min(len, a.size());
  }
  TimeSeries out{dt, std::vector<Complex>(len, 0.0)};
  if (field.pulses.empty()) return out;
  detail::validate_field(field, dt * static_cast<double>(len - 1));

  std::vector<size_t> idx(static_cast<size_t>(n));
  if (field.all_delta()) {
    // Non-decreasing pulse tuples p_1 <= ... <= p_n.
    std::vector<size_t> at;
    for (const auto& p : field.pulses) at.push_back(detail::on_grid(p.center, dt));
    std::vector<size_t> pick(static_cast<size_t>(n), 0);
    while (true) {
      Complex amp = 1.0;
      for (size_t j = 0; j < pick.size(); ++j) amp *= field.pulses[pick[j]].amplitude;
      for (size_t k = at[pick.back()]; k < len; ++k) {
        for (size_t j = 0; j + 1 < pick.size(); ++j) idx[j] = at[pick[j + 1]] - at[pick[j]];
        idx.back() = k - at[pick.back()];
        out.values[k] += amp * r.at(idx);
      }
      // advance the multiset combination
      int j = n - 1;
      while (j >= 0 && pick[static_cast<size_t>(j)] + 1 == field.pulses.size()) --j;
      if (j < 0) break;
      const size_t next = pick[static_cast<size_t>(j)] + 1;
      for (int m = j; m < n; ++m) pick[static_cast<size_t>(m)] = next;
    }
    return out;
  }

  // Discretised field: smooth envelopes sampled, delta pulses as spikes of area A.
  std::vector<double> e(len, 0.0);
  for (size_t k = 0; k < len; ++k) e[k] = field.smooth_value(out.time(k)) * dt;
  for (const auto& p : field.pulses)
    if (p.is_delta()) e[detail::on_grid(p.center, dt)] += p.amplitude;

  std::vector<size_t> t(static_cast<size_t>(n));
  for (size_t k = 0; k < len; ++k) {
    Complex total = 0.0;
    // Enumerate t_1 <= ... <= t_n <= k recursively.
    auto recurse = [&](auto&& self, int level, size_t lower, double weight) -> void {
      if (level == n) {
        for (int j = 0; j + 1 < n; ++j) idx[static_cast<size_t>(j)] = t[static_cast<size_t>(j + 1)] - t[static_cast<size_t>(j)];
        idx.back() = k - t.back();
        total += weight * r.at(idx);
        return;
      }
      for (size_t i = lower; i <= k; ++i) {
        if (e[i] == 0.0) continue;
        t[static_cast<size_t>(level)] = i;
        self(self, level + 1, i, weight * e[i]);
      }
    };
    recurse(recurse, 0, 0, 1.0);
    out.values[k] = total;
  }
  return out;
}

enum class Window { None, Exponential };

/// Frequency range and resolution of a spectrum. The time grid follows from it:
/// dt = pi / omega_max and 2 omega_max / delta_omega samples spanning T = 2 pi / delta_omega.
struct SpectrumSpec {
  double omega_max = 0.0;
  double delta_omega = 0.0;
  Window window = Window::Exponential;
  double window_fraction = 1.0 / 3.0;  ///< exponential decay time as a fraction of T
  int padding = 4;                      ///< zero-padding factor before the transform
  bool trapezoid = true;                ///< half weight on the t = 0 sample

  double dt() const { return std::numbers::pi / omega_max; }
  double duration() const { return 2.0 * std::numbers::pi / delta_omega; }

  size_t samples() const {
    validate();
    return static_cast<size_t>(std::llround(2.0 * omega_max / delta_omega));
  }

  void validate() const {
    if (!(omega_max > 0.0) || !(delta_omega > 0.0)) throw InvariantError("omega_max and delta_omega must be > 0");
    const double n = 2.0 * omega_max / delta_omega;
    if (std::abs(n - std::round(n)) > 1e-9 * n || n < 2.0)
      throw InvariantError("2 omega_max / delta_omega must be an integer >= 2");
    if (padding < 1) throw InvariantError("padding must be >= 1");
    if (window == Window::Exponential && !(window_fraction > 0.0)) throw InvariantError("window fraction must be > 0");
  }

  /// The scanned delay axis this spectrum needs.
  GridAxis axis(std::string label = "tau1") const { return GridAxis::scan(std::move(label), dt(), samples()); }

  double window_value(double t) const {
    if (window == Window::None) return 1.0;
    return std::exp(-t / (window_fraction * duration()));
  }
};

struct SpectrumAxis {
  std::string name;
  double step = 0.0;
  long first = 0;  ///< index of the first bin; bin k sits at (first + k) * step
  size_t count = 0;

  double value(size_t k) const { return static_cast<double>(first + static_cast<long>(k)) * step; }

  /// Bin nearest to omega.
  size_t nearest(double omega) const {
    const long k = std::lround(omega / step) - first;
    return static_cast<size_t>(std::clamp<long>(k, 0, static_cast<long>(count) - 1));
  }
};

/// Spectrum on per-axis frequency grids, values row-major. Arbitrary units.
struct Spectrum {
  std::vector<SpectrumAxis> axes;
  std::vector<Complex> values;
  bool real_valued = false;

  size_t size() const { return values.size(); }
  std::vector<double> real() const {
    std::vector<double> r;
    for (const auto& v : values) r.push_back(v.real());
    return r;
  }
};

namespace detail {

inline void check_series(const TimeSeries& p, const SpectrumSpec& spec) {
  spec.validate();
  if (std::abs(p.dt - spec.dt()) > 1e-9 * spec.dt())
    throw InvariantError("time step " + std::to_string(p.dt) + " does not match pi/omega_max = " +
                         std::to_string(spec.dt()));
  if (p.values.size() != spec.samples())
    throw InvariantError("series has " + std::to_string(p.values.size()) + " samples, spectrum needs " +
                         std::to_string(spec.samples()));
}

/// sum_n x_n e^{+2 pi i k n / M} for k = -M/2 .. M/2-1 (M = padded length), fftshifted.
inline std::vector<Complex> shifted_transform(const std::vector<Complex>& x, size_t m) {
  std::vector<Complex> in(m, 0.0);
  std::copy(x.begin(), x.end(), in.begin());
  std::vector<Complex> raw;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  fft.inv(raw, in);
  std::vector<Complex> out(m);
  const long first = -static_cast<long>(m / 2);
  for (size_t k = 0; k < m; ++k) {
    const long freq = first + static_cast<long>(k);
    out[k] = raw[static_cast<size_t>((freq % static_cast<long>(m) + static_cast<long>(m)) % static_cast<long>(m))];
  }
  return out;
}

inline SpectrumAxis frequency_axis(std::string name, const SpectrumSpec& spec) {
  const size_t m = spec.samples() * static_cast<size_t>(spec.padding);
  return SpectrumAxis{std::move(name), spec.delta_omega / spec.padding, -static_cast<long>(m / 2), m};
}

}  // namespace detail

/// Complex one-sided transform S(omega) = dt sum_n w_n window(t_n) P(t_n) e^{i omega t_n}.
inline Spectrum fourier_transform(const TimeSeries& p, const SpectrumSpec& spec) {
  detail::check_series(p, spec);
  std::vector<Complex> x(p.values.size());
  for (size_t n = 0; n < x.size(); ++n) {
    double w = spec.window_value(p.time(n)) * p.dt;
    if (n == 0 && spec.trapezoid) w *= 0.5;
    x[n] = w * p.values[n];
  }
  Spectrum s;
  s.axes.push_back(detail::frequency_axis("omega", spec));
  s.values = detail::shifted_transform(x, s.axes[0].count);
  return s;
}

/// Absorption signal: real part of the one-sided transform of P^(1).
inline Spectrum absorption_spectrum(const TimeSeries& p, const SpectrumSpec& spec) {
  Spectrum s = fourier_transform(p, spec);
  for (auto& v : s.values) v = v.real();
  s.real_valued = true;
  return s;
}

/// Two-dimensional one-sided transform over tau_1 and tau_3 of an order-3 response
/// holding tau_2 fixed. Complex valued, row-major over (omega_1, omega_3).
inline Spectrum twod_spectrum(const ResponseGrid& r3, const SpectrumSpec& spec) {
  spec.validate();
  if (r3.order != 3 || r3.axes.size() != 3) throw InvariantError("2D spectrum needs an order-3 response grid");
  if (r3.axes[1].size() != 1) throw InvariantError("2D spectrum needs a single tau_2 value");
  const size_t n = spec.samples();
  for (size_t a : {size_t{0}, size_t{2}}) {
    const auto& ax = r3.axes[a];
    if (!ax.scanned || ax.size() != n || std::abs(ax.step - spec.dt()) > 1e-9 * spec.dt())
      throw InvariantError("tau axes must be scanned with dt = pi/omega_max and 2 omega_max/delta_omega samples");
  }
  const double dt = spec.dt();
  auto weight = [&](size_t k) {
    double w = spec.window_value(static_cast<double>(k) * dt) * dt;
    if (k == 0 && spec.trapezoid) w *= 0.5;
    return w;
  };
  const SpectrumAxis axis1 = detail::frequency_axis("omega1", spec);
  const SpectrumAxis axis3 = detail::frequency_axis("omega3", spec);
  const size_t m = axis1.count;
  // Transform along tau_3 for each tau_1 row, then along tau_1 for each omega_3 column.
  std::vector<std::vector<Complex>> rows(n);
  for (size_t i = 0; i < n; ++i) {
    std::vector<Complex> x(n);
    for (size_t k = 0; k < n; ++k) x[k] = weight(i) * weight(k) * r3.at({i, 0, k});
    rows[i] = detail::shifted_transform(x, m);
  }
  Spectrum s;
  s.axes = {axis1, axis3};
  s.values.assign(m * m, 0.0);
  for (size_t c = 0; c < m; ++c) {
    std::vector<Complex> col(n);
    for (size_t i = 0; i < n; ++i) col[i] = rows[i][c];
    const auto t = detail::shifted_transform(col, m);
    for (size_t r = 0; r < m; ++r) s.values[r * m + c] = t[r];
  }
  return s;
}

// ---------------------------------------------------------------------------
// Pipelines

/// Linear response R^(1)(t) on the grid the spectrum needs.
inline ResponseGrid linear_response(const ModelSystem& model, const SpectrumSpec& spec, const EstimatorOptions& opt,
                                    const QuantumState& rho0) {
  return response_grid(catalog("linear_absorption"), GridSpec{{spec.axis()}}, opt, model, rho0);
}

inline Spectrum linear_absorption(const ModelSystem& model, const SpectrumSpec& spec, const EstimatorOptions& opt,
                                  const QuantumState& rho0, const FieldSpec& field = FieldSpec::delta_at_zero()) {
  return absorption_spectrum(convolve(linear_response(model, spec, opt, rho0), field), spec);
}

inline Spectrum linear_absorption(const ModelSystem& model, const SpectrumSpec& spec, const EstimatorOptions& opt) {
  return linear_absorption(model, spec, opt, model.ground_state());
}

/// Mixed electric-magnetic correlation used for circular dichroism,
/// C(t) = <mu(t) m*(0) rho> + <m(t) mu(0) rho>, with m* the complex conjugate of m in the
/// model basis.
inline TimeSeries cd_correlation(const ModelSystem& model, const SpectrumSpec& spec, const EstimatorOptions& opt,
                                 const QuantumState& rho0) {
  if (!model.m) throw InvariantError("circular dichroism needs a magnetic dipole m");
  const CatalogEntry cd = catalog("cd");
  const GridSpec grid{{spec.axis()}};
  EstimatorOptions o = opt;
  o.conjugate_reduction = false;
  DiagramSet first{1, {cd.diagrams.terms[0]}};   // <mu(t) m(0) rho>
  DiagramSet second{1, {cd.diagrams.terms[1]}};  // <m(t) mu(0) rho>
  const ModelSystem conj = with_conjugated_magnetic(model);
  const ResponseGrid a = response_grid(first, grid, o, conj, rho0);
  EstimatorOptions o2 = o;
  o2.seed = stream_seed(opt.seed, 0xcd);
  const ResponseGrid b = response_grid(second, grid, o2, model, rho0);
  TimeSeries c{spec.dt(), std::vector<Complex>(a.values.size())};
  for (size_t k = 0; k < c.values.size(); ++k) c.values[k] = a.values[k] + b.values[k];
  return c;
}

enum class DifferentialKind { LD, CD, MCD };

/// LD: absorption with mu minus absorption with mu_perp. CD: imaginary part of the
/// transform of cd_correlation. MCD: CD of the model with `static_field` added to h0.
inline Spectrum differential_spectrum(DifferentialKind kind, const ModelSystem& model, const SpectrumSpec& spec,
                                      const EstimatorOptions& opt, const QuantumState& rho0,
                                      const std::optional<Matrix>& static_field = std::nullopt) {
  switch (kind) {
    case DifferentialKind::LD: {
      if (!model.mu_perp) throw InvariantError("linear dichroism needs mu_perp");
      ModelSystem perp = model;
      perp.mu = *model.mu_perp;
      const Spectrum par = linear_absorption(model, spec, opt, rho0);
      const Spectrum per = linear_absorption(perp, spec, opt, rho0);
      Spectrum out = par;
      for (size_t k = 0; k < out.values.size(); ++k) out.values[k] = par.values[k] - per.values[k];
      return out;
    }
    case DifferentialKind::MCD:
    case DifferentialKind::CD: {
      const ModelSystem target = (kind == DifferentialKind::MCD && static_field)
                                     ? with_static_field(model, *static_field)
                                     : model;
      if (kind == DifferentialKind::MCD && !static_field) throw InvariantError("MCD needs a static-field term");
      Spectrum s = fourier_transform(cd_correlation(target, spec, opt, rho0), spec);
      for (auto& v : s.values) v = v.imag();
      s.real_valued = true;
      return s;
    }
  }
  throw InvariantError("unknown differential spectroscopy");
}

}  // namespace qspectro
