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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "qspectro.hpp"

using namespace qspectro;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs > limit_seconds) {
    o.pass = false;
    o.detail += "; runtime over " + std::to_string(limit_seconds) + " s";
  }
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

EstimatorOptions exact_with(double delta) {
  EstimatorOptions o;
  o.delta = delta;
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

size_t argmax_in(const std::vector<double>& y, size_t lo, size_t hi) {
  size_t best = lo;
  for (size_t k = lo; k < hi && k < y.size(); ++k)
    if (y[k] > y[best]) best = k;
  return best;
}

Outcome circuit_oracle() {
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index d = 2 + trial % 5;
    const int n = trial % 4;
    const ModelSystem m = sample::model(d, rng);
    const QuantumState rho = sample::state(d, rng);
    const FeynmanDiagram diagram = sample::diagram(n, rng, true);
    const auto t = sample::times(n, rng);
    const auto f = sample::fields(n, rng);
    const Complex circuit = simulate_exact(compile(diagram, t, f), m, rho);
    worst = std::max(worst, std::abs(circuit - oracle::hadamard_overlap(diagram, t, f, m, rho)));
  }
  return {worst < 1e-10, fmt("max deviation %.3e over 50 instances", worst)};
}

Outcome nested_commutators() {
  std::mt19937_64 rng(1002);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const Index d = 2 + trial % 4;
    const ModelSystem m = sample::model(d, rng);
    const QuantumState rho = sample::state(d, rng);
    const auto t = sample::times(n, rng);
    const DiagramSet set = expand_commutators(n);
    std::vector<Complex> values;
    for (const auto& term : set.terms) values.push_back(oracle::correlation(term.diagram, t, m, rho));
    worst = std::max(worst, std::abs(set.combine(values) - oracle::nested_commutator(n, t, m, rho)));
  }
  return {worst < 1e-10, fmt("max deviation %.3e over 20 instances", worst)};
}

Outcome conjugate_reduction() {
  std::mt19937_64 rng(1003);
  const ModelSystem m = sample::model(3, rng);
  const QuantumState rho = sample::state(3, rng);
  double worst = 0.0;
  for (int n = 1; n <= 3; ++n) {
    std::vector<GridAxis> axes;
    for (int j = 1; j <= n; ++j) axes.push_back(GridAxis::scan("tau" + std::to_string(j), 0.4, 4));
    // The identity is exact at any delta; a coarse step avoids amplifying rounding.
    EstimatorOptions full = exact_with(0.1), reduced = exact_with(0.1);
    full.conjugate_reduction = false;
    const DiagramSet set = expand_commutators(n);
    if (conjugate_reduce(set).size() != set.size() / 2) return {false, "reduced set size is not 2^(n-1)"};
    const auto a = response_grid(set, GridSpec{axes}, full, m, rho);
    const auto b = response_grid(set, GridSpec{axes}, reduced, m, rho);
    for (size_t k = 0; k < a.values.size(); ++k) worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
  }
  // n = 1 through the single surviving quantity
  double single = 0.0;
  const DiagramSet reduced = conjugate_reduce(expand_commutators(1));
  for (double t1 : {0.0, 0.5, 1.7, 4.0}) {
    const std::vector<double> t{0.0, t1};
    std::vector<Complex> v;
    for (const auto& term : reduced.terms) v.push_back(oracle::correlation(term.diagram, t, m, rho));
    const FeynmanDiagram ket_ket({{0, Side::Ket, DipoleKind::Electric}, {1, Side::Ket, DipoleKind::Electric}});
    const Complex want(0.0, 2.0 * oracle::correlation(ket_ket, t, m, rho).imag());
    single = std::max(single, std::abs(reduced.combine(v) - want));
  }
  return {worst < 1e-10 && single < 1e-10 && reduced.size() == 1,
          fmt("reduced vs full %.3e; n=1 vs 2i Im<mu(t)mu rho> %.3e", worst, single)};
}

Outcome finite_difference_slope() {
  const ModelSystem m = two_level(1.0);
  const FeynmanDiagram d({{0, Side::Ket, DipoleKind::Electric}, {1, Side::Ket, DipoleKind::Electric}});
  const std::vector<double> t{0.0, 1.1};
  const Complex exact = std::exp(-kI * 1.1);
  std::vector<double> err;
  for (double delta : {1e-1, 1e-2, 1e-3}) err.push_back(std::abs(estimate_R(d, t, exact_with(delta), m, m.ground_state()) - exact));
  const double slope = std::log10(err[0] / err[2]) / 2.0;
  return {std::abs(slope - 2.0) <= 0.1, fmt("slope %.4f (errors %.2e, %.2e)", slope, err[0], err[2])};
}

Outcome linear_absorption_tls() {
  const SpectrumSpec spec{4.0, 0.05};
  const Spectrum s = linear_absorption(two_level(1.0), spec, exact_with(1e-2));
  const auto y = s.real();
  const size_t peak = argmax_in(y, 0, y.size());
  const double w_peak = s.axes[0].value(peak);
  // Dephased line: Lorentzian of FWHM gamma + 2 / T_window.
  const double gamma = 0.2;
  const SpectrumSpec fine{4.0, 0.02};
  const Spectrum sd = linear_absorption(with_dephasing(two_level(1.0), gamma), fine, exact_with(1e-2));
  const auto yd = sd.real();
  const size_t p = argmax_in(yd, sd.axes[0].nearest(0.0), yd.size());
  const double half = 0.5 * yd[p];
  size_t l = p, r = p;
  while (yd[l] > half) --l;
  while (yd[r] > half) ++r;
  const double step = sd.axes[0].step;
  const double wl = sd.axes[0].value(l) + (half - yd[l]) / (yd[l + 1] - yd[l]) * step;
  const double wr = sd.axes[0].value(r - 1) + (yd[r - 1] - half) / (yd[r - 1] - yd[r]) * step;
  const double expected = gamma + 2.0 / (fine.window_fraction * fine.duration());
  const double rel = std::abs((wr - wl) - expected) / expected;
  return {std::abs(w_peak - 1.0) <= spec.delta_omega / 2 && rel <= 0.05,
          fmt("peak at %.4f; FWHM relative error %.3f%%", w_peak, 100 * rel)};
}

Outcome vibronic_progression() {
  const double we = 10.0, wv = 1.0;
  const ModelSystem m = displaced_oscillator(we, wv, 1.0, 10);
  const SpectrumSpec spec{14.0, 0.1};
  const Spectrum s = linear_absorption(m, spec, exact_with(1e-2));
  const auto y = s.real();
  // Franck-Condon factors from the model eigensystem.
  const RealVector energies = m.h0.eigenvalues();
  const Matrix vecs = m.h0.eigenvectors();
  const Vector g = vecs.col(0);
  const Vector mug = m.mu.matrix() * g;
  const Matrix pe = excited_projector(m);
  auto excited = [&](Index k) { return (pe * vecs.col(k)).squaredNorm() > 0.5; };
  double first = 0.0;
  for (Index k = 0; k < energies.size(); ++k)
    if (excited(k) && (first == 0.0 || energies(k) - energies(0) < first)) first = energies(k) - energies(0);
  double lines[4] = {0, 0, 0, 0};
  for (Index k = 0; k < energies.size(); ++k) {
    if (!excited(k)) continue;
    const double gap = energies(k) - energies(0);
    for (int j = 0; j < 4; ++j)
      if (std::abs(gap - (first + j * wv)) < 0.25) lines[j] += std::norm(vecs.col(k).dot(mug));
  }
  double pos[4], height[4];
  for (int j = 0; j < 4; ++j) {
    const size_t c = s.axes[0].nearest(first + j * wv);
    const size_t p = argmax_in(y, c - 8, c + 9);
    pos[j] = s.axes[0].value(p);
    height[j] = y[p];
  }
  bool ok = true;
  double worst_spacing = 0.0, worst_fc = 0.0;
  for (int j = 1; j < 4; ++j) {
    worst_spacing = std::max(worst_spacing, std::abs(pos[j] - pos[j - 1] - wv));
    const double want = lines[j] / lines[0];
    worst_fc = std::max(worst_fc, std::abs(height[j] / height[0] - want) / want);
  }
  ok = worst_spacing <= spec.delta_omega && worst_fc <= 0.10;
  return {ok, fmt("spacing error %.3f; worst intensity error %.2f%%; 0-0 line at %.3f", worst_spacing, 100 * worst_fc, pos[0])};
}

Outcome twod_ladder() {
  const ModelSystem m = ladder({0.0, 1.0, 2.5}, {0.6, 0.5});
  SpectrumSpec spec{4.0, 0.25};
  spec.padding = 1;
  const GridSpec grid{{spec.axis("tau1"), GridAxis::hold("tau2", 0.0), spec.axis("tau3")}};
  EstimatorOptions opt = exact_with(1e-2);
  opt.pauli_shortcut = false;
  const ResponseGrid r = response_grid(catalog("twod"), grid, opt, m, m.ground_state());
  ResponseGrid oracle_grid = r;
  double worst = 0.0, largest = 0.0;
  for (size_t flat = 0; flat < r.values.size(); ++flat) {
    oracle_grid.values[flat] = oracle::nested_commutator(3, r.times(r.unflatten(flat)), m, m.ground_state());
    worst = std::max(worst, std::abs(r.values[flat] - oracle_grid.values[flat]));
    largest = std::max(largest, std::abs(oracle_grid.values[flat]));
  }
  const Spectrum s = twod_spectrum(r, spec), o = twod_spectrum(oracle_grid, spec);
  const size_t m3 = s.axes[1].count;
  // Diagonal (1, 1) and cross (1, 1.5) regions in every sign quadrant: the strongest
  // cell of each 3x3 neighbourhood must coincide with the oracle's.
  int checked = 0, matched = 0;
  for (double w1 : {-1.0, 1.0})
    for (double w3 : {-1.0, 1.0, -1.5, 1.5}) {
      const size_t c1 = s.axes[0].nearest(w1), c3 = s.axes[1].nearest(w3);
      size_t bs = 0, bo = 0;
      double vs = -1, vo = -1;
      for (size_t i = c1 - 1; i <= c1 + 1; ++i)
        for (size_t k = c3 - 1; k <= c3 + 1; ++k) {
          const size_t idx = i * m3 + k;
          if (std::abs(s.values[idx]) > vs) vs = std::abs(s.values[idx]), bs = idx;
          if (std::abs(o.values[idx]) > vo) vo = std::abs(o.values[idx]), bo = idx;
        }
      ++checked;
      matched += bs == bo;
    }
  return {worst < 1e-4 && matched == checked,
          fmt("max sample deviation %.3e (max |R| %.3f); peak cells matched %.0f/8", worst, largest, matched)};
}

Outcome open_system_validity() {
  std::mt19937_64 rng(1008);
  double tp = 0.0, choi = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const ModelSystem m = sample::model(3, rng, true);
    const LindbladDynamics dyn(m);
    for (double t : {0.05, 0.3, 1.0, 2.5, 10.0}) {
      const QuantumState rho = sample::state(3, rng);
      tp = std::max(tp, std::abs(dyn.evolve(rho.density_matrix(), t).trace() - 1.0));
      const Matrix c = choi_matrix(dyn, t);
      choi = std::min(choi, HermitianOperator(0.5 * (c + c.adjoint())).eigenvalues().minCoeff());
    }
  }
  // Zero-coupling explicit bath against closed dynamics, through full circuits.
  const ModelSystem m = sample::model(3, rng);
  BathSpec bath{sample::hermitian(2, rng), Matrix::Zero(6, 6), sample::state(2, rng).density_matrix()};
  const ExplicitBathDynamics bath_dyn(m, bath);
  double bath_dev = 0.0;
  for (int n = 0; n <= 3; ++n) {
    const FeynmanDiagram d = sample::diagram(n, rng, true);
    const CircuitPlan p = compile(d, sample::times(n, rng), sample::fields(n, rng));
    const QuantumState rho = sample::state(3, rng);
    bath_dev = std::max(bath_dev, std::abs(simulate_exact(p, m, rho, bath_dyn) - simulate_exact(p, m, rho)));
  }
  // Forward-only plans: every evolution has a positive duration for every catalog diagram.
  bool forward = true;
  for (const auto& name : catalog_names()) {
    for (const auto& term : catalog(name).diagrams.terms) {
      const int n = term.diagram.order();
      const auto t = sample::times(n, rng);
      for (const auto& step : compile(term.diagram, t, std::vector<double>(static_cast<size_t>(n) + 1, 0.1)).steps)
        if (const auto* e = std::get_if<Evolve>(&step)) forward = forward && e->duration > 0.0;
    }
  }
  return {tp < 1e-9 && choi >= -1e-9 && bath_dev < 1e-10 && forward,
          fmt("trace deviation %.2e; min Choi eigenvalue %.2e; bath deviation %.2e", tp, choi, bath_dev) +
              (forward ? "; plans forward-only" : "; backward evolution found")};
}

Outcome shot_noise_scaling() {
  const Complex q{0.3, -0.4};
  auto spread = [&](std::uint64_t shots) {
    double mean = 0.0, sq = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const double x = sample_measurements(q, shots, 5000 + seed).exp_x;
      mean += x;
      sq += x * x;
    }
    mean /= 100.0;
    return std::sqrt((sq - 100.0 * mean * mean) / 99.0);
  };
  const double ratio = spread(100) / spread(10000);
  return {std::abs(ratio - 10.0) <= 2.0, fmt("SE(100)/SE(10^4) = %.3f (ideal 10)", ratio)};
}

Outcome cost_calculator() {
  bool ok = true;
  for (int n = 1; n <= 5; ++n) {
    CostInputs in;
    in.n = n;
    in.omega_max = 10;
    in.delta_omega = 0.1;
    in.eps_shot = 0.01;
    const auto b = cost_estimate(in);
    ok = ok && b.n_corr == std::pow(2.0, n - 1) && b.n_samples == std::pow(200.0, n) && b.n_deriv == std::pow(2.0, n + 1);
  }
  CostInputs pp;
  pp.n = 3;
  const auto base = cost_estimate(pp);
  ok = ok && apply_diagram_filter_count(base, 3).n_corr == 3.0;
  const DiagramSet pump_probe = conjugate_reduce(catalog("pump_probe").diagrams);
  ok = ok && pump_probe.size() == 4 &&
       filter(pump_probe, [](const FeynmanDiagram& d) { return d.bra_count() > 0; }).size() == 3;
  double worst = 0.0;
  const double eps_values[] = {0.1, 0.05, 0.01, 0.003, 0.3, 0.02, 0.07, 0.5, 0.001, 0.2};
  for (int k = 0; k < 10; ++k) {
    CostInputs in;
    in.n = 1 + k % 4;
    in.omega_max = 1.0 + k;
    in.delta_omega = 0.05 * (1 + k % 3);
    in.eps_shot = eps_values[k];
    in.eta = 1.0 + 0.5 * k;
    in.coeff = 0.5 + k;
    const auto b = cost_estimate(in);
    const double e2 = in.eps_shot * in.eps_shot;
    const double constant = 2 * std::numbers::pi * in.coeff * std::ceil(1.0 / e2 - 1e-9) * e2;
    worst = std::max(worst, std::abs(b.total / b.closed_form / constant - 1.0));
  }
  return {ok && worst < 1e-12, fmt("closed-form constant mismatch %.2e over 10 tuples", worst)};
}

Outcome unit_readout() {
  std::mt19937_64 rng(1011);
  const ModelSystem closed = vtype(1.0, 0.3);
  const ModelSystem open = with_jump(with_dephasing(closed, 0.2), [] {
    Matrix l = Matrix::Zero(3, 3);
    l(0, 1) = 1.0;
    return l;
  }(), 0.1);
  double worst = 0.0;
  int count = 0;
  for (const auto& name : catalog_names())
    for (const auto& term : catalog(name).diagrams.terms) {
      const int n = term.diagram.order();
      const auto t = sample::times(n, rng);
      const std::vector<double> f(static_cast<size_t>(n) + 1, 0.0);
      for (const ModelSystem* m : {&closed, &open}) {
        const Complex q = simulate_exact(compile(term.diagram, t, f), *m, sample::state(3, rng));
        worst = std::max(worst, std::abs(q - 1.0));
        ++count;
      }
    }
  return {worst < 1e-10, fmt("max |Q(0) - 1| = %.2e over %.0f circuits", worst, count)};
}

Outcome determinism() {
  nlohmann::json cfg = nlohmann::json::parse(R"({
    "model": {"type": "ladder", "energies": [0.0, 1.0, 2.5], "dipoles": [0.6, 0.5], "dephasing": 0.1},
    "spectroscopy": {"name": "twod", "delays": {"tau2": 0.3}},
    "estimator": {"mode": "shots", "shots": 200, "seed": 2024},
    "spectrum": {"omega_max": 2.0, "delta_omega": 0.5, "padding": 1},
    "output": {"prefix": "det", "formats": ["csv", "json", "svg"], "write_response": true}
  })");
  std::vector<std::vector<std::string>> payloads(2);
  for (int k = 0; k < 2; ++k) {
    const std::filesystem::path dir = std::filesystem::path("acceptance_out") / (k == 0 ? "a" : "b");
    cfg["output"]["dir"] = dir.string();
    const RunResult r = run_config(cfg);
    for (const auto& f : r.files)
      if (f.find("manifest") == std::string::npos) payloads[static_cast<size_t>(k)].push_back(slurp(f));
  }
  const bool same = payloads[0] == payloads[1] && payloads[0].size() == 5;
  return {same, fmt("%.0f data files compared", static_cast<double>(payloads[0].size()))};
}

}  // namespace

int main() {
  run(1, "circuit equals overlap oracle", 30, circuit_oracle);
  run(2, "signed diagram sum equals nested commutators", 30, nested_commutators);
  run(3, "conjugate-pair reduction", 0, conjugate_reduction);
  run(4, "finite-difference convergence slope", 0, finite_difference_slope);
  run(5, "two-level linear absorption", 10, linear_absorption_tls);
  run(6, "vibronic progression", 60, vibronic_progression);
  run(7, "2D spectrum of a three-level ladder", 600, twod_ladder);
  run(8, "open-system validity", 0, open_system_validity);
  run(9, "shot-noise scaling", 0, shot_noise_scaling);
  run(10, "cost calculator", 0, cost_calculator);
  run(11, "unit readout at zero field", 0, unit_readout);
  run(12, "seeded determinism", 0, determinism);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
