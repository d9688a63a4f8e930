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

// Gate-cost accounting for a full spectroscopy run.

#include <cmath>
#include <numbers>
#include <string>

#include "qspectro/errors.hpp"

namespace qspectro {

struct CostInputs {
  int n = 1;                  ///< response order
  double omega_max = 1.0;
  double delta_omega = 0.1;
  double eps_shot = 0.01;
  double eta = 1.0;           ///< particle count entering poly(eta)
  double poly_degree = 2.0;
  double coeff = 1.0;         ///< constant in front of T poly(eta)
  double eps_sim = 0.0;       ///< 0 drops the logarithmic simulation-error term
  double log_coeff = 1.0;
  bool amplitude_estimation = false;  ///< shots ~ 1/eps instead of 1/eps^2
};

/// Per-factor counts. Every count is an integral value held in a double so that large
/// orders cannot overflow; `total` is their exact product with c_u.
struct CostBreakdown {
  int n = 1;
  double c_u = 0.0;
  double n_corr = 0.0;
  double n_samples = 0.0;
  double n_shots = 0.0;
  double n_deriv = 0.0;
  double total = 0.0;
  /// 2^{2n} / (eps^k delta_omega) (2 omega_max / delta_omega)^n eta^p with k = 2, or 1 under
  /// amplitude estimation. total / closed_form = 2 pi coeff ceil(eps^-k) eps^k when eps_sim = 0.
  double closed_form = 0.0;

  void recompute_total() { total = c_u * n_corr * n_samples * n_shots * n_deriv; }
};

inline CostBreakdown cost_estimate(const CostInputs& in) {
  if (in.n < 1) throw InvariantError("order n must be >= 1");
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvariantError(std::string(name) + " must be positive");
  };
  positive(in.omega_max, "omega_max");
  positive(in.delta_omega, "delta_omega");
  positive(in.eps_shot, "eps_shot");
  positive(in.eta, "eta");
  positive(in.poly_degree, "poly_degree");
  positive(in.coeff, "coeff");
  if (in.eps_sim < 0.0 || in.eps_sim > 1.0) throw InvariantError("eps_sim must lie in [0, 1]");

  const double n = in.n;
  const double inv_eps = in.amplitude_estimation ? 1.0 / in.eps_shot : 1.0 / (in.eps_shot * in.eps_shot);
  CostBreakdown b;
  b.n = in.n;
  b.c_u = in.coeff * (2.0 * std::numbers::pi / in.delta_omega) * std::pow(in.eta, in.poly_degree);
  if (in.eps_sim > 0.0) b.c_u += in.log_coeff * std::log(1.0 / in.eps_sim);
  b.n_corr = std::ldexp(1.0, in.n - 1);
  b.n_samples = std::pow(2.0 * in.omega_max / in.delta_omega, n);
  b.n_shots = std::ceil(inv_eps * (1.0 - 1e-14));
  b.n_deriv = std::ldexp(1.0, in.n + 1);
  b.recompute_total();
  b.closed_form = std::ldexp(1.0, 2 * in.n) * inv_eps / in.delta_omega * b.n_samples * std::pow(in.eta, in.poly_degree);
  return b;
}

/// Replaces n_corr by the number of diagrams a phase-matching filter keeps.
inline CostBreakdown apply_diagram_filter_count(const CostBreakdown& base, long surviving) {
  if (surviving < 1 || static_cast<double>(surviving) > base.n_corr)
    throw InvariantError("surviving diagram count must lie in [1, " + std::to_string(static_cast<long>(base.n_corr)) +
                         "]");
  CostBreakdown b = base;
  b.n_corr = static_cast<double>(surviving);
  b.recompute_total();
  return b;
}

}  // namespace qspectro
