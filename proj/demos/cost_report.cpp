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

// Resource estimates for linear, 2D and fifth-order spectroscopy at a fixed
// frequency window and shot error.

#include <cstdio>

#include "qspectro.hpp"

using namespace qspectro;

int main() {
  std::printf("%-3s %-10s %-12s %-10s %-8s %-14s %-14s\n", "n", "n_corr", "n_samples", "n_shots", "n_deriv", "total",
              "closed form");
  for (int n : {1, 3, 5}) {
    CostInputs in;
    in.n = n;
    in.omega_max = 10.0;
    in.delta_omega = 0.1;
    in.eps_shot = 0.01;
    in.eta = 10.0;
    const CostBreakdown b = cost_estimate(in);
    std::printf("%-3d %-10.0f %-12.4g %-10.0f %-8.0f %-14.4g %-14.4g\n", n, b.n_corr, b.n_samples, b.n_shots, b.n_deriv,
                b.total, b.closed_form);
  }
  CostInputs pp;
  pp.n = 3;
  pp.omega_max = 10.0;
  pp.delta_omega = 0.1;
  pp.eps_shot = 0.01;
  const CostBreakdown filtered = apply_diagram_filter_count(cost_estimate(pp), 3);
  std::printf("\npump-probe with phase matching keeps %.0f correlators: total %.4g\n", filtered.n_corr, filtered.total);
  return 0;
}
