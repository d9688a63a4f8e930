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

// Open-system line shapes: Lindblad dephasing broadens the absorption line, and a
// single explicit bath spin produces a |cos(2 g t)| coherence envelope.

#include <cstdio>

#include "qspectro.hpp"

using namespace qspectro;

int main() {
  EstimatorOptions opt;
  const SpectrumSpec spec{4.0, 0.02};
  std::printf("%-8s %-12s\n", "gamma", "peak height");
  for (double gamma : {0.0, 0.1, 0.2, 0.4}) {
    const Spectrum s = linear_absorption(with_dephasing(two_level(1.0), gamma), spec, opt);
    std::printf("%-8.2f %-12.4f\n", gamma, s.real()[s.axes[0].nearest(1.0)]);
  }

  const double g = 0.1;
  const ModelSystem m = two_level(1.0);
  BathSpec bath;
  bath.h_bath = Matrix::Zero(2, 2);
  bath.coupling = g * tensor(sigma_z(), sigma_z());
  bath.rho_bath = Matrix::Constant(2, 2, 0.5);
  const ExplicitBathDynamics dyn(m, bath);
  const FeynmanDiagram d({{0, Side::Ket, DipoleKind::Electric}, {1, Side::Ket, DipoleKind::Electric}});
  opt.pauli_shortcut = true;
  std::printf("\n%-8s %-12s %-12s\n", "t", "|<mu(t)mu>|", "|cos(2gt)|");
  for (double t : {0.0, 2.0, 4.0, 6.0, 7.85, 10.0}) {
    const std::vector<double> times{0.0, t};
    const Complex c = estimate_R(d, times, opt, m, m.ground_state(), dyn);
    std::printf("%-8.2f %-12.6f %-12.6f\n", t, std::abs(c), std::abs(std::cos(2 * g * t)));
  }
  return 0;
}
