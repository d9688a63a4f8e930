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

// Linear absorption of a two-level system and a displaced oscillator, printed as
// peak tables and written to CSV.

#include <cstdio>

#include "qspectro.hpp"

using namespace qspectro;

namespace {

void report(const char* title, const Spectrum& s, double threshold) {
  const auto y = s.real();
  double top = 0.0;
  for (double v : y) top = std::max(top, v);
  std::printf("%s\n  %-10s %-10s\n", title, "omega", "relative");
  for (size_t k = 1; k + 1 < y.size(); ++k)
    if (s.axes[0].value(k) > 0 && y[k] > y[k - 1] && y[k] >= y[k + 1] && y[k] > threshold * top)
      std::printf("  %-10.3f %-10.4f\n", s.axes[0].value(k), y[k] / top);
}

}  // namespace

int main() {
  EstimatorOptions opt;
  opt.delta = kDefaultExactDelta;

  const SpectrumSpec spec{4.0, 0.05};
  const Spectrum tls = linear_absorption(two_level(1.0), spec, opt);
  report("two-level system, omega0 = 1", tls, 0.05);
  write_text_file("demo_two_level.csv", to_csv(tls));

  const SpectrumSpec wide{8.0, 0.1};
  const Spectrum vib = linear_absorption(displaced_oscillator(3.0, 1.0, 1.0, 10), wide, opt);
  report("displaced oscillator, omega_e = 3, omega_v = 1, d = 1", vib, 0.01);
  write_text_file("demo_vibronic.csv", to_csv(vib));
  write_text_file("demo_vibronic.svg", to_svg(vib, "vibronic progression"));
  std::printf("wrote demo_two_level.csv, demo_vibronic.csv, demo_vibronic.svg\n");
  return 0;
}
