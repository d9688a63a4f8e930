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

// Configuration-driven pipelines: build the model and diagram set from a validated run
// configuration, evaluate the response, transform it and write the outputs plus a
// manifest of every resolved setting.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qspectro/diagrams.hpp"
#include "qspectro/models.hpp"
#include "qspectro/parallel.hpp"
#include "qspectro/response.hpp"
#include "qspectro/schema.hpp"
#include "qspectro/spectra.hpp"
#include "qspectro/spectrum_io.hpp"
#include "qspectro/version.hpp"

namespace qspectro {

struct RunResult {
  std::string pipeline;
  std::optional<Spectrum> spectrum;
  std::optional<ResponseGrid> response;
  nlohmann::json resolved;
  nlohmann::ordered_json manifest;
  std::vector<std::string> files;
};

namespace detail {

/// Runs `body`, prefixing library errors with the stage that raised them.
template <class Fn>
auto in_stage(const char* stage, Fn&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw Error(std::string(stage) + ": " + e.what());
  }
}

inline const nlohmann::json& need(const nlohmann::json& block, const std::string& block_path, const char* key,
                                  const std::string& why) {
  if (!block.contains(key)) throw ConfigError(block_path + "." + key, "is required " + why);
  return block[key];
}

inline Matrix diagonal(const std::vector<double>& d) {
  Matrix m = Matrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  for (size_t i = 0; i < d.size(); ++i) m(static_cast<Index>(i), static_cast<Index>(i)) = d[i];
  return m;
}

/// Builds the model; the static field is returned separately when `keep_field_apart`.
inline ModelSystem build_model(const nlohmann::json& m, bool keep_field_apart, std::optional<Matrix>& field) {
  const std::string type = m["type"];
  const std::string why = "for model type " + type;
  ModelSystem model = in_stage("model", [&] {
    if (type == "two_level") return two_level(need(m, "model", "omega0", why).get<double>());
    if (type == "vtype")
      return vtype(need(m, "model", "omega0", why).get<double>(), need(m, "model", "splitting", why).get<double>());
    if (type == "ladder")
      return ladder(need(m, "model", "energies", why).get<std::vector<double>>(),
                    need(m, "model", "dipoles", why).get<std::vector<double>>());
    return displaced_oscillator(need(m, "model", "omega_e", why).get<double>(),
                                need(m, "model", "omega_v", why).get<double>(),
                                need(m, "model", "displacement", why).get<double>(),
                                need(m, "model", "n_fock", why).get<Index>());
  });
  const Index d = model.dim();
  if (m.contains("static_field")) {
    const auto diag = m["static_field"].get<std::vector<double>>();
    if (static_cast<Index>(diag.size()) != d)
      throw ConfigError("model.static_field", "needs " + std::to_string(d) + " diagonal entries");
    field = diagonal(diag);
    if (!keep_field_apart) model = with_static_field(model, *field);
  }
  if (m.contains("magnetic_alpha"))
    model = in_stage("model", [&] { return with_chiral_magnetic(model, m["magnetic_alpha"].get<double>()); });
  if (m.contains("mu_perp_scale"))
    model = with_perpendicular_dipole(model, m["mu_perp_scale"].get<double>() * model.mu.matrix());
  const auto& jumps = m["jumps"];
  for (size_t k = 0; k < jumps.size(); ++k) {
    const Index from = jumps[k]["from"], to = jumps[k]["to"];
    if (from >= d || to >= d)
      throw ConfigError("model.jumps[" + std::to_string(k) + "]", "level index out of range for dimension " +
                                                                      std::to_string(d));
    Matrix op = Matrix::Zero(d, d);
    op(to, from) = 1.0;
    model = with_jump(model, op, jumps[k]["rate"].get<double>());
  }
  const double gamma = m["dephasing"];
  if (gamma > 0.0) model = with_dephasing(model, gamma);
  return model;
}

inline EstimatorOptions build_estimator(nlohmann::json& e) {
  EstimatorOptions o;
  const bool shots = e["mode"] == "shots";
  if (!e.contains("delta")) e["delta"] = shots ? kDefaultShotDelta : kDefaultExactDelta;
  o.delta = e["delta"];
  o.shots = shots ? e["shots"].get<std::uint64_t>() : 0;
  o.seed = e["seed"];
  o.stencil_accuracy = e["stencil_order"];
  o.pauli_shortcut = e["pauli_shortcut"];
  o.conjugate_reduction = e["conjugate_reduction"];
  o.normalize_dipoles = e["normalize_dipoles"];
  return o;
}

inline SpectrumSpec build_spectrum(const nlohmann::json& s) {
  SpectrumSpec spec;
  spec.omega_max = s["omega_max"];
  spec.delta_omega = s["delta_omega"];
  spec.window = s["window"] == "none" ? Window::None : Window::Exponential;
  spec.window_fraction = s["window_fraction"];
  spec.padding = s["padding"];
  spec.trapezoid = s["trapezoid"];
  const double n = 2.0 * spec.omega_max / spec.delta_omega;
  if (std::abs(n - std::round(n)) > 1e-9 * n || n < 2.0)
    throw ConfigError("spectrum.delta_omega", "2 omega_max / delta_omega must be an integer >= 2");
  return spec;
}

inline FieldSpec build_field(const nlohmann::json& f) {
  FieldSpec field;
  const auto& pulses = f["pulses"];
  for (size_t k = 0; k < pulses.size(); ++k) {
    const auto& p = pulses[k];
    const std::string at = "spectroscopy.field.pulses[" + std::to_string(k) + "]";
    Pulse pulse;
    pulse.center = p["center"];
    pulse.amplitude = p["amplitude"];
    if (p["envelope"] == "gaussian") {
      if (!p.contains("width")) throw ConfigError(at + ".width", "is required for a gaussian envelope");
      pulse.envelope = GaussianEnvelope{p["width"].get<double>()};
    }
    const std::string pol = p["polarization"];
    pulse.polarization = pol == "perpendicular" ? Polarization::Perpendicular
                         : pol == "left"        ? Polarization::Left
                         : pol == "right"       ? Polarization::Right
                                                : Polarization::Parallel;
    field.pulses.push_back(pulse);
  }
  return field;
}

inline void emit_spectrum(RunResult& r, const std::filesystem::path& base, const std::vector<std::string>& formats) {
  for (const auto& f : formats) {
    if (f == "csv") {
      write_file((base.string() + ".spectrum.csv"), to_csv(*r.spectrum));
      r.files.push_back(base.string() + ".spectrum.csv");
    } else if (f == "json") {
      write_file(base.string() + ".spectrum.json", to_json(*r.spectrum).dump(1) + "\n");
      r.files.push_back(base.string() + ".spectrum.json");
    } else if (f == "svg") {
      write_file(base.string() + ".spectrum.svg", to_svg(*r.spectrum, r.pipeline));
      r.files.push_back(base.string() + ".spectrum.svg");
    }
  }
}

inline void emit_response(RunResult& r, const std::filesystem::path& base, const std::vector<std::string>& formats) {
  for (const auto& f : formats) {
    if (f == "csv") {
      write_file(base.string() + ".response.csv", to_csv(*r.response));
      r.files.push_back(base.string() + ".response.csv");
    } else if (f == "json") {
      write_file(base.string() + ".response.json", to_json(*r.response).dump(1) + "\n");
      r.files.push_back(base.string() + ".response.json");
    }
  }
}

}  // namespace detail

inline constexpr size_t kMaxGridPoints = 4'000'000;

/// Evaluates a configuration without writing anything.
inline RunResult evaluate_config(const nlohmann::json& config) {
  RunResult r;
  r.resolved = validate_config(config);
  auto& cfg = r.resolved;
  auto& sp = cfg["spectroscopy"];
  const bool has_name = sp.contains("name"), has_diagrams = sp.contains("diagrams");
  if (has_name == has_diagrams) throw ConfigError("spectroscopy", "give exactly one of name or diagrams");
  const std::string name = has_name ? sp["name"].get<std::string>() : "custom";

  std::optional<Matrix> static_field;
  const ModelSystem model = detail::build_model(cfg["model"], name == "mcd", static_field);
  const QuantumState rho0 = model.ground_state();
  const EstimatorOptions opt = detail::build_estimator(cfg["estimator"]);
  const SpectrumSpec spec = detail::build_spectrum(cfg["spectrum"]);
  if (sp.contains("field") && name != "linear_absorption")
    throw ConfigError("spectroscopy.field", "pulse envelopes are supported for linear_absorption only");

  if (name == "ld" || name == "cd" || name == "mcd") {
    if (!sp["delays"].empty()) throw ConfigError("spectroscopy.delays", name + " has no adjustable delays");
    if (name == "ld" && !model.mu_perp) throw ConfigError("model.mu_perp_scale", "is required for ld");
    if (name != "ld" && !model.m) throw ConfigError("model.magnetic_alpha", "a magnetic dipole is required for " + name);
    if (name == "mcd" && !static_field) throw ConfigError("model.static_field", "is required for mcd");
    const auto kind = name == "ld" ? DifferentialKind::LD : name == "cd" ? DifferentialKind::CD : DifferentialKind::MCD;
    r.pipeline = name;
    r.spectrum = detail::in_stage("spectrum", [&] {
      return differential_spectrum(kind, model, spec, opt, rho0, static_field);
    });
    return r;
  }

  // Diagram set and delay layout.
  DiagramSet set;
  std::vector<DelayAxisRole> roles;
  std::optional<CatalogEntry> entry;
  if (has_name) {
    entry = catalog(name);
    set = entry->diagrams;
    roles = entry->delays;
  } else {
    const auto& texts = sp["diagrams"];
    for (size_t k = 0; k < texts.size(); ++k) {
      try {
        const FeynmanDiagram d = parse_diagram(texts[k].get<std::string>());
        if (k == 0) set.order = d.order();
        if (d.order() != set.order)
          throw ConfigError("spectroscopy.diagrams[" + std::to_string(k) + "]", "all diagrams must share one order");
        set.terms.push_back({d, 1.0, Part::Full});
      } catch (const ParseError& e) {
        throw ConfigError("spectroscopy.diagrams[" + std::to_string(k) + "]", e.what());
      }
    }
    for (int j = 1; j <= set.order; ++j) roles.push_back({"tau" + std::to_string(j), DelayRole::Scanned});
  }
  auto& delays = sp["delays"];
  for (auto it = delays.begin(); it != delays.end(); ++it) {
    bool known = false;
    for (const auto& role : roles) known = known || role.label == it.key();
    if (!known) throw ConfigError("spectroscopy.delays." + it.key(), "no such delay for " + name);
  }
  GridSpec grid;
  for (const auto& role : roles) {
    if (role.role == DelayRole::FixedZero) {
      if (delays.contains(role.label) && delays[role.label].get<double>() != 0.0)
        throw ConfigError("spectroscopy.delays." + role.label, "is pinned at 0 for " + name);
      delays[role.label] = 0.0;
    } else if (role.role == DelayRole::Fixed && !delays.contains(role.label)) {
      delays[role.label] = 0.0;
    }
    if (delays.contains(role.label))
      grid.axes.push_back(GridAxis::hold(role.label, delays[role.label].get<double>()));
    else
      grid.axes.push_back(spec.axis(role.label));
  }
  size_t points = 1;
  for (const auto& a : grid.axes) points *= a.size();
  if (points > kMaxGridPoints)
    throw ConfigError("spectroscopy.delays", "grid has " + std::to_string(points) + " points; hold more delays fixed");

  r.response = detail::in_stage("response", [&] {
    return entry ? response_grid(*entry, grid, opt, model, rho0) : response_grid(set, grid, opt, model, rho0);
  });
  std::vector<size_t> scanned;
  for (size_t a = 0; a < grid.axes.size(); ++a)
    if (grid.axes[a].scanned) scanned.push_back(a);

  r.spectrum = detail::in_stage("spectrum", [&]() -> std::optional<Spectrum> {
    if (set.order == 1 && scanned.size() == 1) {
      r.pipeline = "absorption";
      const FieldSpec field = sp.contains("field") ? detail::build_field(sp["field"]) : FieldSpec::delta_at_zero();
      return absorption_spectrum(convolve(*r.response, field), spec);
    }
    if (set.order == 3 && scanned == std::vector<size_t>{0, 2}) {
      r.pipeline = "twod";
      return twod_spectrum(*r.response, spec);
    }
    if (scanned.size() == 1) {
      r.pipeline = "fourier_" + grid.axes[scanned[0]].label;
      return fourier_transform(TimeSeries{spec.dt(), r.response->values}, spec);
    }
    r.pipeline = "response";
    return std::nullopt;
  });
  return r;
}

/// Evaluates a configuration and writes its data files and manifest.
inline RunResult run_config(const nlohmann::json& config, const std::string& config_path = "") {
  const auto start = std::chrono::steady_clock::now();
  RunResult r = evaluate_config(config);
  const auto& out = r.resolved["output"];
  const std::filesystem::path dir = out["dir"].get<std::string>();
  const auto formats = out["formats"].get<std::vector<std::string>>();
  const std::filesystem::path base = dir / out["prefix"].get<std::string>();
  detail::in_stage("output", [&] {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
    if (r.spectrum) detail::emit_spectrum(r, base, formats);
    if (r.response && (!r.spectrum || out["write_response"].get<bool>())) detail::emit_response(r, base, formats);
    return 0;
  });
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto& m = r.manifest;
  m["version"] = kVersion;
  m["schema_version"] = kConfigSchemaVersion;
  m["config_path"] = config_path;
  m["pipeline"] = r.pipeline;
  m["seed"] = r.resolved["estimator"]["seed"];
  m["threads"] = thread_count();
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  m["resolved_config"] = r.resolved;
  m["outputs"] = r.files;
  m["wall_time_seconds"] = wall;
  const std::string manifest_path = base.string() + ".manifest.json";
  detail::in_stage("output", [&] {
    detail::write_file(manifest_path, m.dump(2) + "\n");
    return 0;
  });
  r.files.push_back(manifest_path);
  return r;
}

inline nlohmann::json read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("<file>", "cannot read " + path);
  std::stringstream text;
  text << f.rdbuf();
  try {
    return nlohmann::json::parse(text.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace qspectro
