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

// Command-line front end: run configurations, inspect diagrams, estimate costs and
// compare the circuit path against the operator-product oracle.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qspectro.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;
constexpr int kExitOracle = 3;

void print_set(const qspectro::DiagramSet& set) {
  for (size_t k = 0; k < set.terms.size(); ++k) {
    const auto& t = set.terms[k];
    const int sign = t.diagram.sign();
    std::cout << (sign > 0 ? '+' : '-') << ' ';
    if (t.multiplier != qspectro::Complex{1.0, 0.0}) {
      std::ostringstream m;
      m << t.multiplier.real();
      if (t.multiplier.imag() != 0.0) m << (t.multiplier.imag() > 0 ? "+" : "") << t.multiplier.imag() << 'i';
      std::cout << '(' << m.str() << ") ";
    }
    if (t.part == qspectro::Part::Real) std::cout << "Re ";
    if (t.part == qspectro::Part::Imag) std::cout << "Im ";
    std::cout << t.diagram.correlation_string() << "    [" << t.diagram.to_string() << "]\n";
  }
  std::cout << set.terms.size() << " diagram(s)\n";
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream f(path);
  if (!f) throw qspectro::Error("cannot read " + path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qspectro: spectroscopy from double-sided Feynman diagrams via Hadamard-test circuits"};
  app.set_version_flag("--version", std::string(qspectro::kVersion));
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a configuration file and write spectra plus a manifest");
  std::string cfg_path, out_dir;
  bool quiet = false;
  run->add_option("config", cfg_path, "Run configuration (JSON)")->required();
  run->add_option("--out", out_dir, "Override output.dir");
  run->add_flag("--quiet", quiet, "Only report errors");

  auto* diagrams = app.add_subcommand("diagrams", "Expand, print, parse or validate Feynman diagrams");
  int order = -1;
  std::string catalog_name, parse_text, validate_path;
  bool reduce = false, list = false;
  diagrams->add_option("--order", order, "Expand the nested commutator of this order")->check(CLI::Range(0, 8));
  diagrams->add_option("--catalog", catalog_name, "Print a catalog entry");
  diagrams->add_flag("--list", list, "List catalog entries");
  diagrams->add_flag("--reduce", reduce, "Apply conjugate-pair reduction");
  diagrams->add_option("--parse", parse_text, "Parse diagram text and print its canonical form");
  diagrams->add_option("--validate", validate_path, "Validate diagram text from a file ('-' for stdin)");

  auto* cost = app.add_subcommand("cost", "Gate-cost breakdown of a spectroscopy run");
  qspectro::CostInputs in;
  long filter = 0;
  bool as_json = false;
  cost->add_option("--n", in.n, "Response order")->required();
  cost->add_option("--wmax", in.omega_max, "Maximum frequency")->required();
  cost->add_option("--dw", in.delta_omega, "Frequency resolution")->required();
  cost->add_option("--eps", in.eps_shot, "Shot-noise target")->required();
  cost->add_option("--eta", in.eta, "Particle count")->capture_default_str();
  cost->add_option("--poly", in.poly_degree, "Degree of poly(eta)")->capture_default_str();
  cost->add_option("--coeff", in.coeff, "Constant of the per-run cost")->capture_default_str();
  cost->add_option("--eps-sim", in.eps_sim, "Simulation error (0 drops the log term)")->capture_default_str();
  cost->add_flag("--ae", in.amplitude_estimation, "Amplitude estimation (shots ~ 1/eps)");
  cost->add_option("--filter", filter, "Diagrams surviving a phase-matching filter");
  cost->add_flag("--json", as_json, "JSON output");

  auto* check = app.add_subcommand("oracle-check", "Compare circuit readouts with the operator-product oracle");
  std::string check_model = "ladder3";
  int check_order = 2, trials = 50;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  check->add_option("--model", check_model, "Model family")
      ->check(CLI::IsMember(qspectro::oracle_check_models()))
      ->capture_default_str();
  check->add_option("--order", check_order, "Diagram order")->check(CLI::Range(0, 6))->capture_default_str();
  check->add_option("--trials", trials, "Random instances")->check(CLI::PositiveNumber)->capture_default_str();
  check->add_option("--seed", seed, "Seed")->capture_default_str();
  check->add_option("--tolerance", tolerance, "Maximum allowed deviation")->capture_default_str();

  app.add_subcommand("schema", "Print the run-configuration JSON schema");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      nlohmann::json cfg = qspectro::read_config_file(cfg_path);
      if (!out_dir.empty()) {
        if (!cfg.is_object()) throw qspectro::ConfigError("<root>", "expected object");
        cfg["output"]["dir"] = out_dir;
      }
      const auto result = qspectro::run_config(cfg, cfg_path);
      if (!quiet) {
        std::cout << "pipeline: " << result.pipeline << '\n';
        for (const auto& f : result.files) std::cout << "wrote " << f << '\n';
      }
    } else if (diagrams->parsed()) {
      if (list) {
        for (const auto& name : qspectro::catalog_names())
          std::cout << name << ": " << qspectro::catalog(name).description << '\n';
      } else if (!catalog_name.empty()) {
        const auto e = qspectro::catalog(catalog_name);
        std::cout << e.name << ": " << e.description << "\nrepresentative: " << e.representative << "\ndelays:";
        for (const auto& d : e.delays)
          std::cout << ' ' << d.label << '='
                    << (d.role == qspectro::DelayRole::Scanned ? "scanned"
                        : d.role == qspectro::DelayRole::Fixed ? "fixed"
                                                                : "zero");
        std::cout << '\n';
        print_set(reduce ? qspectro::conjugate_reduce(e.diagrams) : e.diagrams);
      } else if (order >= 0) {
        const auto set = qspectro::expand_commutators(order);
        print_set(reduce ? qspectro::conjugate_reduce(set) : set);
      } else if (!parse_text.empty() || !validate_path.empty()) {
        const std::string text = parse_text.empty() ? read_text(validate_path) : parse_text;
        const auto d = qspectro::parse_diagram(text);
        std::cout << (validate_path.empty() ? "" : "valid: ") << d.to_string() << '\n'
                  << "sign " << (d.sign() > 0 ? '+' : '-') << ", " << d.correlation_string() << '\n';
      } else {
        std::cerr << "diagrams: give one of --order, --catalog, --list, --parse, --validate\n";
        return kExitConfig;
      }
    } else if (cost->parsed()) {
      auto b = qspectro::cost_estimate(in);
      if (filter > 0) b = qspectro::apply_diagram_filter_count(b, filter);
      if (as_json) {
        nlohmann::ordered_json j;
        j["n"] = b.n;
        j["c_u"] = b.c_u;
        j["n_corr"] = b.n_corr;
        j["n_samples"] = b.n_samples;
        j["n_shots"] = b.n_shots;
        j["n_deriv"] = b.n_deriv;
        j["total"] = b.total;
        j["closed_form"] = b.closed_form;
        j["ratio"] = b.total / b.closed_form;
        std::cout << j.dump(2) << '\n';
      } else {
        auto row = [](const char* name, double v) { std::printf("%-12s %.6g\n", name, v); };
        row("n", b.n);
        row("c_u", b.c_u);
        row("n_corr", b.n_corr);
        row("n_samples", b.n_samples);
        row("n_shots", b.n_shots);
        row("n_deriv", b.n_deriv);
        row("total", b.total);
        row("closed_form", b.closed_form);
        row("ratio", b.total / b.closed_form);
      }
    } else if (check->parsed()) {
      const auto r = qspectro::oracle_check(check_model, check_order, trials, seed);
      std::printf("model %s, order %d, %d trials\n", r.model.c_str(), r.order, r.trials);
      std::printf("max |circuit - overlap oracle|      = %.3e\n", r.max_overlap_deviation);
      std::printf("max |direct circuit - correlation|  = %.3e\n", r.max_correlation_deviation);
      std::printf("max deviation                       = %.3e\n", r.max_deviation());
      if (r.max_deviation() > tolerance) {
        std::fprintf(stderr, "deviation exceeds %.1e\n", tolerance);
        return kExitOracle;
      }
    } else {
      std::cout << qspectro::kRunConfigSchema << '\n';
    }
  } catch (const qspectro::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qspectro::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
