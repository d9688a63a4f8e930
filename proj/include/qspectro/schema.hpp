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

// Run-configuration schema and a validator for the JSON Schema subset it uses
// (type, properties, additionalProperties, required, enum, minimum, exclusiveMinimum,
// items, minItems, default). Validation errors name the offending field path.

#include <string>
#include <string_view>

#include <json.hpp>

#include "qspectro/errors.hpp"

namespace qspectro {

inline constexpr std::string_view kRunConfigSchema = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "qspectro run configuration",
  "type": "object",
  "additionalProperties": false,
  "required": ["model", "spectroscopy", "spectrum"],
  "properties": {
    "schema_version": {"type": "integer", "enum": [1], "default": 1},
    "model": {
      "type": "object",
      "additionalProperties": false,
      "required": ["type"],
      "properties": {
        "type": {"type": "string", "enum": ["two_level", "ladder", "displaced_oscillator", "vtype"]},
        "omega0": {"type": "number", "exclusiveMinimum": 0},
        "splitting": {"type": "number", "minimum": 0},
        "energies": {"type": "array", "minItems": 2, "items": {"type": "number"}},
        "dipoles": {"type": "array", "minItems": 1, "items": {"type": "number"}},
        "omega_e": {"type": "number", "exclusiveMinimum": 0},
        "omega_v": {"type": "number", "exclusiveMinimum": 0},
        "displacement": {"type": "number"},
        "n_fock": {"type": "integer", "minimum": 1},
        "dephasing": {"type": "number", "minimum": 0, "default": 0},
        "jumps": {
          "type": "array",
          "default": [],
          "items": {
            "type": "object",
            "additionalProperties": false,
            "required": ["from", "to", "rate"],
            "properties": {
              "from": {"type": "integer", "minimum": 0},
              "to": {"type": "integer", "minimum": 0},
              "rate": {"type": "number", "minimum": 0}
            }
          }
        },
        "static_field": {"type": "array", "items": {"type": "number"}},
        "magnetic_alpha": {"type": "number"},
        "mu_perp_scale": {"type": "number"}
      }
    },
    "spectroscopy": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "name": {
          "type": "string",
          "enum": ["linear_absorption", "cd", "mcd", "ld", "sum_frequency", "pump_probe", "twod", "raman",
                   "twodcd", "four_wave_mixing", "fifth_order_raman"]
        },
        "diagrams": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        "delays": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}, "default": {}},
        "field": {
          "type": "object",
          "additionalProperties": false,
          "required": ["pulses"],
          "properties": {
            "pulses": {
              "type": "array",
              "items": {
                "type": "object",
                "additionalProperties": false,
                "required": ["center"],
                "properties": {
                  "center": {"type": "number", "minimum": 0},
                  "envelope": {"type": "string", "enum": ["delta", "gaussian"], "default": "delta"},
                  "width": {"type": "number", "exclusiveMinimum": 0},
                  "amplitude": {"type": "number", "default": 1},
                  "polarization": {"type": "string", "enum": ["parallel", "perpendicular", "left", "right"],
                                   "default": "parallel"}
                }
              }
            }
          }
        }
      }
    },
    "estimator": {
      "type": "object",
      "additionalProperties": false,
      "default": {},
      "properties": {
        "mode": {"type": "string", "enum": ["exact", "shots"], "default": "exact"},
        "shots": {"type": "integer", "minimum": 1, "default": 1000},
        "seed": {"type": "integer", "minimum": 0, "default": 0},
        "delta": {"type": "number", "exclusiveMinimum": 0},
        "stencil_order": {"type": "integer", "enum": [2, 4], "default": 2},
        "pauli_shortcut": {"type": "boolean", "default": false},
        "conjugate_reduction": {"type": "boolean", "default": true},
        "normalize_dipoles": {"type": "boolean", "default": true}
      }
    },
    "spectrum": {
      "type": "object",
      "additionalProperties": false,
      "required": ["omega_max", "delta_omega"],
      "properties": {
        "omega_max": {"type": "number", "exclusiveMinimum": 0},
        "delta_omega": {"type": "number", "exclusiveMinimum": 0},
        "window": {"type": "string", "enum": ["exponential", "none"], "default": "exponential"},
        "window_fraction": {"type": "number", "exclusiveMinimum": 0, "default": 0.3333333333333333},
        "padding": {"type": "integer", "minimum": 1, "default": 4},
        "trapezoid": {"type": "boolean", "default": true}
      }
    },
    "output": {
      "type": "object",
      "additionalProperties": false,
      "default": {},
      "properties": {
        "dir": {"type": "string", "default": "."},
        "prefix": {"type": "string", "default": "qspectro"},
        "formats": {"type": "array", "items": {"type": "string", "enum": ["csv", "json", "svg"]},
                    "default": ["csv", "json"]},
        "write_response": {"type": "boolean", "default": false}
      }
    }
  }
})json";

inline const nlohmann::json& run_config_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(kRunConfigSchema);
  return schema;
}

namespace detail {

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

inline bool type_matches(const nlohmann::json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  return false;
}

/// Validates `value` against `schema` in place, inserting defaults for absent properties.
inline void validate_node(nlohmann::json& value, const nlohmann::json& schema, const std::string& path) {
  const std::string where = path.empty() ? "<root>" : path;
  if (schema.contains("type")) {
    const std::string type = schema["type"];
    if (!type_matches(value, type)) throw ConfigError(where, "expected " + type + ", got " + value.type_name());
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == value;
    if (!found) throw ConfigError(where, "must be one of " + schema["enum"].dump());
  }
  if (value.is_number()) {
    const double v = value.get<double>();
    if (schema.contains("minimum") && v < schema["minimum"].get<double>())
      throw ConfigError(where, "must be >= " + schema["minimum"].dump());
    if (schema.contains("exclusiveMinimum") && v <= schema["exclusiveMinimum"].get<double>())
      throw ConfigError(where, "must be > " + schema["exclusiveMinimum"].dump());
  }
  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema["minItems"].get<size_t>())
      throw ConfigError(where, "needs at least " + schema["minItems"].dump() + " items");
    if (schema.contains("items"))
      for (size_t i = 0; i < value.size(); ++i)
        validate_node(value[i], schema["items"], path + "[" + std::to_string(i) + "]");
  }
  if (value.is_object()) {
    const nlohmann::json empty = nlohmann::json::object();
    const auto& props = schema.contains("properties") ? schema["properties"] : empty;
    if (schema.contains("required"))
      for (const auto& r : schema["required"])
        if (!value.contains(r.get<std::string>())) throw ConfigError(join_path(path, r), "is required");
    for (auto it = value.begin(); it != value.end(); ++it) {
      const std::string child = join_path(path, it.key());
      if (props.contains(it.key())) {
        validate_node(it.value(), props[it.key()], child);
      } else if (schema.contains("additionalProperties")) {
        const auto& extra = schema["additionalProperties"];
        if (extra.is_boolean()) {
          if (!extra.get<bool>()) throw ConfigError(child, "unknown key");
        } else {
          validate_node(it.value(), extra, child);
        }
      }
    }
    for (auto it = props.begin(); it != props.end(); ++it) {
      if (value.contains(it.key()) || !it.value().contains("default")) continue;
      value[it.key()] = it.value()["default"];
      validate_node(value[it.key()], it.value(), join_path(path, it.key()));
    }
  }
}

}  // namespace detail

/// Returns a copy of `config` with every schema default filled in, or throws ConfigError.
inline nlohmann::json validate_config(const nlohmann::json& config) {
  nlohmann::json resolved = config;
  detail::validate_node(resolved, run_config_schema(), "");
  return resolved;
}

}  // namespace qspectro
