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

// Umbrella header.

#include "qspectro/errors.hpp"
#include "qspectro/operators.hpp"
#include "qspectro/models.hpp"
#include "qspectro/diagrams.hpp"
#include "qspectro/parallel.hpp"
#include "qspectro/dynamics.hpp"
#include "qspectro/circuit.hpp"
#include "qspectro/oracle.hpp"
#include "qspectro/response.hpp"
#include "qspectro/spectra.hpp"
#include "qspectro/spectrum_io.hpp"
#include "qspectro/cost.hpp"
#include "qspectro/schema.hpp"
#include "qspectro/config.hpp"
#include "qspectro/oracle_check.hpp"
#include "qspectro/version.hpp"
