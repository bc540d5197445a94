// Copyright 2026 The ehss-astw Authors
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

#ifndef EHSS_EHSS_HPP_
#define EHSS_EHSS_HPP_

#include "ehss/analysis.hpp"
#include "ehss/errors.hpp"
#include "ehss/fault_reconstruction.hpp"
#include "ehss/observer.hpp"
#include "ehss/plant.hpp"
#include "ehss/report.hpp"
#include "ehss/scenario_io.hpp"
#include "ehss/simulation.hpp"
#include "ehss/smc_cells.hpp"
#include "ehss/trace_io.hpp"

#endif  // EHSS_EHSS_HPP_
