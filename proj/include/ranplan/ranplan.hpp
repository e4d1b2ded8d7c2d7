// Copyright 2026 The ranplan Authors
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

#ifndef RANPLAN_RANPLAN_HPP
#define RANPLAN_RANPLAN_HPP

#include "ranplan/digest.hpp"
#include "ranplan/geometry.hpp"
#include "ranplan/milp.hpp"
#include "ranplan/oracle.hpp"
#include "ranplan/planner.hpp"
#include "ranplan/radio.hpp"
#include "ranplan/random.hpp"
#include "ranplan/resilience.hpp"
#include "ranplan/scenario.hpp"
#include "ranplan/solver.hpp"
#include "ranplan/validate.hpp"

namespace ranplan {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ranplan

#endif  // RANPLAN_RANPLAN_HPP
