// Copyright 2026 the fduav authors
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

#include "fduav/baselines.hpp"
#include "fduav/bcd.hpp"
#include "fduav/energy_model.hpp"
#include "fduav/geometry.hpp"
#include "fduav/jamming_power.hpp"
#include "fduav/link_model.hpp"
#include "fduav/scenario.hpp"
#include "fduav/source_power.hpp"
#include "fduav/trace_io.hpp"
#include "fduav/trajectory_opt.hpp"
