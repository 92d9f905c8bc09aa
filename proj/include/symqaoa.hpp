// Copyright 2026 The symqaoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "symqaoa/errors.hpp"
#include "symqaoa/state.hpp"
#include "symqaoa/sampling.hpp"
#include "symqaoa/circuit.hpp"
#include "symqaoa/maxcut.hpp"
#include "symqaoa/qaoa.hpp"
#include "symqaoa/symmetry.hpp"
#include "symqaoa/transpile.hpp"
#include "symqaoa/noise.hpp"
#include "symqaoa/harness.hpp"
