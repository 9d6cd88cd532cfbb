// Copyright 2026 The qwalk developers
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

#include "qwalk/branchsim.hpp"
#include "qwalk/chain.hpp"
#include "qwalk/circuit.hpp"
#include "qwalk/costmodel.hpp"
#include "qwalk/fixedpoint.hpp"
#include "qwalk/grover_rudolph.hpp"
#include "qwalk/oracles.hpp"
#include "qwalk/randchain.hpp"
#include "qwalk/szegedy.hpp"
