// Copyright 2026 The geoprog Authors
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

#define GEOPROG_VERSION "0.1.0"

#include "geoprog/dataset.hpp"
#include "geoprog/eval.hpp"
#include "geoprog/executor.hpp"
#include "geoprog/json.hpp"
#include "geoprog/operations.hpp"
#include "geoprog/parallel.hpp"
#include "geoprog/problem.hpp"
#include "geoprog/program.hpp"
#include "geoprog/synthesizer.hpp"
