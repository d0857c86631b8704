// Copyright 2026 The ldpres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "ldpres/analysis.hpp"
#include "ldpres/designs.hpp"
#include "ldpres/error.hpp"
#include "ldpres/estimation.hpp"
#include "ldpres/finite_field.hpp"
#include "ldpres/incidence.hpp"
#include "ldpres/json_io.hpp"
#include "ldpres/mechanisms.hpp"
#include "ldpres/number_theory.hpp"
#include "ldpres/resolutions.hpp"
