// Copyright 2026 The EPC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "epc/bilinear.hpp"
#include "epc/bilinear_io.hpp"
#include "epc/cluster_sim.hpp"
#include "epc/codes.hpp"
#include "epc/config.hpp"
#include "epc/descriptor.hpp"
#include "epc/error.hpp"
#include "epc/field.hpp"
#include "epc/matrix.hpp"
#include "epc/matrix_io.hpp"
#include "epc/polynomial.hpp"
#include "epc/scheme.hpp"
#include "epc/suites.hpp"
#include "epc/thresholds.hpp"
#include "epc/verifier.hpp"
