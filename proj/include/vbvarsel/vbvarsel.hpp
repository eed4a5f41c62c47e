// vbvarsel/vbvarsel.hpp

// Copyright 2026  The vbvarsel authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef VBVARSEL_VBVARSEL_HPP_
#define VBVARSEL_VBVARSEL_HPP_

#include "vbvarsel/config.hpp"
#include "vbvarsel/csv.hpp"
#include "vbvarsel/data_matrix.hpp"
#include "vbvarsel/engine.hpp"
#include "vbvarsel/errors.hpp"
#include "vbvarsel/experiment.hpp"
#include "vbvarsel/hyperparameters.hpp"
#include "vbvarsel/metrics.hpp"
#include "vbvarsel/reproduce.hpp"
#include "vbvarsel/rng.hpp"
#include "vbvarsel/schedule.hpp"
#include "vbvarsel/special_functions.hpp"
#include "vbvarsel/state.hpp"
#include "vbvarsel/synthetic.hpp"

#endif  // VBVARSEL_VBVARSEL_HPP_
