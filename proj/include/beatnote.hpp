// Copyright 2026 The Beatnote Authors
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

#ifndef BEATNOTE_BEATNOTE_HPP_
#define BEATNOTE_BEATNOTE_HPP_

#include "beatnote/checks.hpp"
#include "beatnote/config.hpp"
#include "beatnote/errors.hpp"
#include "beatnote/estimation.hpp"
#include "beatnote/fisher.hpp"
#include "beatnote/fringe_models.hpp"
#include "beatnote/instrument_sim.hpp"
#include "beatnote/io.hpp"
#include "beatnote/least_squares.hpp"
#include "beatnote/parallel.hpp"
#include "beatnote/reference_fringes.hpp"
#include "beatnote/rng.hpp"
#include "beatnote/sample_scan.hpp"
#include "beatnote/scenarios.hpp"
#include "beatnote/spectral_oracle.hpp"
#include "beatnote/state_metrics.hpp"
#include "beatnote/trial.hpp"
#include "beatnote/units.hpp"

#endif  // BEATNOTE_BEATNOTE_HPP_
