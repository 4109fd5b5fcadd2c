// Copyright 2026 The ieobs Authors
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

#ifndef IEOBS_IEOBS_HPP_
#define IEOBS_IEOBS_HPP_

#include "ieobs/config.hpp"
#include "ieobs/experiment.hpp"
#include "ieobs/numerics.hpp"
#include "ieobs/observer.hpp"
#include "ieobs/plant.hpp"
#include "ieobs/plot.hpp"
#include "ieobs/trace.hpp"
#include "ieobs/version.hpp"

#endif  // IEOBS_IEOBS_HPP_
