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

#ifndef IEOBS_TESTS_FIXTURES_HPP_
#define IEOBS_TESTS_FIXTURES_HPP_

// Demo system shared across the test suite: a third-order single-output
// plant with two inputs, driven by a multisine program.  The same numbers
// back the bundled configs, so anchors computed here also pin the config
// loader and the CLI.

#include <string>
#include <vector>

#include "ieobs/config.hpp"
#include "ieobs/observer.hpp"
#include "ieobs/plant.hpp"

namespace ieobs::testing {

inline Matrix scalar_block(double v) {
  Matrix b(1, 1);
  b(0, 0) = v;
  return b;
}

inline PlantDefinition demo_plant() {
  PlantDefinition plant;
  plant.q = 1;
  plant.r = 3;
  plant.m = 2;
  plant.A_blocks = {scalar_block(0.4), scalar_block(0.5), scalar_block(-0.1)};
  plant.B.resize(3, 2);
  plant.B << 0.1, -0.2,
             0.2,  0.1,
             0.3,  0.0;
  plant.x0.resize(3);
  plant.x0 << 1.0, 1.0, 1.0;
  return plant;
}

// Gram floor calibrated from the demo run: the smallest gram eigenvalue is
// 1.8e-4 one step before the horizon and 2.4e-2 at it, so the geometric
// mean separates the two cleanly.
inline constexpr double kDemoZeta = 0.0020925854638466882;

inline ObserverConfig demo_observer() {
  ObserverConfig config;
  config.F_blocks = {scalar_block(0.0022), scalar_block(0.011),
                     scalar_block(0.0001)};
  config.kappa1 = 1.05;
  config.kappa2 = 1.05;
  config.kappa3 = 0.01;
  config.alpha = 0.26;
  config.sigma = -0.98;
  config.zeta = kDemoZeta;
  ObserverDims dims{1, 3, 2};
  std::vector<Matrix> a0 = {scalar_block(5.0), scalar_block(5.0),
                            scalar_block(5.0)};
  Matrix b0 = Matrix::Constant(3, 2, 5.0);
  Vector x00(3);
  x00 << 0.9, 0.9, 0.9;
  config.psi_hat_0 = assemble_psi(a0, b0, x00, config.F_blocks, dims);
  return config;
}

inline InputProgram demo_input() {
  InputProgram program;
  program.gain = 0.2;
  program.envelope = Envelope::exponential(1.0, -0.001);
  std::vector<double> low = {2, 3, 5, 7, 11, 13, 17, 23, 29, 31, 37, 41};
  std::vector<double> high = {59, 157, 163, 167, 173, 179,
                              61, 67,  71,  73,  79,  83};
  program.channels.resize(2);
  for (double w : low) program.channels[0].push_back({1.0, w});
  for (double w : high) program.channels[1].push_back({1.0, w});
  return program;
}

inline ExperimentConfig demo_config(long steps) {
  ExperimentConfig config;
  config.name = "demo";
  config.plant = demo_plant();
  config.observer = demo_observer();
  config.input = demo_input();
  config.run.steps = steps;
  return config;
}

// True parameter vector for the demo system, in observer coordinates.
inline ParameterVector demo_truth() {
  PlantDefinition plant = demo_plant();
  ObserverConfig observer = demo_observer();
  return parameterize(plant.A_blocks, plant.B, plant.x0, observer.F_blocks,
                      dims_of(plant));
}

inline std::string config_path(const std::string& name) {
  return std::string(IEOBS_CONFIG_DIR) + "/" + name;
}

}  // namespace ieobs::testing

#endif  // IEOBS_TESTS_FIXTURES_HPP_
