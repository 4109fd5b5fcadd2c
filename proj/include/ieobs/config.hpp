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

#ifndef IEOBS_CONFIG_HPP_
#define IEOBS_CONFIG_HPP_

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ieobs/observer.hpp"
#include "ieobs/plant.hpp"

namespace ieobs
{

/// Configuration problems carry the dotted path of the offending field.
struct ConfigError : std::runtime_error
{
  explicit ConfigError(const std::string & what) : std::runtime_error(what) {}
};

struct RunSettings
{
  long steps = 1000;
  std::string csv_path;   ///< empty: no CSV unless requested on the command line
  std::string plot_path;  ///< empty: no plot unless requested on the command line
  bool log_scale = false;
  bool full_dump = false;
  long seed = 0;  ///< reserved; the pipeline is deterministic
};

struct ExperimentConfig
{
  std::string name;
  PlantDefinition plant;
  ObserverConfig observer;
  InputProgram input;
  RunSettings run;
};

namespace detail
{

using nlohmann::json;

inline const json & member(const json & j, const std::string & path, const std::string & key)
{
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(path + "." + key + ": missing");
  }
  return j.at(key);
}

inline double number_at(const json & j, const std::string & path)
{
  if (!j.is_number()) {
    throw ConfigError(path + ": expected a number");
  }
  return j.get<double>();
}

inline double number_field(const json & j, const std::string & path, const std::string & key)
{
  return number_at(member(j, path, key), path + "." + key);
}

inline long integer_field(const json & j, const std::string & path, const std::string & key)
{
  const json & v = member(j, path, key);
  if (!v.is_number_integer()) {
    throw ConfigError(path + "." + key + ": expected an integer");
  }
  return v.get<long>();
}

inline Vector vector_field(
  const json & j, const std::string & path, const std::string & key, Eigen::Index size)
{
  const json & v = member(j, path, key);
  const std::string full = path + "." + key;
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != size) {
    throw ConfigError(full + ": expected " + std::to_string(size) + " numbers");
  }
  Vector out(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    out(i) = number_at(v.at(static_cast<size_t>(i)), full + "[" + std::to_string(i) + "]");
  }
  return out;
}

inline Matrix matrix_at(
  const json & v, const std::string & full, Eigen::Index rows, Eigen::Index cols)
{
  if (!v.is_array() || static_cast<Eigen::Index>(v.size()) != rows) {
    throw ConfigError(full + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json & row = v.at(static_cast<size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(
        full + "[" + std::to_string(i) + "]: expected " + std::to_string(cols) + " numbers");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      out(i, k) = number_at(
        row.at(static_cast<size_t>(k)),
        full + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  return out;
}

inline Matrix matrix_field(
  const json & j, const std::string & path, const std::string & key, Eigen::Index rows,
  Eigen::Index cols)
{
  return matrix_at(member(j, path, key), path + "." + key, rows, cols);
}

inline std::vector<Matrix> block_list_field(
  const json & j, const std::string & path, const std::string & key, int q, int r)
{
  const json & v = member(j, path, key);
  const std::string full = path + "." + key;
  if (!v.is_array() || static_cast<int>(v.size()) != r) {
    throw ConfigError(full + ": expected " + std::to_string(r) + " blocks");
  }
  std::vector<Matrix> blocks;
  blocks.reserve(static_cast<size_t>(r));
  for (int i = 0; i < r; ++i) {
    blocks.push_back(
      matrix_at(v.at(static_cast<size_t>(i)), full + "[" + std::to_string(i) + "]", q, q));
  }
  return blocks;
}

}  // namespace detail

/// Parses and fully validates a config document. Throws ConfigError naming
/// the offending field; a non-Schur F only prints a warning.
inline ExperimentConfig parse_config(const nlohmann::json & doc, const std::string & default_name)
{
  using detail::member;
  ExperimentConfig cfg;
  cfg.name = doc.is_object() && doc.contains("name") && doc.at("name").is_string() ?
    doc.at("name").get<std::string>() : default_name;

  // plant
  {
    const nlohmann::json & p = member(doc, "config", "plant");
    cfg.plant.q = static_cast<int>(detail::integer_field(p, "plant", "q"));
    cfg.plant.r = static_cast<int>(detail::integer_field(p, "plant", "r"));
    cfg.plant.m = static_cast<int>(detail::integer_field(p, "plant", "m"));
    if (cfg.plant.q < 1) {throw ConfigError("plant.q: must be at least 1");}
    if (cfg.plant.r < 1) {throw ConfigError("plant.r: must be at least 1");}
    if (cfg.plant.m < 1) {throw ConfigError("plant.m: must be at least 1");}
    cfg.plant.A_blocks =
      detail::block_list_field(p, "plant", "A_blocks", cfg.plant.q, cfg.plant.r);
    cfg.plant.B = detail::matrix_field(p, "plant", "B", cfg.plant.n(), cfg.plant.m);
    cfg.plant.x0 = detail::vector_field(p, "plant", "x0", cfg.plant.n());
    try {
      validate(cfg.plant);
    } catch (const std::invalid_argument & e) {
      throw ConfigError(e.what());
    }
  }
  const ObserverDims dims = dims_of(cfg.plant);

  // observer
  {
    const nlohmann::json & o = member(doc, "config", "observer");
    cfg.observer.F_blocks = detail::block_list_field(o, "observer", "F_blocks", dims.q, dims.r);
    cfg.observer.kappa1 = detail::number_field(o, "observer", "kappa1");
    cfg.observer.kappa2 = detail::number_field(o, "observer", "kappa2");
    cfg.observer.kappa3 = detail::number_field(o, "observer", "kappa3");
    cfg.observer.alpha = detail::number_field(o, "observer", "alpha");
    cfg.observer.sigma = detail::number_field(o, "observer", "sigma");
    cfg.observer.zeta = o.contains("zeta") ? detail::number_field(o, "observer", "zeta") : 1e-6;
    const std::vector<Matrix> a0 =
      detail::block_list_field(o, "observer", "A0_blocks", dims.q, dims.r);
    const Matrix b0 = detail::matrix_field(o, "observer", "B0", dims.n(), dims.m);
    const Vector x00 = detail::vector_field(o, "observer", "x00", dims.n());
    if (!(cfg.observer.alpha > 0.0 && cfg.observer.alpha < 1.0)) {
      throw ConfigError("observer.alpha: must lie in (0,1)");
    }
    if (!(cfg.observer.sigma > -1.0 && cfg.observer.sigma < 1.0)) {
      throw ConfigError("observer.sigma: must lie in (-1,1)");
    }
    cfg.observer.psi_hat_0 = assemble_psi(a0, b0, x00, cfg.observer.F_blocks, dims);
    try {
      make_observer(dims, cfg.observer);  // full invariant check, warns on a non-Schur F
    } catch (const std::exception & e) {
      throw ConfigError(e.what());
    }
  }

  // input
  {
    const nlohmann::json & in = member(doc, "config", "input");
    cfg.input.gain = detail::number_field(in, "input", "gain");
    const nlohmann::json & env = member(in, "input", "envelope");
    const nlohmann::json & type = member(env, "input.envelope", "type");
    const std::string kind = type.is_string() ? type.get<std::string>() : "";
    if (kind == "constant") {
      cfg.input.envelope =
        Envelope::constant(detail::number_field(env, "input.envelope", "scale"));
    } else if (kind == "exponential") {
      cfg.input.envelope = Envelope::exponential(
        detail::number_field(env, "input.envelope", "scale"),
        detail::number_field(env, "input.envelope", "rate"));
    } else if (kind == "gate") {
      const long steps = detail::integer_field(env, "input.envelope", "steps");
      if (steps < 0) {throw ConfigError("input.envelope.steps: must be nonnegative");}
      cfg.input.envelope = Envelope::gate(steps);
    } else {
      throw ConfigError("input.envelope.type: expected constant, exponential, or gate");
    }
    const nlohmann::json & channels = member(in, "input", "channels");
    if (!channels.is_array() || static_cast<int>(channels.size()) != cfg.plant.m) {
      throw ConfigError(
        "input.channels: expected " + std::to_string(cfg.plant.m) + " channel term lists");
    }
    cfg.input.channels.resize(channels.size());
    for (size_t c = 0; c < channels.size(); ++c) {
      const nlohmann::json & terms = channels.at(c);
      const std::string path = "input.channels[" + std::to_string(c) + "]";
      if (!terms.is_array()) {
        throw ConfigError(path + ": expected a list of sine terms");
      }
      for (size_t i = 0; i < terms.size(); ++i) {
        const nlohmann::json & term = terms.at(i);
        const std::string tp = path + "[" + std::to_string(i) + "]";
        SineTerm st;
        st.amplitude = detail::number_at(member(term, tp, "amplitude"), tp + ".amplitude");
        st.omega = detail::number_at(member(term, tp, "omega"), tp + ".omega");
        cfg.input.channels[c].push_back(st);
      }
    }
  }

  // run
  {
    const nlohmann::json & r = member(doc, "config", "run");
    cfg.run.steps = detail::integer_field(r, "run", "steps");
    if (cfg.run.steps < 1) {throw ConfigError("run.steps: must be at least 1");}
    if (r.contains("csv")) {cfg.run.csv_path = r.at("csv").get<std::string>();}
    if (r.contains("plot")) {cfg.run.plot_path = r.at("plot").get<std::string>();}
    if (r.contains("log_scale")) {cfg.run.log_scale = r.at("log_scale").get<bool>();}
    if (r.contains("full_dump")) {cfg.run.full_dump = r.at("full_dump").get<bool>();}
    if (r.contains("seed")) {cfg.run.seed = r.at("seed").get<long>();}
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::string & path)
{
  std::ifstream file(path);
  if (!file) {
    throw ConfigError("config file '" + path + "' cannot be opened");
  }
  nlohmann::json doc;
  try {
    file >> doc;
  } catch (const nlohmann::json::exception & e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc, std::filesystem::path(path).stem().string());
}

}  // namespace ieobs

#endif  // IEOBS_CONFIG_HPP_
