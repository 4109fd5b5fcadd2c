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

#ifndef IEOBS_TRACE_HPP_
#define IEOBS_TRACE_HPP_

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ieobs/numerics.hpp"

namespace ieobs
{

/// One row of a run trace. p_hat and x_hat are populated only when the run
/// records full dumps.
struct TraceRecord
{
  long t = 0;
  Vector y;
  Vector u;
  double psi_err_norm = 0.0;
  double x_err_norm = 0.0;
  double gamma_sq = 0.0;
  double gram_min_eig = 0.0;
  int eta = 0;
  Vector p_hat;
  Vector x_hat;
};

struct RunSummary
{
  std::optional<long> sie_step;
  double initial_psi_err = 0.0;
  double initial_x_err = 0.0;
  double final_psi_err = 0.0;
  double final_x_err = 0.0;
  double fitted_decay_rate = 1.0;  ///< per-step factor in (0,1], exp of the log-fit slope
  double fit_r_squared = 0.0;
  long fit_points = 0;
  bool monotone_ok = true;  ///< no step violated ||psi_err||^2 <= previous + 1e-12
  long steps = 0;
};

namespace detail
{

/// Shortest decimal form that round-trips a 64-bit double.
inline std::string format_double(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_double(const std::string & field, const char * what)
{
  char * end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') {
    throw std::invalid_argument(std::string("parse_csv: bad ") + what + " field '" + field + "'");
  }
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string & line)
{
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace detail

/// Serializes a trace with the column contract
///   t,y_0..y_{q-1},u_0..u_{m-1},psi_err,x_err,gamma_sq,gram_min_eig,eta
/// plus p_hat_*/x_hat_* columns in full-dump mode. Floats carry 17
/// significant digits so parsing reproduces the exact bit patterns.
inline std::string csv_string(const std::vector<TraceRecord> & trace, bool full_dump = false)
{
  if (trace.empty()) {
    throw std::invalid_argument("csv_string: trace is empty");
  }
  const Eigen::Index q = trace.front().y.size();
  const Eigen::Index m = trace.front().u.size();
  const Eigen::Index pdim = full_dump ? trace.front().p_hat.size() : 0;
  const Eigen::Index n = full_dump ? trace.front().x_hat.size() : 0;

  std::string out;
  out += "t";
  for (Eigen::Index i = 0; i < q; ++i) {out += ",y_" + std::to_string(i);}
  for (Eigen::Index i = 0; i < m; ++i) {out += ",u_" + std::to_string(i);}
  out += ",psi_err,x_err,gamma_sq,gram_min_eig,eta";
  for (Eigen::Index i = 0; i < pdim; ++i) {out += ",p_hat_" + std::to_string(i);}
  for (Eigen::Index i = 0; i < n; ++i) {out += ",x_hat_" + std::to_string(i);}
  out += "\n";

  for (const TraceRecord & rec : trace) {
    if (rec.y.size() != q || rec.u.size() != m) {
      throw std::invalid_argument("csv_string: inconsistent y/u dimensions across records");
    }
    out += std::to_string(rec.t);
    for (Eigen::Index i = 0; i < q; ++i) {out += "," + detail::format_double(rec.y(i));}
    for (Eigen::Index i = 0; i < m; ++i) {out += "," + detail::format_double(rec.u(i));}
    out += "," + detail::format_double(rec.psi_err_norm);
    out += "," + detail::format_double(rec.x_err_norm);
    out += "," + detail::format_double(rec.gamma_sq);
    out += "," + detail::format_double(rec.gram_min_eig);
    out += "," + std::to_string(rec.eta);
    if (full_dump) {
      if (rec.p_hat.size() != pdim || rec.x_hat.size() != n) {
        throw std::invalid_argument("csv_string: inconsistent dump dimensions across records");
      }
      for (Eigen::Index i = 0; i < pdim; ++i) {out += "," + detail::format_double(rec.p_hat(i));}
      for (Eigen::Index i = 0; i < n; ++i) {out += "," + detail::format_double(rec.x_hat(i));}
    }
    out += "\n";
  }
  return out;
}

inline void write_csv(
  const std::vector<TraceRecord> & trace, const std::string & path, bool full_dump = false)
{
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
  }
  file << csv_string(trace, full_dump);
  if (!file) {
    throw std::runtime_error("write_csv: write to '" + path + "' failed");
  }
}

/// Inverse of csv_string. Column layout is recovered from the header.
inline std::vector<TraceRecord> parse_csv(const std::string & text)
{
  std::istringstream stream(text);
  std::string line;
  if (!std::getline(stream, line)) {
    throw std::invalid_argument("parse_csv: missing header");
  }
  const std::vector<std::string> header = detail::split_csv_line(line);

  const auto count_prefixed = [&header](const std::string & prefix) {
      Eigen::Index count = 0;
      for (const std::string & name : header) {
        if (name.rfind(prefix, 0) == 0) {++count;}
      }
      return count;
    };
  const Eigen::Index q = count_prefixed("y_");
  const Eigen::Index m = count_prefixed("u_");
  const Eigen::Index pdim = count_prefixed("p_hat_");
  const Eigen::Index n = count_prefixed("x_hat_");
  const size_t expected = 6 + static_cast<size_t>(q + m + pdim + n);
  if (header.size() != expected || header.front() != "t") {
    throw std::invalid_argument("parse_csv: unrecognized header layout");
  }

  std::vector<TraceRecord> trace;
  while (std::getline(stream, line)) {
    if (line.empty()) {continue;}
    const std::vector<std::string> fields = detail::split_csv_line(line);
    if (fields.size() != expected) {
      throw std::invalid_argument("parse_csv: row has wrong field count");
    }
    TraceRecord rec;
    size_t k = 0;
    rec.t = std::stol(fields[k++]);
    rec.y.resize(q);
    for (Eigen::Index i = 0; i < q; ++i) {rec.y(i) = detail::parse_double(fields[k++], "y");}
    rec.u.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {rec.u(i) = detail::parse_double(fields[k++], "u");}
    rec.psi_err_norm = detail::parse_double(fields[k++], "psi_err");
    rec.x_err_norm = detail::parse_double(fields[k++], "x_err");
    rec.gamma_sq = detail::parse_double(fields[k++], "gamma_sq");
    rec.gram_min_eig = detail::parse_double(fields[k++], "gram_min_eig");
    rec.eta = static_cast<int>(std::stol(fields[k++]));
    rec.p_hat.resize(pdim);
    for (Eigen::Index i = 0; i < pdim; ++i) {
      rec.p_hat(i) = detail::parse_double(fields[k++], "p_hat");
    }
    rec.x_hat.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {rec.x_hat(i) = detail::parse_double(fields[k++], "x_hat");}
    trace.push_back(std::move(rec));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Decay fitting
// ---------------------------------------------------------------------------

struct DecayFit
{
  double rate = 1.0;       ///< exp(slope) of the log-linear fit, clamped to (0,1]
  double r_squared = 0.0;
  long points = 0;
};

/// Least-squares log-linear fit of psi_err over records with t >= from_step
/// and psi_err inside [lo, hi]. Fewer than two usable points leave the
/// defaults (rate 1, r_squared 0).
inline DecayFit fit_log_decay(
  const std::vector<TraceRecord> & trace, long from_step, double lo, double hi)
{
  std::vector<double> ts;
  std::vector<double> logs;
  for (const TraceRecord & rec : trace) {
    if (rec.t < from_step || !(rec.psi_err_norm > 0.0)) {continue;}
    if (rec.psi_err_norm < lo || rec.psi_err_norm > hi) {continue;}
    ts.push_back(static_cast<double>(rec.t));
    logs.push_back(std::log(rec.psi_err_norm));
  }
  DecayFit fit;
  fit.points = static_cast<long>(ts.size());
  if (fit.points < 2) {
    return fit;
  }
  const double count = static_cast<double>(fit.points);
  double mean_t = 0.0;
  double mean_l = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    mean_t += ts[i];
    mean_l += logs[i];
  }
  mean_t /= count;
  mean_l /= count;
  double stt = 0.0;
  double stl = 0.0;
  double sll = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    const double dt = ts[i] - mean_t;
    const double dl = logs[i] - mean_l;
    stt += dt * dt;
    stl += dt * dl;
    sll += dl * dl;
  }
  if (stt == 0.0) {
    return fit;
  }
  const double slope = stl / stt;
  const double ss_res = sll - slope * stl;
  fit.rate = std::min(std::exp(slope), 1.0);
  fit.r_squared = sll > 0.0 ? std::max(0.0, 1.0 - ss_res / sll) : 1.0;
  return fit;
}

}  // namespace ieobs

#endif  // IEOBS_TRACE_HPP_
