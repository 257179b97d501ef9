// Copyright 2026 The liouvep Authors
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

#include "liouvep/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <ostream>
#include <stdexcept>

#include "liouvep/models.hpp"

namespace liouvep::io {

namespace {

Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("model json: expected a number or [re, im], got " + j.dump());
}

ComplexMatrix parse_matrix(const Json& j, Eigen::Index d) {
  if (!j.is_array()) throw std::invalid_argument("model json: matrix must be an array");
  ComplexMatrix m(d, d);
  const auto n = static_cast<std::size_t>(d);
  if (j.size() == n * n) {
    for (std::size_t k = 0; k < n * n; ++k)
      m(static_cast<Eigen::Index>(k / n), static_cast<Eigen::Index>(k % n)) = parse_complex(j[k]);
    return m;
  }
  if (j.size() == n) {
    for (std::size_t r = 0; r < n; ++r) {
      if (!j[r].is_array() || j[r].size() != n)
        throw std::invalid_argument("model json: matrix row has wrong length");
      for (std::size_t c = 0; c < n; ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = parse_complex(j[r][c]);
    }
    return m;
  }
  throw std::invalid_argument("model json: matrix has " + std::to_string(j.size()) +
                              " entries, expected " + std::to_string(n * n));
}

ComplexMatrix named_operator(const std::string& name) {
  if (name == "sx") return sigma_x();
  if (name == "sy") return sigma_y();
  if (name == "sz") return sigma_z();
  if (name == "sm") return sigma_minus();
  if (name == "sp") return sigma_plus();
  throw std::invalid_argument("model json: unknown operator name '" + name + "'");
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back({m(r, c).real(), m(r, c).imag()});
  return out;
}

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

bool is_preset(const std::string& name) { return name == "example1" || name == "example2"; }

LindbladModel preset_model(const std::string& name, double omega, double gamma) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("preset: omega must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("preset: gamma must be nonnegative");
  if (name == "example1") return models::example1_model({omega, gamma, 1.0});
  if (name == "example2") return models::example2_model({omega, gamma, 1.0});
  throw std::invalid_argument("unknown preset '" + name + "'");
}

LindbladModel model_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("model json: top level must be an object");
  try {
    if (j.contains("preset"))
      return preset_model(j.at("preset").get<std::string>(), j.value("omega", 1.0),
                          j.value("gamma", 0.0));
    const auto d = j.at("dim").get<Eigen::Index>();
    if (d < 1) throw std::invalid_argument("model json: dim must be positive");
    ComplexMatrix h = parse_matrix(j.at("hamiltonian"), d);
    std::vector<JumpChannel> channels;
    for (const auto& c : j.value("channels", Json::array())) {
      JumpChannel ch;
      const auto& op = c.at("operator");
      ch.op = op.is_string() ? named_operator(op.get<std::string>()) : parse_matrix(op, d);
      ch.rate = c.at("rate").get<double>();
      ch.jump_weight = c.value("q", 1.0);
      channels.push_back(std::move(ch));
    }
    return LindbladModel(std::move(h), std::move(channels));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model json: ") + e.what());
  }
}

Json model_to_json(const LindbladModel& model) {
  Json j;
  j["dim"] = model.dim();
  j["hamiltonian"] = matrix_to_json(model.hamiltonian());
  j["channels"] = Json::array();
  for (const auto& ch : model.channels())
    j["channels"].push_back(
        {{"operator", matrix_to_json(ch.op)}, {"rate", ch.rate}, {"q", ch.jump_weight}});
  return j;
}

LindbladModel scale_rates(const LindbladModel& model, double factor) {
  auto channels = model.channels();
  for (auto& ch : channels) ch.rate *= factor;
  return LindbladModel(model.hamiltonian(), std::move(channels));
}

void write_sweep_csv(std::ostream& os, const BranchTrack& track) {
  os << kSweepHeader << '\n';
  for (std::size_t k = 0; k < track.parameter_grid.size(); ++k)
    for (std::size_t b = 0; b < track.eigenvalues.size(); ++b) {
      const Complex l = track.eigenvalues[b][k];
      os << format_real(track.parameter_grid[k]) << ',' << format_real(track.q) << ',' << b << ','
         << format_real(l.real()) << ',' << format_real(l.imag()) << ','
         << format_real(track.residuals[b][k]) << '\n';
    }
}

Json ep_report(const EpEstimate& ep) {
  Json j;
  j["found"] = ep.found;
  if (ep.found) {
    j["param_value"] = ep.parameter_value;
    j["eigenvalue"] = {ep.eigenvalue_at_ep.real(), ep.eigenvalue_at_ep.imag()};
    j["order"] = ep.order;
    j["gap"] = ep.gap_at_ep;
    j["overlap"] = ep.overlap_at_ep;
    j["branches"] = ep.coalescing_branches;
  } else {
    j["param_value"] = nullptr;
    j["eigenvalue"] = nullptr;
    j["order"] = nullptr;
    j["gap"] = ep.gap_at_ep;
    j["overlap"] = ep.overlap_at_ep;
    j["branches"] = Json::array();
  }
  j["spectral_scale"] = ep.spectral_scale;
  return j;
}

void write_evolution_csv(std::ostream& os, const EvolutionResult& result) {
  os << kEvolutionHeader << '\n';
  for (std::size_t k = 0; k < result.times.size(); ++k) {
    const ComplexMatrix& rho = result.states[k];
    if (rho.rows() != 2) throw std::invalid_argument("evolution csv: qubit states only");
    os << format_real(result.times[k]) << ',' << format_real(expectation(rho, sigma_x())) << ','
       << format_real(expectation(rho, sigma_y())) << ','
       << format_real(expectation(rho, sigma_z())) << ',' << format_real(result.raw_traces[k])
       << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const traj::EnsembleStats& stats) {
  os << kTrajectoryHeader << '\n';
  for (std::size_t k = 0; k < stats.times.size(); ++k)
    for (std::size_t o = 0; o < stats.observables.size(); ++o)
      os << format_real(stats.times[k]) << ',' << stats.observables[o] << ','
         << format_real(stats.mean[o][k]) << ',' << format_real(stats.sem[o][k]) << ','
         << stats.n_accepted[k] << ',' << stats.n_total << '\n';
}

void write_event_log_csv(std::ostream& os, const std::vector<traj::TrajectoryRecord>& records) {
  os << kEventHeader << '\n';
  for (const auto& rec : records)
    for (const auto& ev : rec.jump_events)
      os << rec.id << ',' << format_real(ev.time) << ',' << ev.channel << ',' << ev.detector
         << '\n';
}

Json to_json(const RunManifest& m) {
  Json j;
  j["tool_version"] = m.tool_version;
  j["command"] = m.command;
  j["argv"] = m.argv;
  j["parameters"] = m.parameters;
  j["seed"] = m.master_seed;
  j["timestamps"] = {{"started", m.started_at}, {"finished", m.finished_at}};
  j["output_files"] = m.output_files;
  if (m.has_acceptance) j["acceptance"] = {{"accepted", m.accepted}, {"total", m.total}};
  return j;
}

RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  try {
    m.tool_version = j.at("tool_version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.parameters = j.value("parameters", Json::object());
    m.master_seed = j.value("seed", std::uint64_t{0});
    m.output_files = j.value("output_files", std::vector<std::string>{});
    if (j.contains("acceptance")) {
      m.has_acceptance = true;
      m.accepted = j["acceptance"].at("accepted").get<std::size_t>();
      m.total = j["acceptance"].at("total").get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("manifest: ") + e.what());
  }
  return m;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace liouvep::io
