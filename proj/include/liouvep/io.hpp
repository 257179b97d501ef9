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

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "liouvep/evolve.hpp"
#include "liouvep/spectra.hpp"
#include "liouvep/trajectories.hpp"

// Serialization of models and results. CSV column orders are fixed:
//   sweep       param,q,branch,re_lambda,im_lambda,residual
//   evolution   t,sx,sy,sz,raw_trace
//   trajectory  t,obs,mean,sem,n_accepted,n_total
//   events      traj_id,t_jump,channel,detector
namespace liouvep::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSweepHeader = "param,q,branch,re_lambda,im_lambda,residual";
inline constexpr const char* kEvolutionHeader = "t,sx,sy,sz,raw_trace";
inline constexpr const char* kTrajectoryHeader = "t,obs,mean,sem,n_accepted,n_total";
inline constexpr const char* kEventHeader = "traj_id,t_jump,channel,detector";

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite.
std::string format_real(double x);

/// Named presets: "example1" (sigma_z splitting, sigma_x decay) and
/// "example2" (sigma_x drive, sigma_minus decay).
LindbladModel preset_model(const std::string& name, double omega, double gamma);
bool is_preset(const std::string& name);

/// Accepts either {"preset": name, "omega": w, "gamma": g} or
/// {"dim": d, "hamiltonian": [[re,im], ...], "channels": [{"operator", "rate", "q"}]}.
/// Matrices are row-major lists of d*d [re,im] pairs; nested rows are also
/// accepted. An operator may be a matrix or one of sx, sy, sz, sm, sp.
/// The per-channel "q" is the jump weight (default 1).
/// Throws std::invalid_argument on malformed input.
LindbladModel model_from_json(const Json& j);
Json model_to_json(const LindbladModel& model);

/// Scales every channel rate by factor.
LindbladModel scale_rates(const LindbladModel& model, double factor);

void write_sweep_csv(std::ostream& os, const BranchTrack& track);
Json ep_report(const EpEstimate& ep);
/// Qubit only; throws std::invalid_argument for other dimensions.
void write_evolution_csv(std::ostream& os, const EvolutionResult& result);
void write_trajectory_csv(std::ostream& os, const traj::EnsembleStats& stats);
void write_event_log_csv(std::ostream& os, const std::vector<traj::TrajectoryRecord>& records);

struct RunManifest {
  std::string tool_version;
  std::string command;
  std::vector<std::string> argv;  // enough to replay the run
  Json parameters = Json::object();
  std::uint64_t master_seed = 0;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> output_files;
  bool has_acceptance = false;
  std::size_t accepted = 0;
  std::size_t total = 0;
};

Json to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

/// UTC time in ISO 8601.
std::string utc_timestamp();

}  // namespace liouvep::io
