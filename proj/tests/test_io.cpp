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

#include <doctest.h>

#include <sstream>

#include "liouvep/io.hpp"
#include "liouvep/models.hpp"
#include "test_util.hpp"

using namespace liouvep;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::size_t count_fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("format_real round-trips") {
  for (double x : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02e23, -1e-300})
    CHECK(std::stod(io::format_real(x)) == x);
  CHECK(io::format_real(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(io::format_real(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("presets") {
  const LindbladModel m = io::preset_model("example2", 1.5, 0.3);
  CHECK(testutil::max_abs_diff(m.hamiltonian(), 0.75 * sigma_x()) == 0.0);
  CHECK(m.channels().at(0).rate == 0.3);
  CHECK_THROWS_AS(io::preset_model("example3", 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(io::preset_model("example1", -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(io::preset_model("example1", 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("model json round trip and formats") {
  const LindbladModel m = models::example1_model({1.0, 0.5, 1.0});
  const LindbladModel back = io::model_from_json(io::model_to_json(m));
  CHECK(testutil::max_abs_diff(back.hamiltonian(), m.hamiltonian()) == 0.0);
  CHECK(testutil::max_abs_diff(back.channels()[0].op, m.channels()[0].op) == 0.0);

  const auto j = io::Json::parse(R"({
    "dim": 2,
    "hamiltonian": [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
    "channels": [{"operator": "sm", "rate": 2.0, "q": 0.5}]
  })");
  const LindbladModel nested = io::model_from_json(j);
  CHECK(testutil::max_abs_diff(nested.hamiltonian(), 0.5 * sigma_z()) == 0.0);
  CHECK(nested.channels()[0].jump_weight == 0.5);
  CHECK(testutil::max_abs_diff(nested.channels()[0].op, sigma_minus()) == 0.0);

  const LindbladModel preset = io::model_from_json(
      io::Json::parse(R"({"preset": "example2", "omega": 2.0, "gamma": 1.0})"));
  CHECK(testutil::max_abs_diff(preset.hamiltonian(), sigma_x()) == 0.0);

  CHECK_THROWS_AS(io::model_from_json(io::Json::parse(R"({"dim": 2, "hamiltonian": [1, 2, 3]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(io::model_from_json(io::Json::parse(R"([1])")), std::invalid_argument);
  CHECK_THROWS_AS(io::model_from_json(io::Json::parse(
                      R"({"dim": 2, "hamiltonian": [0,0,0,0], "channels": [{"operator": "zz", "rate": 1}]})")),
                  std::invalid_argument);

  const LindbladModel scaled = io::scale_rates(m, 3.0);
  CHECK(scaled.channels()[0].rate == 1.5);
}

TEST_CASE("csv schemas") {
  std::vector<double> grid = {0.5, 1.0, 1.5};
  const BranchTrack track =
      sweep([](double g) { return models::example1_model({1.0, g, 1.0}); }, grid, 1.0);
  std::ostringstream sweep_csv;
  io::write_sweep_csv(sweep_csv, track);
  auto rows = lines(sweep_csv.str());
  CHECK(rows.front() == "param,q,branch,re_lambda,im_lambda,residual");
  CHECK(rows.size() == 1 + 3 * 4);
  for (const auto& r : rows) CHECK(count_fields(r) == 6);

  const EvolutionResult ev = propagate(liouvillian(models::example1_model({1.0, 0.5, 1.0})),
                                       0.5 * ComplexMatrix::Identity(2, 2), {0.0, 1.0});
  std::ostringstream ev_csv;
  io::write_evolution_csv(ev_csv, ev);
  rows = lines(ev_csv.str());
  CHECK(rows.front() == "t,sx,sy,sz,raw_trace");
  CHECK(rows.size() == 3);
  for (const auto& r : rows) CHECK(count_fields(r) == 5);

  traj::EnsembleStats st;
  st.times = {1.0};
  st.observables = {"sx"};
  st.mean = {{0.25}};
  st.sem = {{std::numeric_limits<double>::quiet_NaN()}};
  st.n_accepted = {1};
  st.n_total = 3;
  std::ostringstream tr_csv;
  io::write_trajectory_csv(tr_csv, st);
  CHECK(tr_csv.str() == "t,obs,mean,sem,n_accepted,n_total\n1,sx,0.25,nan,1,3\n");

  traj::TrajectoryRecord rec;
  rec.id = 7;
  rec.jump_events = {{0.5, 0, 2, true}};
  std::ostringstream ev_log;
  io::write_event_log_csv(ev_log, {rec});
  CHECK(ev_log.str() == "traj_id,t_jump,channel,detector\n7,0.5,0,2\n");
}

TEST_CASE("ep report and manifest json") {
  EpEstimate e;
  e.found = true;
  e.parameter_value = 2.0;
  e.eigenvalue_at_ep = Complex(-2.0, 0.0);
  e.order = 2;
  e.coalescing_branches = {1, 2};
  const io::Json j = io::ep_report(e);
  for (const char* key : {"param_value", "eigenvalue", "order", "gap", "overlap", "branches", "found"})
    CHECK(j.contains(key));
  CHECK(j["eigenvalue"].size() == 2);
  CHECK(io::ep_report(EpEstimate{})["found"] == false);

  io::RunManifest m;
  m.tool_version = "1";
  m.command = "trajectories";
  m.argv = {"trajectories", "--seed", "3"};
  m.master_seed = 3;
  m.has_acceptance = true;
  m.accepted = 4;
  m.total = 9;
  const io::RunManifest back = io::manifest_from_json(io::to_json(m));
  CHECK(back.argv == m.argv);
  CHECK(back.accepted == 4);
  CHECK(back.total == 9);
  CHECK(back.master_seed == 3);
  CHECK(io::utc_timestamp().size() == 20);
}
