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

#include "liouvep/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "liouvep/evolve.hpp"
#include "liouvep/io.hpp"
#include "liouvep/models.hpp"
#include "liouvep/spectra.hpp"
#include "liouvep/trajectories.hpp"

namespace liouvep::cli {

namespace {

namespace fs = std::filesystem;
using Json = io::Json;

struct Options {
  std::string model = "example1";
  double omega = 1.0;
  double gamma = 0.5;
  double q = 1.0;
  std::optional<double> eta;
  double theta = 0.0;
  double phi = 0.0;
  std::size_t n_traj = 1000;
  std::uint64_t seed = 0;
  double dt = 0.0;
  double t_max = 5.0;
  std::size_t samples = 50;
  double sweep_min = 0.0;
  double sweep_max = 3.0;
  std::size_t sweep_steps = 301;
  std::string out;
  bool plot = false;
  bool events = false;
  unsigned threads = 1;
  std::string example = "all";
  std::string manifest;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- model handling ----

ModelFamily make_family(const Options& o) {
  if (io::is_preset(o.model)) {
    const std::string name = o.model;
    const double omega = o.omega;
    return [name, omega](double g) { return io::preset_model(name, omega, g); };
  }
  std::ifstream in(o.model);
  if (!in) throw InputError("cannot open model file '" + o.model + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("model file '" + o.model + "': " + e.what());
  }
  const LindbladModel base = io::model_from_json(j);
  return [base](double scale) { return io::scale_rates(base, scale); };
}

Json model_parameters(const Options& o) {
  Json j;
  j["model"] = o.model;
  j["omega"] = o.omega;
  j["gamma"] = o.gamma;
  j["q"] = o.q;
  return j;
}

// ---- output plumbing ----

fs::path output_dir(const Options& o) {
  fs::path dir = ".";
  if (!o.out.empty())
    dir = o.out;
  else if (const char* env = std::getenv(kOutputDirEnv); env && *env)
    dir = env;
  fs::create_directories(dir);
  return dir;
}

template <typename Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  writer(os);
  if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const Json& j) {
  write_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal line chart. Non-finite points break the line.
void write_svg(const fs::path& path, const std::string& title, const std::string& xlabel,
               const std::vector<Series>& series) {
  constexpr double W = 720, H = 440, L = 70, R = 150, T = 40, B = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.x.size(); ++k)
      if (std::isfinite(s.x[k]) && std::isfinite(s.y[k])) {
        x0 = std::min(x0, s.x[k]);
        x1 = std::max(x1, s.x[k]);
        y0 = std::min(y0, s.y[k]);
        y1 = std::max(y1, s.y[k]);
      }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  write_file(path, [&](std::ostream& os) {
    os << std::setprecision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title
       << "</text>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
       << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
      const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
      os << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">"
         << xv << "</text>\n";
      os << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << yv
         << "</text>\n";
    }
    os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">"
       << xlabel << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
      const auto& s = series[i];
      const char* c = colors[i % 8];
      std::ostringstream d;
      d << std::setprecision(6);
      bool pen = false;
      for (std::size_t k = 0; k < s.x.size(); ++k) {
        if (!std::isfinite(s.x[k]) || !std::isfinite(s.y[k])) {
          pen = false;
          continue;
        }
        d << (pen ? " L" : " M") << px(s.x[k]) << ' ' << py(s.y[k]);
        pen = true;
      }
      os << "<path d=\"" << d.str() << "\" fill=\"none\" stroke=\"" << c
         << "\" stroke-width=\"1.5\"/>\n";
      os << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 16 * (i + 1) << "\" fill=\"" << c
         << "\">" << s.label << "</text>\n";
    }
    os << "</svg>\n";
  });
}

struct Manifest {
  io::RunManifest m;
  fs::path dir;

  Manifest(const std::string& command, const std::vector<std::string>& args, const fs::path& d)
      : dir(d) {
    m.tool_version = LIOUVEP_VERSION;
    m.command = command;
    m.argv = args;
    m.started_at = io::utc_timestamp();
  }
  void add_output(const std::string& name) { m.output_files.push_back(name); }
  std::string write() {
    m.finished_at = io::utc_timestamp();
    const std::string name = m.command + "_manifest.json";
    write_json(dir / name, io::to_json(m));
    return name;
  }
};

std::vector<double> uniform_times(double t_max, std::size_t samples) {
  if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw InputError("--t-max must be nonnegative");
  if (t_max == 0.0 || samples == 0) return {0.0};
  std::vector<double> times;
  for (std::size_t k = 0; k <= samples; ++k)
    times.push_back(t_max * static_cast<double>(k) / static_cast<double>(samples));
  return times;
}

void report_outputs(std::ostream& out, const fs::path& dir, const std::vector<std::string>& files) {
  for (const auto& f : files) out << "wrote " << (dir / f).string() << '\n';
}

// ---- commands ----

int cmd_spectrum(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  if (o.sweep_steps == 0) throw InputError("--sweep-steps must be at least 1");
  if (o.sweep_steps > 1 && !(o.sweep_max > o.sweep_min))
    throw InputError("--sweep-max must exceed --sweep-min");
  std::vector<double> grid;
  for (std::size_t k = 0; k < o.sweep_steps; ++k)
    grid.push_back(o.sweep_steps == 1
                       ? o.sweep_min
                       : o.sweep_min + (o.sweep_max - o.sweep_min) * static_cast<double>(k) /
                                           static_cast<double>(o.sweep_steps - 1));
  const ModelFamily family = make_family(o);
  const BranchTrack track = sweep(family, grid, o.q);

  const fs::path dir = output_dir(o);
  Manifest man("spectrum", args, dir);
  man.m.parameters = model_parameters(o);
  man.m.parameters["sweep_min"] = o.sweep_min;
  man.m.parameters["sweep_max"] = o.sweep_max;
  man.m.parameters["sweep_steps"] = o.sweep_steps;
  man.m.parameters["optimal_match_points"] = track.optimal_match_points;
  write_file(dir / "spectrum.csv", [&](std::ostream& os) { io::write_sweep_csv(os, track); });
  man.add_output("spectrum.csv");
  if (o.plot) {
    std::vector<Series> re, im;
    for (std::size_t b = 0; b < track.eigenvalues.size(); ++b) {
      Series sr{"branch " + std::to_string(b), grid, {}}, si = sr;
      for (const auto& l : track.eigenvalues[b]) {
        sr.y.push_back(l.real());
        si.y.push_back(l.imag());
      }
      re.push_back(std::move(sr));
      im.push_back(std::move(si));
    }
    write_svg(dir / "spectrum_re.svg", "Re eigenvalues (q = " + io::format_real(o.q) + ")",
              "rate", re);
    write_svg(dir / "spectrum_im.svg", "Im eigenvalues (q = " + io::format_real(o.q) + ")",
              "rate", im);
    man.add_output("spectrum_re.svg");
    man.add_output("spectrum_im.svg");
  }
  const std::string mname = man.write();
  report_outputs(out, dir, man.m.output_files);
  report_outputs(out, dir, {mname});
  return 0;
}

int cmd_ep(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  if (!(o.sweep_max > o.sweep_min)) throw InputError("--sweep-max must exceed --sweep-min");
  const ModelFamily family = make_family(o);
  const EpEstimate est = locate_ep(family, o.q, {o.sweep_min, o.sweep_max});
  Json report = io::ep_report(est);
  report["q"] = o.q;
  report["bracket"] = {o.sweep_min, o.sweep_max};

  const fs::path dir = output_dir(o);
  Manifest man("ep", args, dir);
  man.m.parameters = model_parameters(o);
  man.m.parameters["bracket"] = {o.sweep_min, o.sweep_max};
  write_json(dir / "ep.json", report);
  man.add_output("ep.json");
  const std::string mname = man.write();
  out << report.dump(2) << '\n';
  report_outputs(out, dir, {"ep.json", mname});
  return 0;
}

int cmd_evolve(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const LindbladModel model = make_family(o)(o.gamma);
  if (model.dim() != 2) throw InputError("evolve reports Pauli expectations; qubit models only");
  const auto times = uniform_times(o.t_max, o.samples);
  const ComplexMatrix rho0 = projector(qubit_state({o.theta, o.phi}));
  const EvolutionResult res = propagate(hybrid_liouvillian(model, o.q), rho0, times);

  const fs::path dir = output_dir(o);
  Manifest man("evolve", args, dir);
  man.m.parameters = model_parameters(o);
  man.m.parameters["theta"] = o.theta;
  man.m.parameters["phi"] = o.phi;
  man.m.parameters["t_max"] = o.t_max;
  man.m.parameters["samples"] = o.samples;
  write_file(dir / "evolution.csv", [&](std::ostream& os) { io::write_evolution_csv(os, res); });
  man.add_output("evolution.csv");
  if (o.plot) {
    std::vector<Series> s = {{"sx", times, {}}, {"sy", times, {}}, {"sz", times, {}}};
    for (const auto& rho : res.states) {
      s[0].y.push_back(expectation(rho, sigma_x()));
      s[1].y.push_back(expectation(rho, sigma_y()));
      s[2].y.push_back(expectation(rho, sigma_z()));
    }
    write_svg(dir / "evolution.svg", "Pauli expectations (q = " + io::format_real(o.q) + ")", "t",
              s);
    man.add_output("evolution.svg");
  }
  const std::string mname = man.write();
  report_outputs(out, dir, man.m.output_files);
  report_outputs(out, dir, {mname});
  return 0;
}

int cmd_trajectories(const Options& o, const std::vector<std::string>& args, std::ostream& out,
                     std::ostream& err) {
  const LindbladModel model = make_family(o)(o.gamma);
  if (model.dim() != 2) throw InputError("trajectories reports Pauli expectations; qubit models only");
  if (o.n_traj == 0) throw InputError("--n-traj must be positive");
  if (!(o.t_max > 0.0)) throw InputError("--t-max must be positive");
  traj::DetectorSetup setup = traj::TwoDetector{o.q};
  if (o.eta) setup = traj::Inefficient{*o.eta};
  if (o.eta ? !(*o.eta >= 0.0 && *o.eta <= 1.0) : !(o.q >= 0.0 && o.q <= 1.0))
    throw InputError("trajectories need q in [0, 1] and eta in [0, 1]");

  traj::TrajectoryConfig cfg;
  cfg.dt = o.dt > 0.0 ? o.dt : traj::default_dt(model, o.omega);
  cfg.t_max = o.t_max;
  cfg.n_traj = o.n_traj;
  cfg.master_seed = o.seed;
  cfg.sample_times = uniform_times(o.t_max, o.samples);
  cfg.threads = o.threads;
  const ComplexVector psi0 = qubit_state({o.theta, o.phi});
  const traj::EnsembleResult res =
      traj::run_ensemble(model, setup, cfg, psi0, traj::pauli_observables());

  const fs::path dir = output_dir(o);
  Manifest man("trajectories", args, dir);
  man.m.parameters = model_parameters(o);
  if (o.eta) man.m.parameters["eta"] = *o.eta;
  man.m.parameters["setup"] = traj::describe(setup);
  man.m.parameters["theta"] = o.theta;
  man.m.parameters["phi"] = o.phi;
  man.m.parameters["n_traj"] = o.n_traj;
  man.m.parameters["dt"] = res.effective_dt;
  man.m.parameters["dt_requested"] = cfg.dt;
  man.m.parameters["t_max"] = o.t_max;
  man.m.parameters["samples"] = o.samples;
  man.m.master_seed = o.seed;
  man.m.has_acceptance = true;
  man.m.accepted = res.n_accepted;
  man.m.total = res.records.size();
  write_file(dir / "trajectories.csv",
             [&](std::ostream& os) { io::write_trajectory_csv(os, res.stats); });
  man.add_output("trajectories.csv");
  if (o.events) {
    write_file(dir / "events.csv",
               [&](std::ostream& os) { io::write_event_log_csv(os, res.records); });
    man.add_output("events.csv");
  }
  if (o.plot) {
    std::vector<Series> s;
    for (std::size_t k = 0; k < res.stats.observables.size(); ++k)
      s.push_back({res.stats.observables[k], res.stats.times, res.stats.mean[k]});
    write_svg(dir / "trajectories.svg", "Postselected ensemble, " + traj::describe(setup), "t", s);
    man.add_output("trajectories.svg");
  }
  const std::string mname = man.write();
  if (res.empty_postselection)
    err << "warning: postselection kept none of " << res.records.size()
        << " trajectories at t_max\n";
  out << "accepted " << res.n_accepted << " of " << res.records.size() << " at t_max (dt "
      << io::format_real(res.effective_dt) << ")\n";
  report_outputs(out, dir, man.m.output_files);
  report_outputs(out, dir, {mname});
  return 0;
}

int cmd_verify(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const VerifyReport report = verify(o.example, o.samples, o.seed);
  const fs::path dir = output_dir(o);
  Manifest man("verify", args, dir);
  man.m.parameters = {{"example", o.example}, {"samples", o.samples}};
  man.m.master_seed = o.seed;
  write_json(dir / "verify.json", {{"checks", report.checks}, {"failures", report.failures}});
  write_json(dir / "deviations.json", report.deviations);
  man.add_output("verify.json");
  man.add_output("deviations.json");
  const std::string mname = man.write();
  for (const auto& c : report.checks)
    out << (c["pass"].get<bool>()                  ? "PASS "
            : c.value("counts_as_failure", true) ? "FAIL "
                                                 : "LOGGED ")
        << c["example"].get<std::string>() << ' '
        << c["name"].get<std::string>() << " worst=" << io::format_real(c["worst"].get<double>())
        << " tol=" << io::format_real(c["tol"].get<double>()) << '\n';
  out << report.deviations.size() << " printed-formula deviations logged\n";
  report_outputs(out, dir, {"verify.json", "deviations.json", mname});
  return report.failures == 0 ? 0 : 1;
}

void add_model_flags(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model, "example1, example2 or a model JSON file")
      ->capture_default_str();
  sub->add_option("--omega", o.omega, "frequency scale")->capture_default_str();
  sub->add_option("--gamma", o.gamma, "decay rate (rate multiplier for JSON models)")
      ->capture_default_str();
  sub->add_option("--q", o.q, "hybrid parameter / detector-1 fraction")->capture_default_str();
  sub->add_option("--out", o.out, "output directory");
  sub->add_flag("--plot", o.plot, "also write SVG plots");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Liouvillian spectra, exceptional points and postselected quantum trajectories",
               "liouvep"};
  app.set_version_flag("--version", std::string(LIOUVEP_VERSION));
  app.require_subcommand(1);

  auto* spectrum = app.add_subcommand("spectrum", "branch-tracked spectrum over a rate sweep");
  add_model_flags(spectrum, o);
  auto* ep = app.add_subcommand("ep", "locate an exceptional point inside a rate bracket");
  add_model_flags(ep, o);
  for (auto* sub : {spectrum, ep}) {
    sub->add_option("--sweep-min", o.sweep_min)->capture_default_str();
    sub->add_option("--sweep-max", o.sweep_max)->capture_default_str();
  }
  spectrum->add_option("--sweep-steps", o.sweep_steps)->capture_default_str();

  auto* evolve = app.add_subcommand("evolve", "renormalized hybrid evolution of a qubit state");
  add_model_flags(evolve, o);
  auto* trajectories = app.add_subcommand("trajectories", "postselected quantum-jump ensemble");
  add_model_flags(trajectories, o);
  for (auto* sub : {evolve, trajectories}) {
    sub->add_option("--theta", o.theta, "Bloch polar angle of the initial state");
    sub->add_option("--phi", o.phi, "Bloch azimuth of the initial state");
    sub->add_option("--t-max", o.t_max)->capture_default_str();
    sub->add_option("--samples", o.samples, "number of output intervals")->capture_default_str();
  }
  trajectories->add_option("--eta", o.eta, "detector efficiency (selects the single-detector setup)");
  trajectories->add_option("--n-traj", o.n_traj)->capture_default_str();
  trajectories->add_option("--seed", o.seed)->capture_default_str();
  trajectories->add_option("--dt", o.dt, "step bound (default 1e-3 * 2pi / omega)");
  trajectories->add_option("--threads", o.threads, "worker threads, 0 for all cores")
      ->capture_default_str();
  trajectories->add_flag("--events", o.events, "also write the raw jump log");

  auto* verify_cmd = app.add_subcommand("verify", "cross-check closed forms against numerics");
  verify_cmd->add_option("--example", o.example, "example1, example2 or all")
      ->capture_default_str();
  verify_cmd->add_option("--samples", o.samples, "random parameter samples")->capture_default_str();
  verify_cmd->add_option("--seed", o.seed)->capture_default_str();
  verify_cmd->add_option("--out", o.out, "output directory");

  auto* replay = app.add_subcommand("replay", "rerun the command recorded in a manifest");
  replay->add_option("manifest", o.manifest)->required();
  replay->add_option("--out", o.out, "output directory (default: the recorded one)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*spectrum) return cmd_spectrum(o, args, out);
    if (*ep) return cmd_ep(o, args, out);
    if (*evolve) return cmd_evolve(o, args, out);
    if (*trajectories) return cmd_trajectories(o, args, out, err);
    if (*verify_cmd) return cmd_verify(o, args, out);
    if (*replay) {
      std::ifstream in(o.manifest);
      if (!in) throw InputError("cannot open manifest '" + o.manifest + "'");
      const io::RunManifest m = io::manifest_from_json(Json::parse(in));
      std::vector<std::string> again = m.argv;
      if (!o.out.empty()) {
        auto it = std::find(again.begin(), again.end(), "--out");
        if (it != again.end() && it + 1 != again.end())
          *(it + 1) = o.out;
        else {
          again.push_back("--out");
          again.push_back(o.out);
        }
      }
      if (!again.empty() && again.front() == "replay")
        throw InputError("manifest records a replay; refusing to recurse");
      return run(again, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace liouvep::cli
