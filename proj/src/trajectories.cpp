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

#include "liouvep/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

namespace liouvep::traj {

namespace {

const Complex kI(0.0, 1.0);
constexpr double kNormFloor = 1e-14;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// A segment of the time grid: n_steps steps of length h ending at t_end.
struct Segment {
  double t_end;
  std::size_t n_steps;
  double h;
  bool is_sample;
};

std::vector<Segment> build_segments(const TrajectoryConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("trajectories: dt must be positive");
  if (!(cfg.t_max > 0.0)) throw std::invalid_argument("trajectories: t_max must be positive");
  std::vector<Segment> segs;
  double t = 0.0;
  for (std::size_t k = 0; k < cfg.sample_times.size(); ++k) {
    const double ts = cfg.sample_times[k];
    if (!(ts >= t) || ts > cfg.t_max)
      throw std::invalid_argument("trajectories: sample times must be sorted within [0, t_max]");
    const double span = ts - t;
    const std::size_t n = span > 0.0 ? static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-9)) : 0;
    segs.push_back({ts, n, n > 0 ? span / static_cast<double>(n) : 0.0, true});
    t = ts;
  }
  if (cfg.t_max > t) {
    const double span = cfg.t_max - t;
    const std::size_t n = static_cast<std::size_t>(std::ceil(span / cfg.dt - 1e-9));
    segs.push_back({cfg.t_max, n, span / static_cast<double>(n), false});
  }
  return segs;
}

TrajectoryRecord run_one(std::size_t id, const std::vector<Segment>& segs,
                         const std::map<double, StepKernel>& kernels, const ComplexVector& psi0,
                         std::uint64_t master_seed) {
  TrajectoryRecord rec;
  rec.id = id;
  UniformStream rng(stream_seed(master_seed, id));
  ComplexVector psi = psi0;
  double t = 0.0;
  for (const auto& seg : segs) {
    if (seg.n_steps > 0) {
      const StepKernel& kernel = kernels.at(seg.h);
      const double t_start = t;
      for (std::size_t j = 0; j < seg.n_steps; ++j) {
        const StepOutcome out = step(kernel, psi, rng.next());
        const double t_after =
            j + 1 == seg.n_steps ? seg.t_end : t_start + static_cast<double>(j + 1) * seg.h;
        if (out.jumped) {
          rec.jump_events.push_back({t_after, out.channel, out.detector, false});
          if (out.detector == 2)
            ++rec.n_jumps_detector2;
          else
            ++rec.n_jumps_detector1;
        }
      }
      t = seg.t_end;
    }
    if (seg.is_sample) rec.samples.push_back(psi);
  }
  rec.final_state = psi;
  return rec;
}

}  // namespace

double effective_q(const DetectorSetup& setup) {
  if (const auto* td = std::get_if<TwoDetector>(&setup)) return td->q;
  return 1.0 - std::get<Inefficient>(setup).eta;
}

std::string describe(const DetectorSetup& setup) {
  std::ostringstream os;
  os.precision(17);
  if (const auto* td = std::get_if<TwoDetector>(&setup))
    os << "two_detector(q=" << td->q << ")";
  else
    os << "inefficient(eta=" << std::get<Inefficient>(setup).eta << ")";
  return os.str();
}

std::vector<Observable> pauli_observables() {
  return {{"sx", sigma_x()}, {"sy", sigma_y()}, {"sz", sigma_z()}};
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index, std::string_view tag) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ index);
  if (!tag.empty()) s = splitmix64(s ^ fnv1a(tag));
  return s;
}

StepKernel make_step_kernel(const LindbladModel& model, const DetectorSetup& setup, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("make_step_kernel: dt must be positive");
  StepKernel k;
  k.dt = dt;
  k.nojump = expm(-kI * dt * effective_hamiltonian(model));
  const auto* td = std::get_if<TwoDetector>(&setup);
  if (td && !(td->q >= 0.0 && td->q <= 1.0))
    throw std::invalid_argument("TwoDetector: q must lie in [0, 1]");
  if (const auto* ie = std::get_if<Inefficient>(&setup); ie && !(ie->eta >= 0.0 && ie->eta <= 1.0))
    throw std::invalid_argument("Inefficient: eta must lie in [0, 1]");
  for (const auto& ch : model.channels()) {
    k.jumps.push_back(ch.jump_operator());
    double share = 1.0;
    if (td) {
      share = td->q * ch.jump_weight;
      if (share > 1.0)
        throw std::invalid_argument("TwoDetector: q * jump_weight exceeds 1 for a channel");
    }
    k.detector1_share.push_back(share);
  }
  return k;
}

StepOutcome step(const StepKernel& kernel, ComplexVector& psi, double draw) {
  const std::size_t n = kernel.jumps.size();
  // Candidate post-jump vectors are reused if the jump fires.
  std::vector<ComplexVector> images(n);
  std::vector<double> probs(n);
  double total = 0.0;
  for (std::size_t mu = 0; mu < n; ++mu) {
    images[mu] = kernel.jumps[mu] * psi;
    probs[mu] = images[mu].squaredNorm() * kernel.dt;
    total += probs[mu];
  }
  if (total > kMaxStepJumpProbability * (1.0 + 1e-12))
    throw std::runtime_error("step: jump probability " + std::to_string(total) +
                             " exceeds the per-step cap; reduce dt");

  StepOutcome out;
  double cum = 0.0;
  for (std::size_t mu = 0; mu < n && !out.jumped; ++mu) {
    const double p1 = probs[mu] * kernel.detector1_share[mu];
    const double p2 = probs[mu] - p1;
    if (draw < cum + p1) {
      out = {true, mu, 1};
    } else if (draw < cum + p1 + p2) {
      out = {true, mu, 2};
    }
    cum += probs[mu];
  }

  if (out.jumped) {
    const double nrm = images[out.channel].norm();
    if (nrm < kNormFloor) throw std::runtime_error("step: jump onto a vanishing state");
    psi = images[out.channel] / nrm;
  } else {
    psi = kernel.nojump * psi;
    const double nrm = psi.norm();
    if (nrm < kNormFloor) throw std::runtime_error("step: no-jump norm collapsed");
    psi /= nrm;
  }
  return out;
}

double max_step_probability(const LindbladModel& model, double dt) {
  const Eigen::Index d = model.dim();
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (const auto& ch : model.channels()) {
    const ComplexMatrix g = ch.jump_operator();
    total += g.adjoint() * g;
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(total, Eigen::EigenvaluesOnly);
  return std::max(0.0, es.eigenvalues().maxCoeff()) * dt;
}

double default_dt(const LindbladModel& model, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("default_dt: omega must be positive");
  double dt = 1e-3 * 2.0 * M_PI / omega;
  while (max_step_probability(model, dt) > kMaxStepJumpProbability) dt *= 0.5;
  return dt;
}

std::vector<TrajectoryRecord> simulate(const LindbladModel& model, const DetectorSetup& setup,
                                       const TrajectoryConfig& cfg, const ComplexVector& psi0,
                                       double* effective_dt) {
  if (psi0.size() != model.dim())
    throw std::invalid_argument("simulate: initial state has wrong dimension");
  if (std::abs(psi0.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("simulate: initial state must have unit norm");
  const auto segs = build_segments(cfg);

  std::map<double, StepKernel> kernels;
  double dt_used = 0.0;
  for (const auto& seg : segs) {
    if (seg.n_steps == 0 || kernels.count(seg.h)) continue;
    if (max_step_probability(model, seg.h) > kMaxStepJumpProbability)
      throw std::invalid_argument("simulate: dt too large, per-step jump probability " +
                                  std::to_string(max_step_probability(model, seg.h)) +
                                  " exceeds " + std::to_string(kMaxStepJumpProbability));
    kernels.emplace(seg.h, make_step_kernel(model, setup, seg.h));
    dt_used = std::max(dt_used, seg.h);
  }
  if (effective_dt) *effective_dt = dt_used;

  std::vector<TrajectoryRecord> records(cfg.n_traj);
  unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(cfg.n_traj, 1)));
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < cfg.n_traj; i += stride)
      records[i] = run_one(i, segs, kernels, psi0, cfg.master_seed);
  };
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w, threads);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return records;
}

std::vector<std::size_t> postselect_two_detector(std::vector<TrajectoryRecord>& records,
                                                 double t_max) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& rec = records[i];
    rec.rejected_at = std::numeric_limits<double>::infinity();
    for (auto& ev : rec.jump_events) {
      ev.registered = ev.detector == 2;
      if (ev.registered) rec.rejected_at = std::min(rec.rejected_at, ev.time);
    }
    rec.accepted = !(rec.rejected_at <= t_max);
    if (rec.accepted) kept.push_back(i);
  }
  return kept;
}

std::vector<std::size_t> postselect_inefficient(std::vector<TrajectoryRecord>& records,
                                                double eta, std::uint64_t master_seed,
                                                double t_max) {
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("postselect_inefficient: eta must lie in [0, 1]");
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& rec = records[i];
    UniformStream detect(stream_seed(master_seed, rec.id, "detect"));
    rec.rejected_at = std::numeric_limits<double>::infinity();
    for (auto& ev : rec.jump_events) {
      // Undetected iff the draw lands above eta.
      ev.registered = detect.next() < eta;
      if (ev.registered) rec.rejected_at = std::min(rec.rejected_at, ev.time);
    }
    rec.accepted = !(rec.rejected_at <= t_max);
    if (rec.accepted) kept.push_back(i);
  }
  return kept;
}

void clear_postselection(std::vector<TrajectoryRecord>& records) {
  for (auto& rec : records) {
    rec.accepted = true;
    rec.rejected_at = std::numeric_limits<double>::infinity();
    for (auto& ev : rec.jump_events) ev.registered = false;
  }
}

EnsembleStats ensemble_average(const std::vector<TrajectoryRecord>& records,
                               const std::vector<Observable>& observables,
                               const std::vector<double>& sample_times) {
  EnsembleStats st;
  st.times = sample_times;
  st.n_total = records.size();
  const std::size_t nt = sample_times.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  st.n_accepted.assign(nt, 0);
  for (const auto& o : observables) st.observables.push_back(o.name);
  st.mean.assign(observables.size(), std::vector<double>(nt, nan));
  st.sem.assign(observables.size(), std::vector<double>(nt, nan));

  std::size_t any = 0;
  std::vector<double> values;
  for (std::size_t k = 0; k < nt; ++k) {
    std::vector<const ComplexVector*> kept;
    for (const auto& rec : records) {
      if (rec.samples.size() != nt)
        throw std::invalid_argument("ensemble_average: record sample count does not match times");
      if (rec.rejected_at > sample_times[k]) kept.push_back(&rec.samples[k]);
    }
    st.n_accepted[k] = kept.size();
    any += kept.size();
    if (kept.empty()) continue;
    const double n = static_cast<double>(kept.size());
    for (std::size_t o = 0; o < observables.size(); ++o) {
      values.clear();
      for (const ComplexVector* psi : kept)
        values.push_back(psi->dot(observables[o].op * *psi).real());
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= n;
      st.mean[o][k] = mean;
      if (kept.size() >= 2) {
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= n;
        st.sem[o][k] = std::sqrt(var) / std::sqrt(n - 1.0);
      }
    }
  }
  if (any == 0 && nt > 0) {
    std::size_t rejected = 0;
    for (const auto& rec : records) rejected += rec.accepted ? 0 : 1;
    throw EmptyPostselectionError(records.size(), rejected);
  }
  return st;
}

EnsembleResult run_ensemble(const LindbladModel& model, const DetectorSetup& setup,
                            const TrajectoryConfig& cfg, const ComplexVector& psi0,
                            const std::vector<Observable>& observables) {
  EnsembleResult out;
  out.records = simulate(model, setup, cfg, psi0, &out.effective_dt);
  std::vector<std::size_t> kept;
  if (std::holds_alternative<TwoDetector>(setup))
    kept = postselect_two_detector(out.records, cfg.t_max);
  else
    kept = postselect_inefficient(out.records, std::get<Inefficient>(setup).eta, cfg.master_seed,
                                  cfg.t_max);
  out.n_accepted = kept.size();
  try {
    out.stats = ensemble_average(out.records, observables, cfg.sample_times);
  } catch (const EmptyPostselectionError&) {
    out.empty_postselection = true;
    out.stats.times = cfg.sample_times;
    out.stats.n_total = out.records.size();
    out.stats.n_accepted.assign(cfg.sample_times.size(), 0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& o : observables) {
      out.stats.observables.push_back(o.name);
      out.stats.mean.emplace_back(cfg.sample_times.size(), nan);
      out.stats.sem.emplace_back(cfg.sample_times.size(), nan);
    }
  }
  if (out.n_accepted == 0) out.empty_postselection = true;
  return out;
}

}  // namespace liouvep::traj
