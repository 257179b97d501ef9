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

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "liouvep/lindblad.hpp"

// Quantum-jump unraveling with postselection on detector records.
namespace liouvep::traj {

/// Largest allowed total jump probability in a single step.
inline constexpr double kMaxStepJumpProbability = 0.05;

struct TwoDetector {
  double q = 1.0;  // fraction of jumps routed to detector 1
};

struct Inefficient {
  double eta = 1.0;  // probability that a jump is registered
};

using DetectorSetup = std::variant<TwoDetector, Inefficient>;

/// q for TwoDetector, 1 - eta for Inefficient.
double effective_q(const DetectorSetup& setup);
std::string describe(const DetectorSetup& setup);

struct TrajectoryConfig {
  double dt = 1e-3;  // upper bound; intervals between samples are split evenly
  double t_max = 1.0;
  std::size_t n_traj = 1;
  std::uint64_t master_seed = 0;
  std::vector<double> sample_times;
  unsigned threads = 1;  // 0 picks std::thread::hardware_concurrency()
};

struct JumpEvent {
  double time = 0.0;
  std::size_t channel = 0;
  int detector = 1;         // 1 or 2 for TwoDetector; 1 for the single detector
  bool registered = false;  // set by postselection: the event is seen by the observer
};

struct TrajectoryRecord {
  std::size_t id = 0;
  std::vector<JumpEvent> jump_events;
  ComplexVector final_state;
  std::vector<ComplexVector> samples;  // one per sample time
  bool accepted = true;
  int n_jumps_detector1 = 0;
  int n_jumps_detector2 = 0;
  // Time of the first registered jump; the trajectory is kept at sample
  // times strictly before it.
  double rejected_at = std::numeric_limits<double>::infinity();
};

struct Observable {
  std::string name;
  ComplexMatrix op;
};

std::vector<Observable> pauli_observables();

struct EnsembleStats {
  std::vector<double> times;
  std::vector<std::string> observables;
  std::vector<std::vector<double>> mean;  // [observable][time]
  std::vector<std::vector<double>> sem;   // NaN where fewer than two trajectories
  std::vector<std::size_t> n_accepted;    // per time
  std::size_t n_total = 0;
};

class EmptyPostselectionError : public std::runtime_error {
 public:
  EmptyPostselectionError(std::size_t n_total, std::size_t n_rejected)
      : std::runtime_error("postselection kept no trajectories (" + std::to_string(n_rejected) +
                           " of " + std::to_string(n_total) + " rejected)"),
        n_total_(n_total),
        n_rejected_(n_rejected) {}
  std::size_t n_total() const { return n_total_; }
  std::size_t n_rejected() const { return n_rejected_; }

 private:
  std::size_t n_total_;
  std::size_t n_rejected_;
};

/// Seed for an independent stream keyed by (master, index, tag).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index, std::string_view tag = {});

/// Deterministic uniform source on [0, 1) with 53-bit resolution.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// Everything a single fixed-size step needs.
struct StepKernel {
  double dt = 0.0;
  ComplexMatrix nojump;                // exp(-i H_eff dt)
  std::vector<ComplexMatrix> jumps;    // G_mu
  std::vector<double> detector1_share; // fraction of channel mu going to detector 1
};

StepKernel make_step_kernel(const LindbladModel& model, const DetectorSetup& setup, double dt);

struct StepOutcome {
  bool jumped = false;
  std::size_t channel = 0;
  int detector = 0;
};

/// One first-order step. With probability p_mu = |G_mu psi|^2 dt the state
/// jumps to G_mu psi / |G_mu psi|; otherwise it evolves under the no-jump
/// propagator and is renormalized. At most one jump per step.
/// Throws std::runtime_error if the total probability exceeds the cap or the
/// norm collapses below 1e-14.
StepOutcome step(const StepKernel& kernel, ComplexVector& psi, double draw);

/// Worst-case per-step jump probability lambda_max(sum G^+G) dt.
double max_step_probability(const LindbladModel& model, double dt);

/// 1e-3 * 2 pi / omega, halved until the probability cap holds.
double default_dt(const LindbladModel& model, double omega);

/// Simulates n_traj trajectories from psi0 without postselection. Trajectory
/// i draws from stream_seed(master_seed, i); results are identical for any
/// thread count.
std::vector<TrajectoryRecord> simulate(const LindbladModel& model, const DetectorSetup& setup,
                                       const TrajectoryConfig& cfg, const ComplexVector& psi0,
                                       double* effective_dt = nullptr);

/// Keeps trajectories without detector-2 jumps. Updates accepted, rejected_at
/// and the registered flags in place; returns the accepted indices.
std::vector<std::size_t> postselect_two_detector(std::vector<TrajectoryRecord>& records,
                                                 double t_max);

/// Registers each jump with probability eta using the stream
/// stream_seed(master_seed, id, "detect") and keeps trajectories with no
/// registered jump. Records with no jumps are always kept.
std::vector<std::size_t> postselect_inefficient(std::vector<TrajectoryRecord>& records,
                                                double eta, std::uint64_t master_seed,
                                                double t_max);

/// Clears all postselection marks (every record accepted at all times).
void clear_postselection(std::vector<TrajectoryRecord>& records);

/// Mean and standard error sqrt(<(x - <x>)^2>) / sqrt(N - 1) of each
/// observable at each sample time, over records not rejected by that time.
/// Throws EmptyPostselectionError if no record is kept at any time.
EnsembleStats ensemble_average(const std::vector<TrajectoryRecord>& records,
                               const std::vector<Observable>& observables,
                               const std::vector<double>& sample_times);

struct EnsembleResult {
  std::vector<TrajectoryRecord> records;
  EnsembleStats stats;
  std::size_t n_accepted = 0;  // at t_max
  bool empty_postselection = false;
  double effective_dt = 0.0;
};

/// simulate + the postselection rule of the setup + ensemble_average.
EnsembleResult run_ensemble(const LindbladModel& model, const DetectorSetup& setup,
                            const TrajectoryConfig& cfg, const ComplexVector& psi0,
                            const std::vector<Observable>& observables);

}  // namespace liouvep::traj
