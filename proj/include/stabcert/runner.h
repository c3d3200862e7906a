// Copyright 2026 The stabcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STABCERT_RUNNER_H
#define STABCERT_RUNNER_H

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabcert/gf2.h"
#include "stabcert/policy.h"
#include "stabcert/polytope.h"
#include "stabcert/shots.h"
#include "stabcert/syndrome.h"

namespace stabcert {

class Rng;

enum class InstanceKind { affine, dirichlet, sparse, explicit_distribution, rho_ex };

/// How the offset of an affine-support instance is chosen.
enum class OffsetMode { zero, outside, explicit_label };

struct InstanceSpec {
    InstanceKind kind = InstanceKind::dirichlet;
    /// Subspace dimension for affine instances.
    int rank = 0;
    OffsetMode offset = OffsetMode::zero;
    uint32_t s0 = 0;
    /// Fidelity and error count for sparse instances.
    double fidelity = 0.64;
    int errors = 5;
    std::optional<SyndromeDistribution> distribution;
};

/// An instance together with the structure it was generated from (affine only).
struct Instance {
    SyndromeDistribution p;
    std::optional<AffineSupportSpec> affine;
};

/// Draws the instance; qubit count n comes from the caller except for rho_ex and explicit input.
Instance make_instance(int n, const InstanceSpec &spec, Rng &rng);

enum class InitialGaugeKind { identity, uniform, explicit_gauge };

enum class AssertionLevel {
    off,
    /// Violations are recorded in the trace.
    record,
    /// Violations throw AssertionViolation.
    strict
};

struct AssertionViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tolerance for the per-round monotonicity and width-bound checks.
inline constexpr double kBoundTolerance = 1e-8;

struct RunConfig {
    int n = 8;
    InstanceSpec instance;
    InitialGaugeKind initial = InitialGaugeKind::identity;
    std::optional<Gauge> initial_gauge;
    PolicyChoice policy;
    double epsilon = 0.01;
    int t_max = 10;
    ShotModel shots;
    Tiebreak tiebreak = Tiebreak::solver_default;
    AssertionLevel assertions = AssertionLevel::strict;
    uint64_t seed = 0;
    uint64_t trial = 0;
    /// Index of this (policy, shot model) arm within an ensemble; selects the rng streams.
    uint64_t arm = 0;

    void validate() const;
};

enum class StopReason { width, coverage, cap, infeasible };

std::string to_string(StopReason reason);

struct RoundRecord {
    int t = 0;
    /// Gauge columns (or the single label) requested this round.
    std::vector<Label> queried;
    std::vector<Label> new_labels;
    /// Estimates for the new labels: exact values, or band centres in finite mode.
    std::vector<double> measured;
    double lower = 0;
    double upper = 1;
    double width = 1;
    /// Sum and maximum of d over unqueried labels, from this round's witnesses.
    double disagreement_mass = 0;
    double disagreement_max = 0;
    /// Unqueried nonzero labels after this round.
    int64_t unqueried = 0;
    bool uniform_branch = false;
    double wall_ms = 0;
};

struct RunTrace {
    int n = 0;
    std::string policy;
    std::string shot_model;
    Tiebreak tiebreak = Tiebreak::solver_default;
    double true_fidelity = 0;
    double epsilon = 0;
    double radius = 0;
    std::vector<RoundRecord> rounds;
    StopReason stop = StopReason::cap;
    std::optional<int> t_epsilon;
    int64_t total_shots = 0;
    std::vector<std::string> violations;
    LabelSet queried;

    bool infeasible() const {
        return stop == StopReason::infeasible;
    }
    /// Width at round t, carrying the terminal value forward; rounds before the first are 1.
    double width_at(int t) const;
    const RoundRecord &last() const {
        return rounds.back();
    }
    /// True fidelity inside the terminal interval, to within kNumericTolerance.
    bool contains_truth() const;
};

/// Gauge-level adaptive loop on a given distribution. Rounds are numbered from 1.
RunTrace run_adaptive(const RunConfig &cfg, const SyndromeDistribution &p, Rng &policy_rng, Rng &shot_rng);
/// Fine-grained loop: round 0 queries the initial gauge, later rounds one label each.
RunTrace run_fine_grained(const RunConfig &cfg, const SyndromeDistribution &p, Rng &policy_rng, Rng &shot_rng);

/// Builds the instance and rng streams from (seed, trial, arm) and dispatches on the policy.
RunTrace run_config(const RunConfig &cfg);
RunTrace run_config(const RunConfig &cfg, const Instance &instance);

struct Arm {
    std::string name;
    PolicyChoice policy;
    ShotModel shots;
};

struct EnsembleConfig {
    RunConfig base;
    int trials = 1;
    std::vector<Arm> arms;
    int threads = 0;
};

/// Order statistics over trials, linear interpolation between closest ranks.
struct Quartiles {
    double q1 = 0;
    double median = 0;
    double q3 = 0;
};

Quartiles quartiles(std::vector<double> values);

struct ArmSummary {
    std::string name;
    std::string policy;
    std::string shot_model;
    /// Indexed by round 1..t_max (entry 0 is round 0 / unused for gauge policies).
    std::vector<Quartiles> width_by_round;
    /// +inf when the median run did not reach the target width.
    double median_t_epsilon = std::numeric_limits<double>::infinity();
    int failed = 0;
    int infeasible = 0;
    int contains_truth = 0;
    Quartiles final_width;
    double median_total_shots = 0;
    int violations = 0;
};

struct EnsembleResult {
    int trials = 0;
    int t_max = 0;
    double epsilon = 0;
    std::vector<ArmSummary> arms;
    /// traces[arm][trial]
    std::vector<std::vector<RunTrace>> traces;
};

/// Runs every (trial, arm) pair. Arms share the instance drawn for their trial.
EnsembleResult run_ensemble(const EnsembleConfig &cfg);

}  // namespace stabcert

#endif
