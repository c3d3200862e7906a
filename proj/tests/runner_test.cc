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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "stabcert/rng.h"
#include "stabcert/runner.h"
#include "stabcert/syndrome.h"

namespace stabcert {
namespace {

RunConfig rho_ex_config(PolicyChoice policy) {
    RunConfig cfg;
    cfg.n = 3;
    cfg.instance.kind = InstanceKind::rho_ex;
    cfg.policy = policy;
    cfg.epsilon = 0;
    cfg.t_max = 8;
    cfg.seed = 1;
    return cfg;
}

void expect_same_trace(const RunTrace &a, const RunTrace &b) {
    ASSERT_EQ(a.rounds.size(), b.rounds.size());
    EXPECT_EQ(a.stop, b.stop);
    EXPECT_EQ(a.t_epsilon, b.t_epsilon);
    EXPECT_EQ(a.total_shots, b.total_shots);
    for (size_t i = 0; i < a.rounds.size(); i++) {
        const RoundRecord &x = a.rounds[i], &y = b.rounds[i];
        EXPECT_EQ(x.t, y.t);
        EXPECT_EQ(x.queried, y.queried);
        EXPECT_EQ(x.new_labels, y.new_labels);
        EXPECT_EQ(x.measured, y.measured);
        EXPECT_EQ(x.lower, y.lower);
        EXPECT_EQ(x.upper, y.upper);
        EXPECT_EQ(x.disagreement_mass, y.disagreement_mass);
        EXPECT_EQ(x.uniform_branch, y.uniform_branch);
    }
}

void expect_monotone(const RunTrace &trace) {
    for (size_t i = 1; i < trace.rounds.size(); i++) {
        EXPECT_GE(trace.rounds[i].lower, trace.rounds[i - 1].lower - kBoundTolerance);
        EXPECT_LE(trace.rounds[i].upper, trace.rounds[i - 1].upper + kBoundTolerance);
        EXPECT_LE(trace.rounds[i].width, trace.rounds[i - 1].width + kBoundTolerance);
    }
}

TEST(RunAdaptive, RhoExWitnessIsExactWithinThreeRounds) {
    RunTrace trace = run_config(rho_ex_config(PolicyChoice::parse("witness")));
    EXPECT_EQ(trace.stop, StopReason::width);
    EXPECT_LE(trace.rounds.size(), 3u);
    EXPECT_EQ(trace.rounds.front().t, 1);
    EXPECT_NEAR(trace.rounds.front().lower, 0.25, 1e-9);
    EXPECT_NEAR(trace.rounds.front().upper, 0.75, 1e-9);
    EXPECT_NEAR(trace.last().lower, 0.25, 1e-9);
    EXPECT_NEAR(trace.last().upper, 0.25, 1e-9);
    EXPECT_TRUE(trace.violations.empty());
}

TEST(RunAdaptive, AffineSubspaceTerminalValue) {
    RunConfig cfg;
    cfg.n = 8;
    cfg.instance.kind = InstanceKind::affine;
    cfg.instance.rank = 4;
    cfg.epsilon = 0;
    cfg.t_max = 60;
    cfg.seed = 3;
    RunTrace trace = run_config(cfg);
    EXPECT_EQ(trace.stop, StopReason::width);
    EXPECT_NEAR(trace.last().lower, 1.0 / 16, 1e-9);
    EXPECT_NEAR(trace.last().upper, 1.0 / 16, 1e-9);
    EXPECT_TRUE(trace.violations.empty());
}

TEST(RunAdaptive, WidthIsMonotoneUnderEveryPolicy) {
    for (const char *policy : {"witness", "uniform", "mixed:0.3"}) {
        for (uint64_t trial = 0; trial < 4; trial++) {
            RunConfig cfg;
            cfg.n = 6;
            cfg.policy = PolicyChoice::parse(policy);
            cfg.epsilon = 0.001;
            cfg.t_max = 12;
            cfg.seed = 5;
            cfg.trial = trial;
            RunTrace trace = run_config(cfg);
            expect_monotone(trace);
            EXPECT_TRUE(trace.violations.empty()) << policy;
        }
    }
}

TEST(RunAdaptive, WitnessRoundsAlwaysAddLabels) {
    RunConfig cfg;
    cfg.n = 5;
    cfg.epsilon = 0;
    cfg.t_max = 40;
    cfg.seed = 6;
    for (uint64_t trial = 0; trial < 5; trial++) {
        cfg.trial = trial;
        RunTrace trace = run_config(cfg);
        for (const RoundRecord &r : trace.rounds) {
            EXPECT_FALSE(r.new_labels.empty());
        }
        EXPECT_NEAR(trace.last().lower, trace.true_fidelity, 1e-7);
        EXPECT_NEAR(trace.last().upper, trace.true_fidelity, 1e-7);
    }
}

TEST(RunAdaptive, CompletenessAtFullCoverage) {
    for (int n = 1; n <= 4; n++) {
        for (const char *policy : {"witness", "uniform"}) {
            RunConfig cfg;
            cfg.n = n;
            cfg.policy = PolicyChoice::parse(policy);
            cfg.epsilon = 0;
            cfg.t_max = 400;
            cfg.seed = 7;
            for (uint64_t trial = 0; trial < 10; trial++) {
                cfg.trial = trial;
                RunTrace trace = run_config(cfg);
                ASSERT_NE(trace.stop, StopReason::cap);
                EXPECT_NEAR(trace.last().lower, trace.true_fidelity, 1e-7);
                EXPECT_NEAR(trace.last().upper, trace.true_fidelity, 1e-7);
            }
        }
    }
}

TEST(RunAdaptive, UnitEpsilonStopsAfterFirstRound) {
    RunConfig cfg;
    cfg.n = 6;
    cfg.epsilon = 1;
    cfg.seed = 8;
    RunTrace trace = run_config(cfg);
    EXPECT_EQ(trace.rounds.size(), 1u);
    EXPECT_EQ(trace.stop, StopReason::width);
    EXPECT_EQ(trace.t_epsilon, 1);
}

TEST(RunAdaptive, CapWithoutTargetIsAFailure) {
    RunConfig cfg;
    cfg.n = 8;
    cfg.epsilon = 0;
    cfg.t_max = 2;
    cfg.seed = 9;
    RunTrace trace = run_config(cfg);
    EXPECT_EQ(trace.stop, StopReason::cap);
    EXPECT_EQ(trace.rounds.size(), 2u);
    EXPECT_FALSE(trace.t_epsilon.has_value());
    EXPECT_EQ(trace.width_at(0), 1);
    EXPECT_EQ(trace.width_at(10), trace.last().width);
}

TEST(RunAdaptive, UniformInitialGaugeDependsOnSeed) {
    RunConfig cfg;
    cfg.n = 6;
    cfg.initial = InitialGaugeKind::uniform;
    cfg.t_max = 1;
    cfg.seed = 10;
    RunTrace a = run_config(cfg);
    cfg.trial = 1;
    RunTrace b = run_config(cfg);
    EXPECT_EQ(a.rounds[0].queried.size(), 6u);
    EXPECT_NE(a.rounds[0].queried, b.rounds[0].queried);
}

TEST(RunAdaptive, ExplicitInitialGauge) {
    RunConfig cfg = rho_ex_config(PolicyChoice::parse("witness"));
    cfg.initial = InitialGaugeKind::explicit_gauge;
    cfg.initial_gauge = Gauge({Label::from_string("110"), Label::from_string("011"), Label::from_string("111")});
    RunTrace trace = run_config(cfg);
    EXPECT_NEAR(trace.rounds.front().lower, 0, 1e-9);
    EXPECT_NEAR(trace.rounds.front().upper, 0.25, 1e-9);
    EXPECT_NEAR(trace.last().upper, 0.25, 1e-9);
    EXPECT_NEAR(trace.last().lower, 0.25, 1e-9);
}

TEST(RunAdaptive, MixedRecordsBranches) {
    RunConfig cfg;
    cfg.n = 6;
    cfg.policy = PolicyChoice::parse("mixed:0.5");
    cfg.epsilon = 0;
    cfg.t_max = 20;
    cfg.seed = 11;
    RunTrace trace = run_config(cfg);
    EXPECT_FALSE(trace.rounds.front().uniform_branch);
    int uniform = 0;
    for (const RoundRecord &r : trace.rounds) {
        uniform += r.uniform_branch;
    }
    EXPECT_GT(uniform, 0);
    EXPECT_LT(uniform, static_cast<int>(trace.rounds.size()));
}

TEST(RunAdaptive, FiniteShotAccountingAndBands) {
    RunConfig cfg;
    cfg.n = 8;
    cfg.instance.kind = InstanceKind::sparse;
    cfg.epsilon = 0.01;
    cfg.t_max = 8;
    cfg.shots = ShotModel::parse("finite:Ns=10000,delta=0.05,Tmax=8");
    cfg.seed = 12;
    RunTrace trace = run_config(cfg);
    ASSERT_FALSE(trace.infeasible());
    EXPECT_DOUBLE_EQ(trace.radius, hoeffding_radius(10000, 8, 8, 0.05));
    EXPECT_EQ(static_cast<int64_t>(trace.queried.size()) * 10000, trace.total_shots);
    EXPECT_TRUE(trace.contains_truth());
    EXPECT_TRUE(trace.violations.empty());
}

TEST(RunAdaptive, RejectsBadConfigs) {
    RunConfig cfg;
    cfg.epsilon = -1;
    EXPECT_THROW(run_config(cfg), ValidationError);
    cfg.epsilon = 0.01;
    cfg.t_max = 0;
    EXPECT_THROW(run_config(cfg), ValidationError);
    cfg.t_max = 5;
    cfg.initial = InitialGaugeKind::explicit_gauge;
    EXPECT_THROW(run_config(cfg), ValidationError);
}

TEST(RunFine, RhoExFirstIntervalMatchesGaugeLoop) {
    RunTrace fine = run_config(rho_ex_config(PolicyChoice::parse("fine")));
    RunTrace gauge = run_config(rho_ex_config(PolicyChoice::parse("witness")));
    EXPECT_EQ(fine.rounds.front().t, 0);
    EXPECT_EQ(fine.rounds.front().lower, gauge.rounds.front().lower);
    EXPECT_EQ(fine.rounds.front().upper, gauge.rounds.front().upper);
    for (size_t i = 1; i < fine.rounds.size(); i++) {
        EXPECT_EQ(fine.rounds[i].new_labels.size(), 1u);
    }
    EXPECT_NEAR(fine.last().lower, 0.25, 1e-9);
    EXPECT_NEAR(fine.last().upper, 0.25, 1e-9);
}

TEST(RunFine, ThreeQubitFullCoverageIsExact) {
    RunConfig cfg;
    cfg.n = 3;
    cfg.policy = PolicyChoice::parse("fine");
    cfg.epsilon = 0;
    cfg.t_max = 10;
    cfg.seed = 13;
    for (uint64_t trial = 0; trial < 20; trial++) {
        cfg.trial = trial;
        RunTrace trace = run_config(cfg);
        EXPECT_LE(trace.rounds.size(), 5u);
        EXPECT_NEAR(trace.last().lower, trace.true_fidelity, 1e-7);
        EXPECT_NEAR(trace.last().upper, trace.true_fidelity, 1e-7);
        expect_monotone(trace);
    }
}

TEST(RunConfig, DeterministicRerun) {
    RunConfig cfg;
    cfg.n = 7;
    cfg.policy = PolicyChoice::parse("mixed:0.4");
    cfg.shots = ShotModel::parse("finite:Ns=5000,delta=0.05,Tmax=6");
    cfg.t_max = 6;
    cfg.seed = 14;
    cfg.trial = 3;
    expect_same_trace(run_config(cfg), run_config(cfg));
}

TEST(Quartiles, LinearInterpolation) {
    Quartiles q = quartiles({4, 1, 3, 2});
    EXPECT_DOUBLE_EQ(q.q1, 1.75);
    EXPECT_DOUBLE_EQ(q.median, 2.5);
    EXPECT_DOUBLE_EQ(q.q3, 3.25);
    double inf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(quartiles({1, 2, inf}).median, 2);
    EXPECT_EQ(quartiles({1, inf, inf}).median, inf);
    EXPECT_EQ(quartiles({1, 2, inf, inf}).median, inf);
}

EnsembleConfig small_ensemble(int threads) {
    EnsembleConfig ec;
    ec.base.n = 5;
    ec.base.epsilon = 0.01;
    ec.base.t_max = 6;
    ec.base.seed = 15;
    ec.trials = 6;
    ec.threads = threads;
    ec.arms = {{"witness", PolicyChoice::parse("witness"), ShotModel{}},
               {"uniform", PolicyChoice::parse("uniform"), ShotModel{}},
               {"finite", PolicyChoice::parse("witness"), ShotModel::parse("finite:Ns=2000,delta=0.05,Tmax=6")}};
    return ec;
}

TEST(Ensemble, IndependentOfThreadCount) {
    EnsembleResult a = run_ensemble(small_ensemble(1));
    EnsembleResult b = run_ensemble(small_ensemble(3));
    ASSERT_EQ(a.traces.size(), b.traces.size());
    for (size_t arm = 0; arm < a.traces.size(); arm++) {
        for (int t = 0; t < a.trials; t++) {
            expect_same_trace(a.traces[arm][t], b.traces[arm][t]);
        }
    }
}

TEST(Ensemble, ArmsShareInstancesAndMatchSingleRuns) {
    EnsembleConfig ec = small_ensemble(2);
    EnsembleResult r = run_ensemble(ec);
    for (int t = 0; t < ec.trials; t++) {
        EXPECT_EQ(r.traces[0][t].true_fidelity, r.traces[1][t].true_fidelity);
        RunConfig single = ec.base;
        single.policy = ec.arms[1].policy;
        single.arm = 1;
        single.trial = static_cast<uint64_t>(t);
        expect_same_trace(run_config(single), r.traces[1][t]);
    }
}

TEST(Ensemble, SummaryCounts) {
    EnsembleConfig ec = small_ensemble(0);
    EnsembleResult r = run_ensemble(ec);
    ASSERT_EQ(r.arms.size(), 3u);
    for (size_t a = 0; a < r.arms.size(); a++) {
        const ArmSummary &s = r.arms[a];
        int failed = 0;
        std::vector<double> finals;
        for (const RunTrace &tr : r.traces[a]) {
            failed += !tr.t_epsilon.has_value();
            finals.push_back(tr.width_at(ec.base.t_max));
        }
        EXPECT_EQ(s.failed, failed);
        EXPECT_EQ(s.final_width.median, quartiles(finals).median);
        EXPECT_EQ(s.width_by_round.size(), static_cast<size_t>(ec.base.t_max + 1));
        EXPECT_EQ(s.violations, 0);
        EXPECT_EQ(s.infeasible, 0);
    }
}

}  // namespace
}  // namespace stabcert
