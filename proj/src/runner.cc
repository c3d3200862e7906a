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

#include "stabcert/runner.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <thread>

#include "stabcert/rng.h"

namespace stabcert {

Instance make_instance(int n, const InstanceSpec &spec, Rng &rng) {
    switch (spec.kind) {
        case InstanceKind::rho_ex:
            return {make_rho_ex(), std::nullopt};
        case InstanceKind::explicit_distribution:
            if (!spec.distribution) {
                throw ValidationError("explicit instance needs a distribution");
            }
            return {*spec.distribution, std::nullopt};
        case InstanceKind::dirichlet:
            return {sample_dirichlet_uniform(n, rng), std::nullopt};
        case InstanceKind::sparse:
            return {make_sparse_error_state(n, spec.fidelity, spec.errors, rng), std::nullopt};
        case InstanceKind::affine: {
            if (spec.rank < 0 || spec.rank > n) {
                throw ValidationError("affine rank must lie in [0, n]");
            }
            AffineSupportSpec affine{n, Label::zero(n), sample_subspace_basis(n, spec.rank, rng)};
            if (spec.offset == OffsetMode::explicit_label) {
                affine.s0 = Label(n, spec.s0);
            } else if (spec.offset == OffsetMode::outside) {
                if (spec.rank == n) {
                    throw ValidationError("no offset lies outside V = F_2^n");
                }
                Gf2Basis span(n);
                for (const Label &v : affine.v_basis) {
                    span.insert(v.bits());
                }
                uint32_t s;
                do {
                    s = static_cast<uint32_t>(rng.uniform_below(uint64_t{1} << n));
                } while (span.contains(s));
                affine.s0 = Label(n, s);
            }
            SyndromeDistribution p = make_affine_support(affine);
            return {std::move(p), std::move(affine)};
        }
    }
    throw ValidationError("unknown instance kind");
}

void RunConfig::validate() const {
    check_qubit_count(n);
    if (!(epsilon >= 0)) {
        throw ValidationError("epsilon must be nonnegative");
    }
    if (t_max < 1) {
        throw ValidationError("t_max must be at least 1");
    }
    if (policy.kind == PolicyKind::mixed && !(policy.gamma >= 0 && policy.gamma <= 1)) {
        throw ValidationError("gamma must lie in [0, 1]");
    }
    shots.validate();
    if (initial == InitialGaugeKind::explicit_gauge) {
        if (!initial_gauge) {
            throw ValidationError("explicit initial gauge missing");
        }
        if (initial_gauge->n() != n) {
            throw DimensionError("initial gauge dimension mismatch");
        }
    }
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::width:
            return "width";
        case StopReason::coverage:
            return "coverage";
        case StopReason::cap:
            return "cap";
        case StopReason::infeasible:
            return "infeasible";
    }
    return "cap";
}

double RunTrace::width_at(int t) const {
    double w = 1;
    for (const RoundRecord &r : rounds) {
        if (r.t > t) {
            break;
        }
        w = r.width;
    }
    return w;
}

bool RunTrace::contains_truth() const {
    if (rounds.empty() || infeasible()) {
        return false;
    }
    return last().lower <= true_fidelity + kNumericTolerance && true_fidelity <= last().upper + kNumericTolerance;
}

namespace {

// State shared by the gauge-level and fine-grained loops.
class Session {
   public:
    Session(const RunConfig &cfg, const SyndromeDistribution &p, Rng &shot_rng)
        : cfg_(cfg), truth_(walsh(p)), constraints_(p.n()), shot_rng_(shot_rng) {
        if (p.n() != cfg.n) {
            throw DimensionError("instance dimension does not match the run configuration");
        }
        trace_.n = p.n();
        trace_.policy = cfg.policy.to_string();
        trace_.shot_model = cfg.shots.to_string();
        trace_.tiebreak = cfg.tiebreak;
        trace_.true_fidelity = p.fidelity();
        trace_.epsilon = cfg.epsilon;
        trace_.radius = cfg.shots.radius(p.n());
        trace_.queried = LabelSet(p.n());
    }

    // Measures the unqueried labels among `labels`, solves, checks the per-round bounds and
    // records the round. Returns false when the run must stop.
    bool round(int t, std::vector<Label> labels, bool uniform_branch, bool must_expand) {
        auto start = std::chrono::steady_clock::now();
        RoundRecord rec;
        rec.t = t;
        rec.uniform_branch = uniform_branch;
        rec.queried = std::move(labels);
        for (const Label &u : rec.queried) {
            if (!trace_.queried.insert(u)) {
                continue;
            }
            double mu = truth_[u.bits()];
            if (cfg_.shots.finite()) {
                double mu_hat = measure_label(mu, cfg_.shots.shots, shot_rng_);
                constraints_.add_band(u, mu_hat, trace_.radius);
                trace_.total_shots += cfg_.shots.shots;
                rec.measured.push_back(mu_hat);
            } else {
                constraints_.add_exact(u, mu);
                rec.measured.push_back(mu);
            }
            rec.new_labels.push_back(u);
        }
        if (must_expand && rec.new_labels.empty()) {
            violation("round " + std::to_string(t) + ": selection added no unqueried label");
        }
        EndpointResult result = solve_endpoints(constraints_, cfg_.tiebreak);
        if (!result.solved()) {
            trace_.stop = StopReason::infeasible;
            return false;
        }
        rec.lower = result.lower;
        rec.upper = result.upper;
        rec.width = std::max(0.0, result.upper - result.lower);
        d_ = disagreement_spectrum(*result.witness_lo, *result.witness_hi);
        zero_queried(d_, trace_.queried);
        rec.disagreement_mass = d_.unqueried_mass(trace_.queried);
        rec.disagreement_max = d_.unqueried_max(trace_.queried);
        rec.unqueried = static_cast<int64_t>(trace_.queried.unqueried_count());
        check_bounds(rec);
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        trace_.rounds.push_back(std::move(rec));

        const RoundRecord &r = trace_.rounds.back();
        if (r.width <= cfg_.epsilon + kNumericTolerance) {
            trace_.stop = StopReason::width;
            trace_.t_epsilon = t;
            return false;
        }
        if (trace_.queried.covers_all_nonzero()) {
            trace_.stop = StopReason::coverage;
            return false;
        }
        return true;
    }

    const DisagreementSpectrum &disagreement() const {
        return d_;
    }
    const LabelSet &queried() const {
        return trace_.queried;
    }
    RunTrace finish() {
        return std::move(trace_);
    }
    void stop_at_cap() {
        trace_.stop = StopReason::cap;
    }

   private:
    void violation(const std::string &what) {
        if (cfg_.assertions == AssertionLevel::off) {
            return;
        }
        if (cfg_.assertions == AssertionLevel::strict) {
            throw AssertionViolation(what);
        }
        trace_.violations.push_back(what);
    }

    void check_bounds(const RoundRecord &rec) {
        if (cfg_.assertions == AssertionLevel::off) {
            return;
        }
        char buf[160];
        std::string where = "round " + std::to_string(rec.t) + ": ";
        if (!trace_.rounds.empty()) {
            const RoundRecord &prev = trace_.rounds.back();
            if (rec.lower < prev.lower - kBoundTolerance || rec.upper > prev.upper + kBoundTolerance) {
                std::snprintf(buf, sizeof(buf), "interval [%.12g, %.12g] not nested in [%.12g, %.12g]", rec.lower,
                              rec.upper, prev.lower, prev.upper);
                violation(where + buf);
            }
        }
        if (cfg_.shots.finite()) {
            // Both bounds rely on the witnesses agreeing on every queried coefficient.
            return;
        }
        double scale = std::ldexp(1.0, -trace_.n);
        double coverage = std::min(1.0, 2.0 * static_cast<double>(rec.unqueried) * scale);
        if (rec.width > coverage + kBoundTolerance) {
            std::snprintf(buf, sizeof(buf), "width %.12g exceeds coverage bound %.12g", rec.width, coverage);
            violation(where + buf);
        }
        if (rec.width > rec.disagreement_mass * scale + kBoundTolerance) {
            std::snprintf(buf, sizeof(buf), "width %.12g exceeds disagreement-mass bound %.12g", rec.width,
                          rec.disagreement_mass * scale);
            violation(where + buf);
        }
    }

    const RunConfig &cfg_;
    WalshSpectrum truth_;
    ConstraintSet constraints_;
    Rng &shot_rng_;
    RunTrace trace_;
    DisagreementSpectrum d_;
};

Gauge initial_gauge(const RunConfig &cfg, Rng &policy_rng) {
    switch (cfg.initial) {
        case InitialGaugeKind::identity:
            return Gauge::identity(cfg.n);
        case InitialGaugeKind::uniform:
            return sample_uniform_gauge(cfg.n, policy_rng);
        case InitialGaugeKind::explicit_gauge:
            return *cfg.initial_gauge;
    }
    return Gauge::identity(cfg.n);
}

}  // namespace

RunTrace run_adaptive(const RunConfig &cfg, const SyndromeDistribution &p, Rng &policy_rng, Rng &shot_rng) {
    cfg.validate();
    if (cfg.policy.kind == PolicyKind::fine) {
        throw ValidationError("the fine-grained policy runs through run_fine_grained");
    }
    Session session(cfg, p, shot_rng);
    Gauge gauge = initial_gauge(cfg, policy_rng);
    bool uniform_branch = false;
    bool must_expand = false;
    for (int t = 1;; t++) {
        if (!session.round(t, gauge.columns(), uniform_branch, must_expand)) {
            break;
        }
        if (t == cfg.t_max) {
            session.stop_at_cap();
            break;
        }
        const DisagreementSpectrum &d = session.disagreement();
        switch (cfg.policy.kind) {
            case PolicyKind::witness:
                gauge = *select_witness_gauge(d, session.queried());
                uniform_branch = false;
                break;
            case PolicyKind::uniform:
                gauge = select_uniform_gauge(cfg.n, policy_rng);
                uniform_branch = true;
                break;
            case PolicyKind::mixed: {
                MixedSelection pick = select_mixed(cfg.policy.gamma, d, session.queried(), policy_rng);
                gauge = *pick.gauge;
                uniform_branch = pick.uniform_branch;
                break;
            }
            case PolicyKind::fine:
                break;
        }
        must_expand = !uniform_branch;
    }
    return session.finish();
}

RunTrace run_fine_grained(const RunConfig &cfg, const SyndromeDistribution &p, Rng &policy_rng, Rng &shot_rng) {
    cfg.validate();
    Session session(cfg, p, shot_rng);
    std::vector<Label> next = initial_gauge(cfg, policy_rng).columns();
    for (int t = 0;; t++) {
        if (!session.round(t, next, false, t > 0)) {
            break;
        }
        if (t == cfg.t_max) {
            session.stop_at_cap();
            break;
        }
        next = {*select_single_label(session.disagreement(), session.queried())};
    }
    return session.finish();
}

RunTrace run_config(const RunConfig &cfg, const Instance &instance) {
    Rng policy_rng = Rng::derive(cfg.seed, {cfg.trial, 1, cfg.arm});
    Rng shot_rng = Rng::derive(cfg.seed, {cfg.trial, 2, cfg.arm});
    if (cfg.policy.kind == PolicyKind::fine) {
        return run_fine_grained(cfg, instance.p, policy_rng, shot_rng);
    }
    return run_adaptive(cfg, instance.p, policy_rng, shot_rng);
}

RunTrace run_config(const RunConfig &cfg) {
    Rng instance_rng = Rng::derive(cfg.seed, {cfg.trial, 0});
    return run_config(cfg, make_instance(cfg.n, cfg.instance, instance_rng));
}

Quartiles quartiles(std::vector<double> values) {
    if (values.empty()) {
        double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, nan};
    }
    std::sort(values.begin(), values.end());
    auto at = [&](double q) {
        double pos = q * static_cast<double>(values.size() - 1);
        size_t lo = static_cast<size_t>(std::floor(pos));
        double frac = pos - static_cast<double>(lo);
        if (frac == 0 || lo + 1 >= values.size()) {
            return values[lo];
        }
        if (std::isinf(values[lo + 1])) {
            return values[lo + 1];
        }
        return values[lo] + (values[lo + 1] - values[lo]) * frac;
    };
    return {at(0.25), at(0.5), at(0.75)};
}

EnsembleResult run_ensemble(const EnsembleConfig &cfg) {
    if (cfg.trials < 1) {
        throw ValidationError("an ensemble needs at least one trial");
    }
    if (cfg.arms.empty()) {
        throw ValidationError("an ensemble needs at least one arm");
    }
    cfg.base.validate();
    std::vector<RunConfig> arm_configs;
    for (size_t a = 0; a < cfg.arms.size(); a++) {
        RunConfig rc = cfg.base;
        rc.policy = cfg.arms[a].policy;
        rc.shots = cfg.arms[a].shots;
        rc.arm = a;
        rc.validate();
        arm_configs.push_back(rc);
    }

    std::vector<Instance> instances;
    instances.reserve(cfg.trials);
    for (int trial = 0; trial < cfg.trials; trial++) {
        Rng rng = Rng::derive(cfg.base.seed, {static_cast<uint64_t>(trial), 0});
        instances.push_back(make_instance(cfg.base.n, cfg.base.instance, rng));
    }

    EnsembleResult out;
    out.trials = cfg.trials;
    out.t_max = cfg.base.t_max;
    out.epsilon = cfg.base.epsilon;
    out.traces.assign(cfg.arms.size(), std::vector<RunTrace>(cfg.trials));

    size_t jobs = cfg.arms.size() * static_cast<size_t>(cfg.trials);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t job = next++; job < jobs; job = next++) {
            size_t a = job % cfg.arms.size();
            int trial = static_cast<int>(job / cfg.arms.size());
            RunConfig rc = arm_configs[a];
            rc.trial = static_cast<uint64_t>(trial);
            RunTrace trace;
            try {
                trace = run_config(rc, instances[trial]);
            } catch (const std::exception &e) {
                trace.n = rc.n;
                trace.policy = rc.policy.to_string();
                trace.shot_model = rc.shots.to_string();
                trace.true_fidelity = instances[trial].p.fidelity();
                trace.stop = StopReason::infeasible;
                trace.violations.push_back(std::string("run aborted: ") + e.what());
            }
            out.traces[a][trial] = std::move(trace);
        }
    };
    int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = static_cast<int>(std::min<size_t>(static_cast<size_t>(threads), jobs));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; i++) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }

    for (size_t a = 0; a < cfg.arms.size(); a++) {
        const auto &traces = out.traces[a];
        ArmSummary s;
        s.name = cfg.arms[a].name;
        s.policy = arm_configs[a].policy.to_string();
        s.shot_model = arm_configs[a].shots.to_string();
        for (int t = 0; t <= cfg.base.t_max; t++) {
            std::vector<double> w;
            for (const RunTrace &tr : traces) {
                w.push_back(tr.width_at(t));
            }
            s.width_by_round.push_back(quartiles(std::move(w)));
        }
        std::vector<double> t_eps, final_w, shots;
        for (const RunTrace &tr : traces) {
            t_eps.push_back(tr.t_epsilon ? static_cast<double>(*tr.t_epsilon)
                                         : std::numeric_limits<double>::infinity());
            final_w.push_back(tr.width_at(cfg.base.t_max));
            shots.push_back(static_cast<double>(tr.total_shots));
            s.failed += tr.t_epsilon ? 0 : 1;
            s.infeasible += tr.infeasible() ? 1 : 0;
            s.contains_truth += tr.contains_truth() ? 1 : 0;
            s.violations += static_cast<int>(tr.violations.size());
        }
        s.median_t_epsilon = quartiles(std::move(t_eps)).median;
        s.final_width = quartiles(std::move(final_w));
        s.median_total_shots = quartiles(std::move(shots)).median;
        out.arms.push_back(std::move(s));
    }
    return out;
}

}  // namespace stabcert
