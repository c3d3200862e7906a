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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stabcert/certificates.h"
#include "stabcert/io.h"
#include "stabcert/oracles.h"
#include "stabcert/policy.h"
#include "stabcert/polytope.h"
#include "stabcert/rng.h"
#include "stabcert/runner.h"
#include "stabcert/shots.h"

namespace {

using namespace stabcert;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitSelftest = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raw option values shared by certify, fine and ensemble.
struct RunOptions {
    std::string config;
    int version = 1;
    int n = 8;
    std::string instance = "dirichlet";
    int rank = 4;
    std::string s0 = "zero";
    double fidelity = 0.64;
    int errors = 5;
    std::string distribution;
    std::string initial_gauge = "identity";
    std::vector<std::string> gauge;
    std::string policy = "witness";
    std::vector<std::string> policies{"witness", "uniform"};
    std::string shots = "exact";
    std::vector<std::string> shot_models{"exact"};
    double epsilon = 0.01;
    int t_max = 10;
    uint64_t seed = 0;
    uint64_t trial = 0;
    int trials = 51;
    std::string tiebreak = "solver-default";
    std::string assertions = "strict";
    std::string out = ".";
    int threads = 0;
    bool timing = false;
    bool witnesses = false;
};

void add_run_options(CLI::App *sub, RunOptions &o, bool ensemble) {
    sub->option_defaults()->always_capture_default();
    sub->add_option("--config", o.config, "Campaign config file (TOML); flags override its values")
        ->check(CLI::ExistingFile);
    sub->add_option("--version", o.version, "Config schema version")->check(CLI::IsMember({1}));
    sub->add_option("--n", o.n, "Qubit count")->check(CLI::Range(1, kMaxQubits));
    sub->add_option("--instance", o.instance, "affine | dirichlet | sparse | explicit | rho_ex")
        ->check(CLI::IsMember({"affine", "dirichlet", "sparse", "explicit", "rho_ex"}));
    sub->add_option("--rank", o.rank, "Subspace dimension r of affine instances");
    sub->add_option("--s0", o.s0, "Affine offset: zero | outside | u<hex>");
    sub->add_option("--fidelity", o.fidelity, "Fidelity of sparse instances");
    sub->add_option("--errors", o.errors, "Nonzero error syndromes of sparse instances");
    sub->add_option("--distribution", o.distribution, "JSON or CSV distribution for explicit instances");
    sub->add_option("--initial-gauge", o.initial_gauge, "identity | uniform | explicit")
        ->check(CLI::IsMember({"identity", "uniform", "explicit"}));
    sub->add_option("--gauge", o.gauge, "Columns u<hex> of the explicit initial gauge");
    if (ensemble) {
        sub->add_option("--policies", o.policies, "Policies compared in the ensemble");
        sub->add_option("--shot-models", o.shot_models, "Shot models compared in the ensemble");
        sub->add_option("--trials", o.trials, "Number of random instances")->check(CLI::PositiveNumber);
        sub->add_option("--threads", o.threads, "Worker threads (0 = available parallelism)")
            ->check(CLI::NonNegativeNumber);
    } else {
        sub->add_option("--policy", o.policy, "witness | uniform | mixed:<gamma> | fine");
        sub->add_option("--shots", o.shots, "exact | finite:Ns=<N>,delta=<d>,Tmax=<T>");
        sub->add_option("--trial", o.trial, "Trial index selecting the rng streams");
        sub->add_flag("--witnesses", o.witnesses, "Include terminal witnesses in summary.json");
    }
    sub->add_option("--epsilon", o.epsilon, "Stop once the width is at most epsilon")->check(CLI::NonNegativeNumber);
    sub->add_option("--t-max", o.t_max, "Round cap")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--tiebreak", o.tiebreak, "solver-default | lexicographic")
        ->check(CLI::IsMember({"solver-default", "lexicographic"}));
    sub->add_option("--assertions", o.assertions, "off | record | strict")
        ->check(CLI::IsMember({"off", "record", "strict"}));
    sub->add_option("--out", o.out, "Output directory");
    sub->add_flag("--timing", o.timing, "Include wall times in the output");
}

// Fills options not given on the command line from the config file, then checks required ones.
void apply_config(CLI::App &sub, const std::string &path) {
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot open config " + path);
        }
        std::vector<CLI::ConfigItem> items;
        try {
            items = CLI::ConfigTOML().from_config(in);
        } catch (const CLI::ParseError &e) {
            throw ConfigError(path + ": " + e.what());
        }
        for (const CLI::ConfigItem &item : items) {
            if (!item.parents.empty()) {
                throw ConfigError(path + ": sections are not supported ([" + item.parents.front() + "])");
            }
            CLI::Option *opt = item.name == "config" ? nullptr : sub.get_option_no_throw("--" + item.name);
            if (opt == nullptr) {
                throw ConfigError(path + ": unknown key '" + item.name + "'");
            }
            if (opt->count() > 0) {
                continue;
            }
            try {
                opt->add_result(item.inputs);
                opt->run_callback();
            } catch (const CLI::ParseError &e) {
                throw ConfigError(path + ": " + item.name + ": " + e.what());
            }
        }
    }
    if (sub.get_option("--seed")->count() == 0) {
        throw ConfigError("seed is required (flag --seed or config key seed)");
    }
}

SyndromeDistribution load_distribution(const std::string &path, int n) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open distribution file " + path);
    }
    if (std::filesystem::path(path).extension() == ".csv") {
        return read_distribution_csv(n, in);
    }
    return distribution_from_json(Json::parse(in));
}

RunConfig build_run_config(const RunOptions &o) {
    RunConfig cfg;
    cfg.n = o.n;
    cfg.epsilon = o.epsilon;
    cfg.t_max = o.t_max;
    cfg.seed = o.seed;
    cfg.trial = o.trial;
    cfg.policy = PolicyChoice::parse(o.policy);
    cfg.shots = ShotModel::parse(o.shots);
    cfg.tiebreak = o.tiebreak == "lexicographic" ? Tiebreak::lexicographic : Tiebreak::solver_default;
    cfg.assertions = o.assertions == "off"      ? AssertionLevel::off
                     : o.assertions == "record" ? AssertionLevel::record
                                                : AssertionLevel::strict;

    InstanceSpec &spec = cfg.instance;
    if (o.instance == "affine") {
        spec.kind = InstanceKind::affine;
        spec.rank = o.rank;
        if (o.s0 == "zero") {
            spec.offset = OffsetMode::zero;
        } else if (o.s0 == "outside") {
            spec.offset = OffsetMode::outside;
        } else {
            spec.offset = OffsetMode::explicit_label;
            spec.s0 = Label::from_hex(o.n, o.s0).bits();
        }
    } else if (o.instance == "dirichlet") {
        spec.kind = InstanceKind::dirichlet;
    } else if (o.instance == "sparse") {
        spec.kind = InstanceKind::sparse;
        spec.fidelity = o.fidelity;
        spec.errors = o.errors;
    } else if (o.instance == "rho_ex") {
        spec.kind = InstanceKind::rho_ex;
        cfg.n = 3;
    } else {
        if (o.distribution.empty()) {
            throw ConfigError("instance = explicit needs distribution = <file>");
        }
        spec.kind = InstanceKind::explicit_distribution;
        spec.distribution = load_distribution(o.distribution, o.n);
        cfg.n = spec.distribution->n();
    }

    if (o.initial_gauge == "uniform") {
        cfg.initial = InitialGaugeKind::uniform;
    } else if (o.initial_gauge == "explicit") {
        Json columns = Json::array();
        for (const std::string &g : o.gauge) {
            columns.push_back(g);
        }
        cfg.initial = InitialGaugeKind::explicit_gauge;
        cfg.initial_gauge = gauge_from_json(columns);
    } else if (!o.gauge.empty()) {
        throw ConfigError("gauge columns given but initial-gauge is not explicit");
    }
    cfg.validate();
    return cfg;
}

std::filesystem::path prepare_output(const std::string &dir, const CLI::App &sub) {
    std::filesystem::path out(dir);
    std::filesystem::create_directories(out);
    std::ofstream echo(out / "config.echo");
    echo << "# " << sub.get_name() << "\n";
    std::istringstream lines(sub.config_to_str(true, false));
    for (std::string line; std::getline(lines, line);) {
        // The echo must load as a config itself, which has no config key.
        if (line.rfind("config=", 0) != 0) {
            echo << line << "\n";
        }
    }
    return out;
}

void write_json(const std::filesystem::path &path, const Json &j) {
    std::ofstream f(path);
    f << j.dump(2) << "\n";
}

int cmd_one_gauge(const std::string &input_path) {
    std::ifstream in(input_path);
    if (!in) {
        throw ConfigError("cannot open " + input_path);
    }
    OneGaugeInput input = one_gauge_input_from_json(Json::parse(in));
    std::optional<std::pair<double, double>> stats;
    if (input.m) {
        stats = std::make_pair(*input.m, *input.delta);
    }
    OneGaugeCertificate cert = one_gauge_certificate(input.mu, stats);
    std::cout << one_gauge_to_json(cert).dump(2) << "\n";
    return kExitOk;
}

int cmd_certify(const RunOptions &o, CLI::App &sub, bool fine) {
    apply_config(sub, o.config);
    RunOptions opts = o;
    if (fine) {
        opts.policy = "fine";
    }
    RunConfig cfg = build_run_config(opts);
    Rng instance_rng = Rng::derive(cfg.seed, {cfg.trial, 0});
    Instance instance = make_instance(cfg.n, cfg.instance, instance_rng);
    RunTrace trace = run_config(cfg, instance);

    std::filesystem::path out = prepare_output(o.out, sub);
    Json summary = trace_to_json(trace, o.timing);
    if (o.witnesses && !trace.rounds.empty() && !trace.infeasible()) {
        // Re-solve the terminal constraint set to report its witnesses.
        ConstraintSet c(cfg.n);
        WalshSpectrum truth = walsh(instance.p);
        for (const RoundRecord &r : trace.rounds) {
            for (size_t i = 0; i < r.new_labels.size(); i++) {
                if (cfg.shots.finite()) {
                    c.add_band(r.new_labels[i], r.measured[i], trace.radius);
                } else {
                    c.add_exact(r.new_labels[i], truth[r.new_labels[i].bits()]);
                }
            }
        }
        summary["terminal"] = endpoint_to_json(solve_endpoints(c, cfg.tiebreak), true);
    }
    write_json(out / "summary.json", summary);
    std::ofstream rounds(out / "rounds.csv");
    write_rounds_csv_header(rounds);
    write_rounds_csv(rounds, static_cast<int>(cfg.trial), trace.policy, trace);

    std::printf("stop=%s rounds=%zu", to_string(trace.stop).c_str(), trace.rounds.size());
    if (!trace.rounds.empty()) {
        std::printf(" L=%.9f U=%.9f W=%.9f", trace.last().lower, trace.last().upper, trace.last().width);
    }
    std::printf("\n");
    return trace.infeasible() ? kExitInfeasible : kExitOk;
}

int cmd_ensemble(const RunOptions &o, CLI::App &sub) {
    apply_config(sub, o.config);
    RunOptions base = o;
    base.policy = "witness";
    base.shots = "exact";
    EnsembleConfig ec;
    ec.base = build_run_config(base);
    ec.trials = o.trials;
    ec.threads = o.threads;
    if (o.policies.empty() || o.shot_models.empty()) {
        throw ConfigError("an ensemble needs at least one policy and one shot model");
    }
    for (const std::string &p : o.policies) {
        for (const std::string &s : o.shot_models) {
            Arm arm{p, PolicyChoice::parse(p), ShotModel::parse(s)};
            if (o.shot_models.size() > 1) {
                arm.name += "/" + arm.shots.to_string();
            }
            ec.arms.push_back(arm);
        }
    }
    EnsembleResult result = run_ensemble(ec);

    std::filesystem::path out = prepare_output(o.out, sub);
    write_json(out / "summary.json", ensemble_to_json(result));
    std::ofstream rounds(out / "rounds.csv");
    write_rounds_csv_header(rounds);
    for (size_t a = 0; a < result.traces.size(); a++) {
        for (int trial = 0; trial < result.trials; trial++) {
            write_rounds_csv(rounds, trial, result.arms[a].name, result.traces[a][trial]);
        }
    }

    std::printf("%-44s %10s %8s %12s %10s\n", "arm", "median T", "failed", "final W", "contains");
    int infeasible = 0;
    for (const ArmSummary &s : result.arms) {
        char t_eps[32];
        if (std::isfinite(s.median_t_epsilon)) {
            std::snprintf(t_eps, sizeof(t_eps), "%g", s.median_t_epsilon);
        } else {
            std::snprintf(t_eps, sizeof(t_eps), "not reached");
        }
        std::printf("%-44s %10s %5d/%-2d %12.5f %7d/%-2d\n", s.name.c_str(), t_eps, s.failed, result.trials,
                    s.final_width.median, s.contains_truth, result.trials);
        infeasible += s.infeasible;
    }
    return infeasible > 0 ? kExitInfeasible : kExitOk;
}

int cmd_selftest(uint64_t seed) {
    oracle::Report report = oracle::run_selftest(seed);
    for (const std::string &line : report.lines) {
        std::printf("%s\n", line.c_str());
    }
    std::printf("%d failure(s)\n", report.failures);
    return report.failures == 0 ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Certified fidelity intervals for stabilizer states from gauge expectation data"};
    app.require_subcommand(1);

    std::string one_gauge_input;
    CLI::App *one_gauge = app.add_subcommand("one-gauge", "Closed-form one-gauge certificate from a JSON input");
    one_gauge->add_option("input", one_gauge_input, "JSON file with mu and optional m, delta")->required();

    RunOptions certify_opts, fine_opts, ensemble_opts;
    CLI::App *certify = app.add_subcommand("certify", "Run the adaptive gauge-level certification loop");
    add_run_options(certify, certify_opts, false);
    CLI::App *fine = app.add_subcommand("fine", "Run the fine-grained single-label loop");
    add_run_options(fine, fine_opts, false);
    CLI::App *ensemble = app.add_subcommand("ensemble", "Monte-Carlo benchmark over random instances");
    add_run_options(ensemble, ensemble_opts, true);

    uint64_t selftest_seed = 1;
    CLI::App *selftest = app.add_subcommand("selftest", "Brute-force oracle checks for n <= 4");
    selftest->add_option("--seed", selftest_seed, "Seed for the random cases");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*one_gauge) {
            return cmd_one_gauge(one_gauge_input);
        }
        if (*certify) {
            return cmd_certify(certify_opts, *certify, false);
        }
        if (*fine) {
            return cmd_certify(fine_opts, *fine, true);
        }
        if (*ensemble) {
            return cmd_ensemble(ensemble_opts, *ensemble);
        }
        if (*selftest) {
            return cmd_selftest(selftest_seed);
        }
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    } catch (const Json::exception &e) {
        std::fprintf(stderr, "error: malformed JSON: %s\n", e.what());
        return kExitConfig;
    } catch (const AssertionViolation &e) {
        std::fprintf(stderr, "assertion violated: %s\n", e.what());
        return 1;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
