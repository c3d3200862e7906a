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

#include "stabcert/io.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace stabcert {

namespace {

const Json &require(const Json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ValidationError(std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

std::vector<double> number_array(const Json &j, const char *what) {
    if (!j.is_array()) {
        throw ValidationError(std::string(what) + " must be an array of numbers");
    }
    std::vector<double> out;
    for (const Json &x : j) {
        if (!x.is_number()) {
            throw ValidationError(std::string(what) + " must be an array of numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

int qubits_from_json(const Json &j) {
    const Json &n = require(j, "n");
    if (!n.is_number_integer()) {
        throw ValidationError("n must be an integer");
    }
    int value = n.get<int>();
    check_qubit_count(value);
    return value;
}

Json maybe_number(double x) {
    if (std::isfinite(x)) {
        return x;
    }
    return nullptr;
}

Json quartiles_to_json(const Quartiles &q) {
    return Json{{"q1", maybe_number(q.q1)}, {"median", maybe_number(q.median)}, {"q3", maybe_number(q.q3)}};
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    for (int precision = 15; precision <= 17; precision++) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) {
            break;
        }
    }
    return buf;
}

Json label_to_json(Label u) {
    return u.to_hex();
}

Label label_from_json(int n, const Json &j) {
    if (!j.is_string()) {
        throw ValidationError("labels are strings of the form u<hex>");
    }
    return Label::from_hex(n, j.get<std::string>());
}

Json gauge_to_json(const Gauge &g) {
    Json out = Json::array();
    for (const Label &a : g.columns()) {
        out.push_back(label_to_json(a));
    }
    return out;
}

Gauge gauge_from_json(const Json &j) {
    if (!j.is_array() || j.empty()) {
        throw ValidationError("a gauge is a nonempty array of labels");
    }
    int n = static_cast<int>(j.size());
    check_qubit_count(n);
    std::vector<Label> columns;
    for (const Json &x : j) {
        columns.push_back(label_from_json(n, x));
    }
    return Gauge(std::move(columns));
}

Json distribution_to_json(const SyndromeDistribution &p) {
    return Json{{"n", p.n()}, {"probs", p.probs()}};
}

SyndromeDistribution distribution_from_json(const Json &j) {
    int n = qubits_from_json(j);
    std::vector<double> probs = number_array(require(j, "probs"), "probs");
    if (probs.size() != (size_t{1} << n)) {
        throw DimensionError("probs must have 2^n entries");
    }
    return SyndromeDistribution(n, std::move(probs));
}

void write_distribution_csv(std::ostream &out, const SyndromeDistribution &p) {
    out << "syndrome_hex,prob\n";
    for (size_t s = 0; s < p.size(); s++) {
        out << Label(p.n(), static_cast<uint32_t>(s)).to_hex() << ',' << format_double(p[s]) << '\n';
    }
}

SyndromeDistribution read_distribution_csv(int n, std::istream &in) {
    check_qubit_count(n);
    std::vector<double> probs(size_t{1} << n, 0.0);
    std::vector<bool> seen(probs.size(), false);
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("empty distribution CSV");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw ValidationError("malformed distribution CSV row: " + line);
        }
        Label s = Label::from_hex(n, line.substr(0, comma));
        if (seen[s.bits()]) {
            throw ValidationError("duplicate syndrome in CSV: " + s.to_hex());
        }
        seen[s.bits()] = true;
        std::string value = line.substr(comma + 1);
        char *end = nullptr;
        probs[s.bits()] = std::strtod(value.c_str(), &end);
        if (value.empty() || (*end != '\0' && *end != '\r')) {
            throw ValidationError("bad probability in CSV: " + value);
        }
    }
    return SyndromeDistribution(n, std::move(probs));
}

Json spectrum_to_json(const WalshSpectrum &s) {
    return Json{{"n", s.n}, {"values", s.values}};
}

void write_spectrum_csv(std::ostream &out, const WalshSpectrum &s) {
    out << "label_hex,value\n";
    for (size_t u = 0; u < s.values.size(); u++) {
        out << Label(s.n, static_cast<uint32_t>(u)).to_hex() << ',' << format_double(s.values[u]) << '\n';
    }
}

Json constraints_to_json(const ConstraintSet &c) {
    Json list = Json::array();
    for (const auto &[u, w] : c.entries()) {
        Json entry{{"label", label_to_json(Label(c.n(), u))}};
        if (w.kind == ConstraintKind::exact) {
            entry["kind"] = "exact";
            entry["values"] = Json::array({w.lo});
        } else {
            entry["kind"] = "band";
            entry["values"] = Json::array({w.lo, w.hi});
        }
        list.push_back(std::move(entry));
    }
    return Json{{"n", c.n()}, {"constraints", std::move(list)}};
}

ConstraintSet constraints_from_json(const Json &j) {
    int n = qubits_from_json(j);
    ConstraintSet out(n);
    const Json &list = require(j, "constraints");
    if (!list.is_array()) {
        throw ValidationError("constraints must be an array");
    }
    for (const Json &entry : list) {
        Label u = label_from_json(n, require(entry, "label"));
        std::string kind = require(entry, "kind").get<std::string>();
        std::vector<double> values = number_array(require(entry, "values"), "values");
        if (kind == "exact" && values.size() == 1) {
            if (!(std::abs(values[0]) <= 1)) {
                throw ValidationError("exact value out of [-1, 1]");
            }
            out.add_exact(u, values[0]);
        } else if (kind == "band" && values.size() == 2) {
            if (!(values[0] <= values[1])) {
                throw ValidationError("band needs lo <= hi");
            }
            out.add_interval(u, values[0], values[1]);
        } else {
            throw ValidationError("constraint kind must be exact (1 value) or band (2 values)");
        }
    }
    return out;
}

Json endpoint_to_json(const EndpointResult &r, bool include_witnesses) {
    if (!r.solved()) {
        return Json{{"status", "infeasible"}};
    }
    Json out{{"status", "solved"}, {"L", r.lower}, {"U", r.upper}, {"width", r.width()}};
    if (include_witnesses) {
        out["witnesses"] = Json{{"lower", r.witness_lo->probs()}, {"upper", r.witness_hi->probs()}};
    }
    return out;
}

OneGaugeInput one_gauge_input_from_json(const Json &j) {
    OneGaugeInput in;
    in.mu = number_array(require(j, "mu"), "mu");
    if (in.mu.empty()) {
        throw ValidationError("mu must be nonempty");
    }
    check_qubit_count(static_cast<int>(in.mu.size()));
    if (j.contains("gauge")) {
        in.gauge = gauge_from_json(j.at("gauge"));
        if (in.gauge->n() != static_cast<int>(in.mu.size())) {
            throw DimensionError("gauge and mu lengths differ");
        }
    }
    bool has_m = j.contains("m"), has_delta = j.contains("delta");
    if (has_m != has_delta) {
        throw ValidationError("m and delta must be given together");
    }
    if (has_m) {
        if (!j.at("m").is_number() || !j.at("delta").is_number()) {
            throw ValidationError("m and delta must be numbers");
        }
        in.m = j.at("m").get<double>();
        in.delta = j.at("delta").get<double>();
    }
    return in;
}

Json one_gauge_to_json(const OneGaugeCertificate &c) {
    Json out{{"lower", c.lower}, {"upper", c.upper}};
    if (c.empirical) {
        out["epsilon"] = c.epsilon;
        out["lower_conf"] = c.lower_conf;
        out["upper_conf"] = c.upper_conf;
    }
    return out;
}

Json trace_to_json(const RunTrace &trace, bool timing) {
    Json rounds = Json::array();
    for (const RoundRecord &r : trace.rounds) {
        Json queried = Json::array(), added = Json::array();
        for (const Label &u : r.queried) {
            queried.push_back(label_to_json(u));
        }
        for (const Label &u : r.new_labels) {
            added.push_back(label_to_json(u));
        }
        Json row{{"t", r.t},
                 {"queried", std::move(queried)},
                 {"new_labels", std::move(added)},
                 {"measured", r.measured},
                 {"L", r.lower},
                 {"U", r.upper},
                 {"W", r.width},
                 {"D", r.disagreement_mass},
                 {"Delta", r.disagreement_max},
                 {"m", r.unqueried},
                 {"uniform_branch", r.uniform_branch}};
        if (timing) {
            row["wall_ms"] = r.wall_ms;
        }
        rounds.push_back(std::move(row));
    }
    Json out{{"n", trace.n},
             {"policy", trace.policy},
             {"shot_model", trace.shot_model},
             {"tiebreak", trace.tiebreak == Tiebreak::lexicographic ? "lexicographic" : "solver-default"},
             {"epsilon", trace.epsilon},
             {"radius", trace.radius},
             {"true_fidelity", trace.true_fidelity},
             {"stop", to_string(trace.stop)},
             {"t_epsilon", trace.t_epsilon ? Json(*trace.t_epsilon) : Json(nullptr)},
             {"total_shots", trace.total_shots},
             {"contains_truth", trace.contains_truth()},
             {"violations", trace.violations},
             {"rounds", std::move(rounds)}};
    return out;
}

void write_rounds_csv_header(std::ostream &out) {
    out << "trial,policy,t,L,U,W,m_t,D_t,new_labels\n";
}

void write_rounds_csv(std::ostream &out, int trial, const std::string &arm, const RunTrace &trace) {
    for (const RoundRecord &r : trace.rounds) {
        out << trial << ',' << arm << ',' << r.t << ',' << format_double(r.lower) << ',' << format_double(r.upper)
            << ',' << format_double(r.width) << ',' << r.unqueried << ',' << format_double(r.disagreement_mass) << ',';
        for (size_t i = 0; i < r.new_labels.size(); i++) {
            out << (i ? ";" : "") << r.new_labels[i].to_hex();
        }
        out << '\n';
    }
}

Json ensemble_to_json(const EnsembleResult &result) {
    Json arms = Json::array();
    for (const ArmSummary &s : result.arms) {
        Json widths = Json::array();
        for (const Quartiles &q : s.width_by_round) {
            widths.push_back(quartiles_to_json(q));
        }
        arms.push_back(Json{
            {"name", s.name},
            {"policy", s.policy},
            {"shot_model", s.shot_model},
            {"median_t_epsilon", std::isfinite(s.median_t_epsilon) ? Json(s.median_t_epsilon) : Json("not reached")},
            {"failed", s.failed},
            {"infeasible", s.infeasible},
            {"contains_truth", s.contains_truth},
            {"final_width", quartiles_to_json(s.final_width)},
            {"median_total_shots", s.median_total_shots},
            {"violations", s.violations},
            {"width_by_round", std::move(widths)},
        });
    }
    return Json{{"trials", result.trials}, {"t_max", result.t_max}, {"epsilon", result.epsilon}, {"arms", arms}};
}

}  // namespace stabcert
