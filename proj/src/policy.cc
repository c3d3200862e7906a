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

#include "stabcert/policy.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "stabcert/rng.h"

namespace stabcert {

double DisagreementSpectrum::unqueried_mass(const LabelSet &queried) const {
    double total = 0;
    for (size_t u = 1; u < d.size(); u++) {
        if (!queried.contains(static_cast<uint32_t>(u))) {
            total += d[u];
        }
    }
    return total;
}

double DisagreementSpectrum::unqueried_max(const LabelSet &queried) const {
    double best = 0;
    for (size_t u = 1; u < d.size(); u++) {
        if (!queried.contains(static_cast<uint32_t>(u))) {
            best = std::max(best, d[u]);
        }
    }
    return best;
}

double DisagreementSpectrum::score(std::span<const Label> columns) const {
    double total = 0;
    for (const Label &a : columns) {
        total += d[a.bits()];
    }
    return total;
}

DisagreementSpectrum disagreement_spectrum(const SyndromeDistribution &p_lo, const SyndromeDistribution &p_hi) {
    if (p_lo.n() != p_hi.n()) {
        throw DimensionError("witness dimension mismatch");
    }
    std::vector<double> diff(p_hi.size());
    for (size_t s = 0; s < diff.size(); s++) {
        diff[s] = p_hi[s] - p_lo[s];
    }
    fwht_inplace(diff);
    DisagreementSpectrum out{p_lo.n(), std::move(diff)};
    out.d[0] = 0;
    for (double &x : out.d) {
        x = std::abs(x);
        if (x < kDisagreementFloor) {
            x = 0;
        }
    }
    return out;
}

void zero_queried(DisagreementSpectrum &d, const LabelSet &queried) {
    if (queried.n() != d.n) {
        throw DimensionError("queried set dimension mismatch");
    }
    for (size_t u = 1; u < d.d.size(); u++) {
        if (queried.contains(static_cast<uint32_t>(u))) {
            d.d[u] = 0;
        }
    }
}

PolicyChoice PolicyChoice::parse(std::string_view text) {
    if (text == "witness") {
        return {PolicyKind::witness, 0};
    }
    if (text == "uniform") {
        return {PolicyKind::uniform, 1};
    }
    if (text == "fine") {
        return {PolicyKind::fine, 0};
    }
    constexpr std::string_view prefix = "mixed:";
    if (text.substr(0, prefix.size()) == prefix) {
        std::string value(text.substr(prefix.size()));
        char *end = nullptr;
        double gamma = std::strtod(value.c_str(), &end);
        if (value.empty() || *end != '\0' || !(gamma >= 0 && gamma <= 1)) {
            throw ValidationError("mixed policy needs gamma in [0, 1]: " + std::string(text));
        }
        return {PolicyKind::mixed, gamma};
    }
    throw ValidationError("unknown policy: " + std::string(text));
}

std::string PolicyChoice::to_string() const {
    switch (kind) {
        case PolicyKind::witness:
            return "witness";
        case PolicyKind::uniform:
            return "uniform";
        case PolicyKind::fine:
            return "fine";
        case PolicyKind::mixed: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "mixed:%g", gamma);
            return buf;
        }
    }
    return "witness";
}

std::optional<Gauge> select_witness_gauge(const DisagreementSpectrum &d, const LabelSet &queried) {
    if (queried.covers_all_nonzero()) {
        return std::nullopt;
    }
    return Gauge(greedy_max_weight_basis(d.n, d.d, queried));
}

Gauge select_uniform_gauge(int n, Rng &rng) {
    return sample_uniform_gauge(n, rng);
}

MixedSelection select_mixed(double gamma, const DisagreementSpectrum &d, const LabelSet &queried, Rng &rng) {
    if (!(gamma >= 0 && gamma <= 1)) {
        throw ValidationError("gamma must lie in [0, 1]");
    }
    MixedSelection out;
    out.uniform_branch = rng.uniform01() < gamma;
    if (out.uniform_branch) {
        out.gauge = select_uniform_gauge(d.n, rng);
    } else {
        out.gauge = select_witness_gauge(d, queried);
    }
    return out;
}

std::optional<Label> select_single_label(const DisagreementSpectrum &d, const LabelSet &queried) {
    std::optional<Label> best;
    double best_value = -1;
    for (size_t u = 1; u < d.d.size(); u++) {
        if (!queried.contains(static_cast<uint32_t>(u)) && d.d[u] > best_value) {
            best_value = d.d[u];
            best = Label(d.n, static_cast<uint32_t>(u));
        }
    }
    return best;
}

}  // namespace stabcert
