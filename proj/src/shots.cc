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

#include "stabcert/shots.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "stabcert/gf2.h"
#include "stabcert/rng.h"

namespace stabcert {

void ShotModel::validate() const {
    if (mode == ShotMode::exact) {
        return;
    }
    if (shots < 1) {
        throw ValidationError("shot count must be at least 1");
    }
    if (!(delta > 0 && delta < 1)) {
        throw ValidationError("delta must lie in (0, 1)");
    }
    if (t_max < 1) {
        throw ValidationError("Tmax must be at least 1");
    }
}

double ShotModel::radius(int n) const {
    return finite() ? hoeffding_radius(shots, n, t_max, delta) : 0.0;
}

ShotModel ShotModel::parse(std::string_view text) {
    if (text == "exact") {
        return {};
    }
    constexpr std::string_view prefix = "finite:";
    if (text.substr(0, prefix.size()) != prefix) {
        throw ValidationError("unknown shot model: " + std::string(text));
    }
    ShotModel out;
    out.mode = ShotMode::finite;
    bool have_shots = false, have_delta = false, have_tmax = false;
    std::string_view rest = text.substr(prefix.size());
    while (!rest.empty()) {
        size_t comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        size_t eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("shot model field needs key=value: " + std::string(item));
        }
        std::string key(item.substr(0, eq));
        std::string value(item.substr(eq + 1));
        char *end = nullptr;
        double v = std::strtod(value.c_str(), &end);
        if (value.empty() || *end != '\0') {
            throw ValidationError("bad number in shot model: " + value);
        }
        if (key == "Ns") {
            // Accept 1e4 as well as 10000, but only integral values.
            if (v != std::floor(v) || v < 1 || v > 1e15) {
                throw ValidationError("Ns must be a positive integer");
            }
            out.shots = static_cast<int64_t>(v);
            have_shots = true;
        } else if (key == "delta") {
            out.delta = v;
            have_delta = true;
        } else if (key == "Tmax") {
            if (v != std::floor(v) || v < 1 || v > 1e9) {
                throw ValidationError("Tmax must be a positive integer");
            }
            out.t_max = static_cast<int>(v);
            have_tmax = true;
        } else {
            throw ValidationError("unknown shot model key: " + key);
        }
    }
    if (!have_shots || !have_delta || !have_tmax) {
        throw ValidationError("finite shot model needs Ns, delta and Tmax");
    }
    out.validate();
    return out;
}

std::string ShotModel::to_string() const {
    if (!finite()) {
        return "exact";
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "finite:Ns=%lld,delta=%g,Tmax=%d", static_cast<long long>(shots), delta, t_max);
    return buf;
}

double measure_label(double mu_true, int64_t shots, Rng &rng) {
    if (!(std::abs(mu_true) <= 1 + 1e-12)) {
        throw ValidationError("expectation must lie in [-1, 1]");
    }
    if (shots < 1) {
        throw ValidationError("shot count must be at least 1");
    }
    double plus_probability = std::clamp((1 + mu_true) / 2, 0.0, 1.0);
    int64_t plus = rng.binomial(shots, plus_probability);
    return (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) / static_cast<double>(shots);
}

double hoeffding_radius(int64_t shots, int n, int t_max, double delta) {
    if (shots < 1 || n < 1 || t_max < 1 || !(delta > 0 && delta < 1)) {
        throw ValidationError("hoeffding_radius: arguments out of range");
    }
    return std::sqrt(2 * std::log(2.0 * n * t_max / delta) / static_cast<double>(shots));
}

}  // namespace stabcert
