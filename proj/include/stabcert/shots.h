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

#ifndef STABCERT_SHOTS_H
#define STABCERT_SHOTS_H

#include <cstdint>
#include <string>
#include <string_view>

namespace stabcert {

class Rng;

enum class ShotMode { exact, finite };

/// Measurement model for newly queried labels. Finite mode estimates each label from N_s
/// +-1 outcomes and enters it into the LP as a Hoeffding band.
struct ShotModel {
    ShotMode mode = ShotMode::exact;
    int64_t shots = 0;
    double delta = 0.05;
    int t_max = 1;

    bool finite() const {
        return mode == ShotMode::finite;
    }
    void validate() const;
    /// Band half-width for this model and qubit count; 0 in exact mode.
    double radius(int n) const;

    /// Parses "exact" or "finite:Ns=10000,delta=0.05,Tmax=8" (keys in any order, all required).
    static ShotModel parse(std::string_view text);
    std::string to_string() const;
    bool operator==(const ShotModel &) const = default;
};

/// Mean of N_s outcomes X_j = +1 with probability (1 + mu_true) / 2, else -1.
double measure_label(double mu_true, int64_t shots, Rng &rng);

/// sqrt(2 ln(2 n T_max / delta) / N_s).
double hoeffding_radius(int64_t shots, int n, int t_max, double delta);

}  // namespace stabcert

#endif
