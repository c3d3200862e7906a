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

#ifndef STABCERT_POLICY_H
#define STABCERT_POLICY_H

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stabcert/gf2.h"
#include "stabcert/syndrome.h"

namespace stabcert {

class Rng;

/// Disagreements below this are treated as exact zeros, so that solver round-off cannot decide
/// a weight tie.
inline constexpr double kDisagreementFloor = 1e-10;

/// d(u) = |p^+^(u) - p^-^(u)| for every label; entry 0 is always zero.
struct DisagreementSpectrum {
    int n = 0;
    std::vector<double> d;

    double operator[](size_t u) const {
        return d[u];
    }
    /// D_t: the sum of d over unqueried nonzero labels.
    double unqueried_mass(const LabelSet &queried) const;
    /// Delta_t: the largest d over unqueried nonzero labels (0 if none remain).
    double unqueried_max(const LabelSet &queried) const;
    /// Phi(A): the sum of d over the given columns.
    double score(std::span<const Label> columns) const;
};

DisagreementSpectrum disagreement_spectrum(const SyndromeDistribution &p_lo, const SyndromeDistribution &p_hi);

/// Sets d(u) = 0 on queried labels. With exact data this only removes round-off; with interval
/// data it keeps the selection rule from preferring labels that will not be measured again.
void zero_queried(DisagreementSpectrum &d, const LabelSet &queried);

enum class PolicyKind { witness, uniform, mixed, fine };

struct PolicyChoice {
    PolicyKind kind = PolicyKind::witness;
    /// Probability of the uniform branch; only meaningful for mixed.
    double gamma = 0;

    /// Parses "witness", "uniform", "mixed:<gamma>" or "fine".
    static PolicyChoice parse(std::string_view text);
    std::string to_string() const;
    bool operator==(const PolicyChoice &) const = default;
};

/// Maximum-weight gauge under d, ties broken unqueried-first. Returns nullopt when every nonzero
/// label is already queried.
std::optional<Gauge> select_witness_gauge(const DisagreementSpectrum &d, const LabelSet &queried);

/// History-independent uniform gauge.
Gauge select_uniform_gauge(int n, Rng &rng);

struct MixedSelection {
    std::optional<Gauge> gauge;
    bool uniform_branch = false;
};

/// Uniform gauge with probability gamma, witness gauge otherwise. The branch is drawn before any
/// gauge sampling.
MixedSelection select_mixed(double gamma, const DisagreementSpectrum &d, const LabelSet &queried, Rng &rng);

/// Unqueried label with the largest d, ties by ascending encoding. nullopt at full coverage.
std::optional<Label> select_single_label(const DisagreementSpectrum &d, const LabelSet &queried);

}  // namespace stabcert

#endif
