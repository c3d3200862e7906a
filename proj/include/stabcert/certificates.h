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

#ifndef STABCERT_CERTIFICATES_H
#define STABCERT_CERTIFICATES_H

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stabcert/gf2.h"
#include "stabcert/syndrome.h"

namespace stabcert {

/// Generator expectations mu(a_i) measured in one gauge.
struct GaugeExpectations {
    Gauge gauge;
    std::vector<double> mu;

    void validate() const;
};

/// Closed-form certified interval from one gauge, optionally with Hoeffding slack.
struct OneGaugeCertificate {
    double lower = 0;
    double upper = 1;
    bool empirical = false;
    double epsilon = 0;
    /// Confidence endpoints; equal to lower/upper when epsilon is zero.
    double lower_conf = 0;
    double upper_conf = 1;
};

/// Success probability a = (1 + mu) / 2 of a +-1 observable.
inline double success_from_mu(double mu) {
    return (1 + mu) / 2;
}
inline double mu_from_success(double a) {
    return 2 * a - 1;
}

/// max{0, 1 - (1/2) sum (1 - mu_i)}.
double kkl_lower(std::span<const double> mu);
/// 1/2 + (1/2) min mu_i.
double kkl_upper(std::span<const double> mu);
/// min_i a_hat_i for empirical success frequencies.
double empirical_upper(std::span<const double> a_hat);
/// sqrt(ln(2n/delta) / (2m)).
double epsilon_from_shots(double m, int n, double delta);
/// ceil(ln(2n/delta) / (2 eps^2)).
int64_t shots_per_generator(double epsilon, int n, double delta);
/// min{1, u_hat + epsilon}.
double clipped_upper_certificate(double u_hat, double epsilon);

/// One-gauge interval; with `shots` = (m, delta) the estimates are treated as empirical and the
/// confidence endpoints carry the simultaneous Hoeffding slack of all n generators.
OneGaugeCertificate one_gauge_certificate(std::span<const double> mu,
                                          std::optional<std::pair<double, double>> shots = std::nullopt);

/// Distribution attaining the one-gauge upper endpoint: mass on the nested syndromes
/// 0, e_1, e_1+e_2, ... in gauge coordinates (ordered by increasing a_i), pulled back.
SyndromeDistribution nested_upper_witness(const GaugeExpectations &data);

}  // namespace stabcert

#endif
