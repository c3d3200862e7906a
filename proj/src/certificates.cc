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

#include "stabcert/certificates.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace stabcert {

namespace {

void check_mu(std::span<const double> mu) {
    if (mu.empty()) {
        throw ValidationError("need at least one generator expectation");
    }
    for (double m : mu) {
        if (!(m >= -1 && m <= 1)) {
            throw ValidationError("generator expectation outside [-1, 1]");
        }
    }
}

void check_confidence_args(int n, double delta) {
    if (n < 1) {
        throw ValidationError("generator count must be positive");
    }
    if (!(delta > 0 && delta < 1)) {
        throw ValidationError("failure probability must lie in (0, 1)");
    }
}

}  // namespace

void GaugeExpectations::validate() const {
    if (static_cast<int>(mu.size()) != gauge.n()) {
        throw DimensionError("need one expectation per gauge column");
    }
    check_mu(mu);
}

double kkl_lower(std::span<const double> mu) {
    check_mu(mu);
    double deficit = 0;
    for (double m : mu) {
        deficit += 1 - m;
    }
    return std::max(0.0, 1 - deficit / 2);
}

double kkl_upper(std::span<const double> mu) {
    check_mu(mu);
    return 0.5 + 0.5 * *std::min_element(mu.begin(), mu.end());
}

double empirical_upper(std::span<const double> a_hat) {
    if (a_hat.empty()) {
        throw ValidationError("need at least one success frequency");
    }
    for (double a : a_hat) {
        if (!(a >= 0 && a <= 1)) {
            throw ValidationError("success frequency outside [0, 1]");
        }
    }
    return *std::min_element(a_hat.begin(), a_hat.end());
}

double epsilon_from_shots(double m, int n, double delta) {
    check_confidence_args(n, delta);
    if (!(m > 0)) {
        throw ValidationError("sample count must be positive");
    }
    return std::sqrt(std::log(2.0 * n / delta) / (2 * m));
}

int64_t shots_per_generator(double epsilon, int n, double delta) {
    check_confidence_args(n, delta);
    if (!(epsilon > 0)) {
        throw ValidationError("accuracy must be positive");
    }
    return static_cast<int64_t>(std::ceil(std::log(2.0 * n / delta) / (2 * epsilon * epsilon)));
}

double clipped_upper_certificate(double u_hat, double epsilon) {
    return std::min(1.0, u_hat + epsilon);
}

OneGaugeCertificate one_gauge_certificate(std::span<const double> mu, std::optional<std::pair<double, double>> shots) {
    OneGaugeCertificate cert;
    cert.lower = kkl_lower(mu);
    cert.upper = kkl_upper(mu);
    cert.lower_conf = cert.lower;
    cert.upper_conf = cert.upper;
    if (shots) {
        int n = static_cast<int>(mu.size());
        std::vector<double> a_hat(mu.size());
        std::transform(mu.begin(), mu.end(), a_hat.begin(), success_from_mu);
        cert.empirical = true;
        cert.epsilon = epsilon_from_shots(shots->first, n, shots->second);
        cert.upper_conf = clipped_upper_certificate(empirical_upper(a_hat), cert.epsilon);
        // On the event max_i |a_hat_i - a_i| <= eps the lower formula moves by at most n eps.
        cert.lower_conf = std::max(0.0, cert.lower - n * cert.epsilon);
    }
    return cert;
}

SyndromeDistribution nested_upper_witness(const GaugeExpectations &data) {
    data.validate();
    int n = data.gauge.n();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return data.mu[i] < data.mu[j]; });

    std::vector<double> p(size_t{1} << n, 0.0);
    uint32_t coords = 0;
    double prev = 0;
    for (int k = 0; k < n; k++) {
        double a = success_from_mu(data.mu[order[k]]);
        p[data.gauge.from_gauge_coordinates(Label(n, coords)).bits()] += a - prev;
        prev = a;
        coords |= 1u << order[k];
    }
    p[data.gauge.from_gauge_coordinates(Label(n, coords)).bits()] += 1 - prev;
    return SyndromeDistribution(n, std::move(p));
}

}  // namespace stabcert
