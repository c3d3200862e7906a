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

#include "stabcert/syndrome.h"

#include <cmath>
#include <numeric>
#include <string>

#include "stabcert/rng.h"

namespace stabcert {

namespace {

constexpr double kNormTolerance = 1e-12;

}  // namespace

SyndromeDistribution::SyndromeDistribution(int n, std::vector<double> probs) : n_(n), probs_(std::move(probs)) {
    check_qubit_count(n);
    if (probs_.size() != (size_t{1} << n)) {
        throw DimensionError("distribution must have 2^n entries");
    }
    double total = 0;
    for (double &x : probs_) {
        if (!std::isfinite(x) || x < -kNormTolerance) {
            throw ValidationError("distribution entry is negative or not finite");
        }
        if (x < 0) {
            x = 0;
        }
        total += x;
    }
    if (std::abs(total - 1) > kNormTolerance * std::max<double>(1, probs_.size() / 64.0)) {
        throw ValidationError("distribution does not sum to one (sum=" + std::to_string(total) + ")");
    }
}

SyndromeDistribution SyndromeDistribution::from_solver(int n, std::vector<double> probs, double tolerance) {
    double total = 0;
    for (double &x : probs) {
        if (x < -tolerance) {
            throw ValidationError("solver output has a significantly negative entry");
        }
        x = std::max(x, 0.0);
        total += x;
    }
    if (std::abs(total - 1) > tolerance * static_cast<double>(probs.size())) {
        throw ValidationError("solver output is not normalized");
    }
    for (double &x : probs) {
        x /= total;
    }
    return SyndromeDistribution(n, std::move(probs));
}

SyndromeDistribution SyndromeDistribution::point_mass(int n, uint32_t syndrome) {
    check_qubit_count(n);
    std::vector<double> p(size_t{1} << n, 0.0);
    p.at(syndrome) = 1;
    return SyndromeDistribution(n, std::move(p));
}

SyndromeDistribution SyndromeDistribution::uniform(int n) {
    check_qubit_count(n);
    size_t size = size_t{1} << n;
    return SyndromeDistribution(n, std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

size_t SyndromeDistribution::support_size(double threshold) const {
    size_t k = 0;
    for (double x : probs_) {
        k += x > threshold;
    }
    return k;
}

void fwht_inplace(std::span<double> data) {
    size_t size = data.size();
    if (size == 0 || (size & (size - 1)) != 0) {
        throw DimensionError("Walsh transform length must be a power of two");
    }
    for (size_t half = 1; half < size; half <<= 1) {
        for (size_t block = 0; block < size; block += half << 1) {
            for (size_t i = block; i < block + half; i++) {
                double a = data[i];
                double b = data[i + half];
                data[i] = a + b;
                data[i + half] = a - b;
            }
        }
    }
}

WalshSpectrum walsh(int n, std::span<const double> values) {
    if (values.size() != (size_t{1} << n)) {
        throw DimensionError("Walsh input must have 2^n entries");
    }
    WalshSpectrum out{n, std::vector<double>(values.begin(), values.end())};
    fwht_inplace(out.values);
    return out;
}

WalshSpectrum walsh(const SyndromeDistribution &p) {
    return walsh(p.n(), p.probs());
}

std::vector<double> inverse_walsh(const WalshSpectrum &spectrum) {
    std::vector<double> out = spectrum.values;
    fwht_inplace(out);
    double scale = 1.0 / static_cast<double>(out.size());
    for (double &x : out) {
        x *= scale;
    }
    return out;
}

void AffineSupportSpec::validate() const {
    check_qubit_count(n);
    if (s0.n() != n) {
        throw DimensionError("affine offset dimension mismatch");
    }
    if (static_cast<int>(v_basis.size()) > n) {
        throw ValidationError("affine subspace basis has more than n vectors");
    }
    for (const Label &v : v_basis) {
        if (v.n() != n) {
            throw DimensionError("affine basis dimension mismatch");
        }
    }
    if (rank(v_basis) != static_cast<int>(v_basis.size())) {
        throw ValidationError("affine subspace basis is linearly dependent");
    }
}

bool AffineSupportSpec::offset_in_subspace() const {
    Gf2Basis basis(n);
    for (const Label &v : v_basis) {
        basis.insert(v.bits());
    }
    return basis.contains(s0.bits());
}

SyndromeDistribution make_affine_support(const AffineSupportSpec &spec) {
    spec.validate();
    size_t r = spec.v_basis.size();
    std::vector<double> p(size_t{1} << spec.n, 0.0);
    double mass = std::ldexp(1.0, -static_cast<int>(r));
    for (uint64_t combo = 0; combo < (uint64_t{1} << r); combo++) {
        uint32_t s = spec.s0.bits();
        for (size_t k = 0; k < r; k++) {
            if ((combo >> k) & 1u) {
                s ^= spec.v_basis[k].bits();
            }
        }
        p[s] = mass;
    }
    return SyndromeDistribution(spec.n, std::move(p));
}

SyndromeDistribution make_rho_ex() {
    std::vector<double> p(8, 0.0);
    for (const char *s : {"000", "100", "010", "001"}) {
        p[Label::from_string(s).bits()] = 0.25;
    }
    return SyndromeDistribution(3, std::move(p));
}

SyndromeDistribution sample_dirichlet_uniform(int n, Rng &rng) {
    check_qubit_count(n);
    std::vector<double> p(size_t{1} << n);
    double total = 0;
    for (double &x : p) {
        x = rng.exponential();
        total += x;
    }
    for (double &x : p) {
        x /= total;
    }
    return SyndromeDistribution(n, std::move(p));
}

SyndromeDistribution make_sparse_error_state(int n, double fidelity_target, int k_errors, Rng &rng) {
    check_qubit_count(n);
    if (!(fidelity_target > 0 && fidelity_target < 1)) {
        throw ValidationError("sparse error state fidelity must lie in (0, 1)");
    }
    uint64_t nonzero = (uint64_t{1} << n) - 1;
    if (k_errors < 1 || static_cast<uint64_t>(k_errors) > nonzero) {
        throw ValidationError("sparse error state needs 1 <= k_errors <= 2^n - 1");
    }
    std::vector<uint32_t> chosen;
    LabelSet taken(n);
    while (chosen.size() < static_cast<size_t>(k_errors)) {
        auto s = static_cast<uint32_t>(1 + rng.uniform_below(nonzero));
        if (taken.insert(Label(n, s))) {
            chosen.push_back(s);
        }
    }
    std::vector<double> weights(k_errors);
    double total = 0;
    for (double &w : weights) {
        w = rng.exponential();
        total += w;
    }
    std::vector<double> p(size_t{1} << n, 0.0);
    p[0] = fidelity_target;
    for (int k = 0; k < k_errors; k++) {
        p[chosen[k]] = (1 - fidelity_target) * weights[k] / total;
    }
    return SyndromeDistribution(n, std::move(p));
}

std::vector<Label> sample_subspace_basis(int n, int r, Rng &rng) {
    check_qubit_count(n);
    if (r < 0 || r > n) {
        throw ValidationError("subspace dimension must lie in [0, n]");
    }
    uint64_t space = uint64_t{1} << n;
    while (true) {
        std::vector<Label> rows;
        for (int i = 0; i < r; i++) {
            rows.emplace_back(n, static_cast<uint32_t>(rng.uniform_below(space)));
        }
        if (rank(rows) == r) {
            return rows;
        }
    }
}

std::pair<SyndromeDistribution, SyndromeDistribution> single_gauge_ambiguity_pair(const Gauge &gauge) {
    int n = gauge.n();
    if (n < 2) {
        throw ValidationError("ambiguity pair needs n >= 2");
    }
    // In gauge coordinates: p~ = (delta_0 + delta_{e1+e2})/2, q~ = (delta_{e1} + delta_{e2})/2.
    size_t size = size_t{1} << n;
    std::vector<double> p(size, 0.0), q(size, 0.0);
    auto place = [&](std::vector<double> &dist, uint32_t coords) {
        dist[gauge.from_gauge_coordinates(Label(n, coords)).bits()] += 0.5;
    };
    place(p, 0b00);
    place(p, 0b11);
    place(q, 0b01);
    place(q, 0b10);
    return {SyndromeDistribution(n, std::move(p)), SyndromeDistribution(n, std::move(q))};
}

std::pair<SyndromeDistribution, SyndromeDistribution> worst_case_pair(Label v, double eta) {
    if (v.is_zero()) {
        throw ValidationError("worst-case pair needs a nonzero direction");
    }
    if (!(eta > 0 && eta <= 1)) {
        throw ValidationError("worst-case pair needs eta in (0, 1]");
    }
    int n = v.n();
    size_t size = size_t{1} << n;
    double base = 1.0 / static_cast<double>(size);
    std::vector<double> plus(size), minus(size);
    for (uint32_t s = 0; s < size; s++) {
        double sign = popcount_parity(v.bits() & s) ? -1.0 : 1.0;
        plus[s] = base * (1 + eta * sign);
        minus[s] = base * (1 - eta * sign);
    }
    return {SyndromeDistribution(n, std::move(plus)), SyndromeDistribution(n, std::move(minus))};
}

}  // namespace stabcert
