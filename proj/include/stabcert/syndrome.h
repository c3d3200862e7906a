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

#ifndef STABCERT_SYNDROME_H
#define STABCERT_SYNDROME_H

#include <span>
#include <utility>
#include <vector>

#include "stabcert/gf2.h"

namespace stabcert {

class Rng;

/// Probability vector over the 2^n syndromes, indexed by syndrome encoding.
/// The target fidelity is the mass on the zero syndrome.
class SyndromeDistribution {
   public:
    /// Validates normalization (1e-12) and clamps entries in [-1e-12, 0) to zero.
    SyndromeDistribution(int n, std::vector<double> probs);

    /// Accepts solver output: negatives are clamped and the vector renormalized, provided the
    /// raw vector is a distribution to within `tolerance`.
    static SyndromeDistribution from_solver(int n, std::vector<double> probs, double tolerance = 1e-8);
    static SyndromeDistribution point_mass(int n, uint32_t syndrome);
    static SyndromeDistribution uniform(int n);

    int n() const {
        return n_;
    }
    size_t size() const {
        return probs_.size();
    }
    const std::vector<double> &probs() const {
        return probs_;
    }
    double operator[](size_t s) const {
        return probs_[s];
    }
    double fidelity() const {
        return probs_[0];
    }
    size_t support_size(double threshold = 0) const;

   private:
    int n_;
    std::vector<double> probs_;
};

/// Walsh coefficients p^(u) = sum_s (-1)^{u.s} p(s), indexed by label encoding.
struct WalshSpectrum {
    int n = 0;
    std::vector<double> values;

    double operator[](size_t u) const {
        return values[u];
    }
};

/// In-place unnormalized fast Walsh-Hadamard transform; data.size() must be a power of two.
void fwht_inplace(std::span<double> data);

WalshSpectrum walsh(const SyndromeDistribution &p);
WalshSpectrum walsh(int n, std::span<const double> values);
/// Inverse transform; returns the raw 2^n vector.
std::vector<double> inverse_walsh(const WalshSpectrum &spectrum);

/// Offset s0 plus the span of r independent labels.
struct AffineSupportSpec {
    int n = 0;
    Label s0;
    std::vector<Label> v_basis;

    void validate() const;
    /// True iff s0 lies in V, i.e. the support contains the zero syndrome.
    bool offset_in_subspace() const;
};

/// Mass 2^{-r} on each point of s0 + V.
SyndromeDistribution make_affine_support(const AffineSupportSpec &spec);

/// The three-qubit example: mass 1/4 on syndromes 000, 100, 010, 001.
SyndromeDistribution make_rho_ex();

/// Uniform sample from the simplex (symmetric Dirichlet with unit concentrations).
SyndromeDistribution sample_dirichlet_uniform(int n, Rng &rng);

/// p(0) = fidelity_target, the rest split by a Dirichlet(1,...,1) draw over k_errors distinct
/// nonzero syndromes chosen uniformly.
SyndromeDistribution make_sparse_error_state(int n, double fidelity_target, int k_errors, Rng &rng);

/// r independent rows drawn uniformly, redrawn until full rank.
std::vector<Label> sample_subspace_basis(int n, int r, Rng &rng);

/// Two distributions agreeing on every column of `gauge` with fidelities 1/2 and 0 (n >= 2).
std::pair<SyndromeDistribution, SyndromeDistribution> single_gauge_ambiguity_pair(const Gauge &gauge);

/// p_+- (s) = 2^{-n} (1 +- eta (-1)^{v.s}); the spectra differ only at v.
std::pair<SyndromeDistribution, SyndromeDistribution> worst_case_pair(Label v, double eta);

}  // namespace stabcert

#endif
