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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "stabcert/gf2.h"
#include "stabcert/oracles.h"
#include "stabcert/rng.h"
#include "stabcert/syndrome.h"

namespace stabcert {
namespace {

std::vector<double> random_probs(int n, Rng &rng) {
    std::vector<double> p(size_t{1} << n);
    double total = 0;
    for (double &x : p) {
        x = rng.exponential();
        total += x;
    }
    for (double &x : p) {
        x /= total;
    }
    return p;
}

TEST(Distribution, ValidatesAndClamps) {
    EXPECT_THROW(SyndromeDistribution(2, {0.5, 0.5, 0.1, 0}), ValidationError);
    EXPECT_THROW(SyndromeDistribution(2, {0.5, 0.5, 0}), DimensionError);
    EXPECT_THROW(SyndromeDistribution(1, {1.1, -0.1}), ValidationError);
    SyndromeDistribution p(1, {1 + 5e-13, -5e-13});
    EXPECT_EQ(p[1], 0.0);
    EXPECT_DOUBLE_EQ(p.fidelity(), 1 + 5e-13);
}

TEST(Walsh, PointMassAtZero) {
    WalshSpectrum s = walsh(SyndromeDistribution::point_mass(5, 0));
    for (double v : s.values) {
        EXPECT_EQ(v, 1.0);
    }
}

TEST(Walsh, UniformDistribution) {
    WalshSpectrum s = walsh(SyndromeDistribution::uniform(6));
    EXPECT_NEAR(s[0], 1, 1e-15);
    for (size_t u = 1; u < s.values.size(); u++) {
        EXPECT_NEAR(s[u], 0, 1e-15);
    }
}

TEST(Walsh, RoundTrip) {
    Rng rng(7);
    for (int n = 1; n <= 12; n++) {
        std::vector<double> raw = random_probs(n, rng);
        SyndromeDistribution p(n, raw);
        std::vector<double> back = inverse_walsh(walsh(p));
        for (size_t s = 0; s < raw.size(); s++) {
            ASSERT_NEAR(back[s], raw[s], 1e-12);
        }
    }
}

TEST(Walsh, AgreesWithDoubleSum) {
    Rng rng(8);
    for (int n = 1; n <= 6; n++) {
        std::vector<double> raw = random_probs(n, rng);
        WalshSpectrum fast = walsh(SyndromeDistribution(n, raw));
        std::vector<double> slow = oracle::naive_walsh(n, raw);
        for (size_t u = 0; u < raw.size(); u++) {
            ASSERT_NEAR(fast[u], slow[u], 1e-12);
        }
    }
}

TEST(Walsh, SpectrumBounds) {
    Rng rng(9);
    for (int trial = 0; trial < 20; trial++) {
        WalshSpectrum s = walsh(sample_dirichlet_uniform(7, rng));
        EXPECT_NEAR(s[0], 1, 1e-12);
        for (double v : s.values) {
            EXPECT_LE(std::abs(v), 1 + 1e-12);
        }
    }
}

TEST(Affine, SpectrumIsSignedAnnihilatorIndicator) {
    Rng rng(10);
    for (int trial = 0; trial < 40; trial++) {
        int n = 2 + static_cast<int>(rng.uniform_below(7));
        int r = static_cast<int>(rng.uniform_below(n + 1));
        AffineSupportSpec spec{n, Label(n, static_cast<uint32_t>(rng.uniform_below(uint64_t{1} << n))),
                               sample_subspace_basis(n, r, rng)};
        WalshSpectrum s = walsh(make_affine_support(spec));
        for (uint32_t u = 0; u < (1u << n); u++) {
            Label lu(n, u);
            bool in_perp = true;
            for (Label v : spec.v_basis) {
                in_perp = in_perp && lu.dot(v) == 0;
            }
            double expected = in_perp ? (lu.dot(spec.s0) ? -1.0 : 1.0) : 0.0;
            ASSERT_NEAR(s[u], expected, 1e-12);
        }
    }
}

TEST(Affine, FullSpaceIsUniformAndTrivialSpaceIsPointMass) {
    int n = 4;
    SyndromeDistribution full = make_affine_support({n, Label(n, 0), Gauge::identity(n).columns()});
    for (double x : full.probs()) {
        EXPECT_NEAR(x, 1.0 / 16, 1e-15);
    }
    SyndromeDistribution point = make_affine_support({n, Label(n, 9), {}});
    EXPECT_EQ(point[9], 1.0);
    EXPECT_EQ(point.support_size(), 1u);
}

TEST(Affine, ThreeQubitPlane) {
    AffineSupportSpec spec{3, Label(3, 0), {Label::from_string("110"), Label::from_string("011")}};
    SyndromeDistribution p = make_affine_support(spec);
    for (const char *s : {"000", "110", "011", "101"}) {
        EXPECT_DOUBLE_EQ(p[Label::from_string(s).bits()], 0.25);
    }
    EXPECT_EQ(p.support_size(), 4u);
    EXPECT_DOUBLE_EQ(p.fidelity(), 0.25);
}

TEST(Affine, RejectsDependentBasis) {
    AffineSupportSpec spec{3, Label(3, 0), {Label(3, 3), Label(3, 5), Label(3, 6)}};
    EXPECT_THROW(make_affine_support(spec), ValidationError);
}

TEST(RhoEx, FidelityAndSpectrum) {
    SyndromeDistribution p = make_rho_ex();
    EXPECT_DOUBLE_EQ(p.fidelity(), 0.25);
    WalshSpectrum s = walsh(p);
    for (const char *u : {"100", "010", "001"}) {
        EXPECT_DOUBLE_EQ(s[Label::from_string(u).bits()], 0.5);
    }
    EXPECT_DOUBLE_EQ(s[Label::from_string("111").bits()], -0.5);
    for (const char *u : {"110", "101", "011"}) {
        EXPECT_DOUBLE_EQ(s[Label::from_string(u).bits()], 0.0);
    }
}

TEST(Dirichlet, OnSimplex) {
    Rng rng(12);
    SyndromeDistribution p = sample_dirichlet_uniform(8, rng);
    double total = std::accumulate(p.probs().begin(), p.probs().end(), 0.0);
    EXPECT_NEAR(total, 1, 1e-12);
    for (double x : p.probs()) {
        EXPECT_GT(x, 0);
    }
}

TEST(Dirichlet, MeanFidelity) {
    Rng rng(13);
    const int samples = 51;
    std::vector<double> f;
    for (int i = 0; i < samples; i++) {
        f.push_back(sample_dirichlet_uniform(8, rng).fidelity());
    }
    double mean = std::accumulate(f.begin(), f.end(), 0.0) / samples;
    // Beta(1, 255) marginal: variance = 255 / (256^2 * 257).
    double se = std::sqrt(255.0 / (256.0 * 256.0 * 257.0) / samples);
    EXPECT_NEAR(mean, 1.0 / 256, 3 * se);
}

TEST(Dirichlet, Deterministic) {
    Rng a(99), b(99);
    EXPECT_EQ(sample_dirichlet_uniform(6, a).probs(), sample_dirichlet_uniform(6, b).probs());
}

TEST(SparseError, FigureSettings) {
    Rng rng(14);
    for (int i = 0; i < 20; i++) {
        SyndromeDistribution p = make_sparse_error_state(8, 0.64, 5, rng);
        EXPECT_DOUBLE_EQ(p.fidelity(), 0.64);
        EXPECT_EQ(p.support_size(), 6u);
        WalshSpectrum s = walsh(p);
        EXPECT_NEAR(s[0], 1, 1e-12);
        for (double v : s.values) {
            EXPECT_LE(std::abs(v), 1 + 1e-12);
        }
    }
}

TEST(SparseError, SingleError) {
    Rng rng(15);
    SyndromeDistribution p = make_sparse_error_state(4, 0.5, 1, rng);
    EXPECT_EQ(p.support_size(), 2u);
    EXPECT_DOUBLE_EQ(p.fidelity(), 0.5);
}

TEST(SparseError, RejectsImpossibleCounts) {
    Rng rng(16);
    EXPECT_THROW(make_sparse_error_state(3, 0.5, 8, rng), ValidationError);
    EXPECT_THROW(make_sparse_error_state(3, 0.5, 0, rng), ValidationError);
    EXPECT_THROW(make_sparse_error_state(3, 1.0, 2, rng), ValidationError);
}

TEST(AmbiguityPair, AgreesOnGaugeColumns) {
    Rng rng(17);
    for (int n = 2; n <= 7; n++) {
        for (int trial = 0; trial < 10; trial++) {
            Gauge g = sample_uniform_gauge(n, rng);
            auto [p, q] = single_gauge_ambiguity_pair(g);
            EXPECT_DOUBLE_EQ(p.fidelity(), 0.5);
            EXPECT_DOUBLE_EQ(q.fidelity(), 0.0);
            WalshSpectrum sp = walsh(p), sq = walsh(q);
            for (Label a : g.columns()) {
                EXPECT_NEAR(sp[a.bits()], sq[a.bits()], 1e-12);
            }
        }
    }
}

TEST(WorstCasePair, DiffersOnlyAtDirection) {
    Rng rng(18);
    for (int n = 1; n <= 6; n++) {
        uint32_t v = 1 + static_cast<uint32_t>(rng.uniform_below((uint64_t{1} << n) - 1));
        double eta = 0.3;
        auto [plus, minus] = worst_case_pair(Label(n, v), eta);
        WalshSpectrum a = walsh(plus), b = walsh(minus);
        for (uint32_t u = 0; u < (1u << n); u++) {
            if (u != v) {
                EXPECT_NEAR(a[u], b[u], 1e-12);
            }
        }
        EXPECT_NEAR(plus.fidelity() - minus.fidelity(), std::ldexp(eta, 1 - n), 1e-12);
    }
}

TEST(SubspaceBasis, FullRank) {
    Rng rng(19);
    for (int r = 0; r <= 8; r++) {
        EXPECT_EQ(rank(sample_subspace_basis(8, r, rng)), r);
    }
}

}  // namespace
}  // namespace stabcert
