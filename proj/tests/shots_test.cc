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
#include <vector>

#include "stabcert/rng.h"
#include "stabcert/shots.h"
#include "stabcert/syndrome.h"

namespace stabcert {
namespace {

TEST(MeasureLabel, DegenerateExpectations) {
    Rng rng(1);
    for (int i = 0; i < 50; i++) {
        EXPECT_EQ(measure_label(1, 1000, rng), 1.0);
        EXPECT_EQ(measure_label(-1, 1000, rng), -1.0);
    }
    EXPECT_THROW(measure_label(1.5, 10, rng), ValidationError);
    EXPECT_THROW(measure_label(0, 0, rng), ValidationError);
}

TEST(MeasureLabel, BinomialMoments) {
    Rng rng(2);
    const int repeats = 200;
    const int64_t shots = 100000;
    std::vector<double> xs;
    for (int i = 0; i < repeats; i++) {
        double x = measure_label(0, shots, rng);
        EXPECT_GE(x, -1);
        EXPECT_LE(x, 1);
        xs.push_back(x);
    }
    double mean = 0;
    for (double x : xs) {
        mean += x / repeats;
    }
    double var = 0;
    for (double x : xs) {
        var += (x - mean) * (x - mean) / (repeats - 1);
    }
    EXPECT_NEAR(mean, 0, 0.01);
    // Sample variance of 200 draws is within about 30% of 1/N_s with overwhelming probability.
    EXPECT_NEAR(var * shots, 1.0, 0.3);
}

TEST(MeasureLabel, MeanTracksExpectation) {
    Rng rng(3);
    for (double mu : {-0.8, -0.2, 0.3, 0.9}) {
        double total = 0;
        for (int i = 0; i < 100; i++) {
            total += measure_label(mu, 10000, rng);
        }
        EXPECT_NEAR(total / 100, mu, 0.003);
    }
}

TEST(MeasureLabel, DeterministicPerSeed) {
    Rng a(4), b(4);
    for (int i = 0; i < 20; i++) {
        EXPECT_EQ(measure_label(0.1, 5000, a), measure_label(0.1, 5000, b));
    }
}

TEST(HoeffdingRadius, DirectEvaluation) {
    EXPECT_NEAR(hoeffding_radius(10000, 8, 8, 0.05), std::sqrt(2 * std::log(2560.0) / 1e4), 1e-15);
    EXPECT_NEAR(hoeffding_radius(10000, 8, 8, 0.05), 0.0396, 5e-5);
    EXPECT_NEAR(hoeffding_radius(1000, 8, 8, 0.05), 0.1253, 5e-5);
    EXPECT_LT(hoeffding_radius(int64_t{1} << 50, 8, 8, 0.05), 1e-6);
    EXPECT_THROW(hoeffding_radius(0, 8, 8, 0.05), ValidationError);
    EXPECT_THROW(hoeffding_radius(10, 8, 8, 0), ValidationError);
}

TEST(HoeffdingRadius, ConfidenceEventFrequency) {
    // Every one of the n T_max labels a run could add must land inside its band.
    const int n = 8, t_max = 8, runs = 500;
    const int64_t shots = 10000;
    const double delta = 0.05;
    double eta = hoeffding_radius(shots, n, t_max, delta);
    Rng rng(5);
    int contained = 0;
    for (int run = 0; run < runs; run++) {
        WalshSpectrum s = walsh(make_sparse_error_state(n, 0.64, 5, rng));
        bool all_inside = true;
        for (int k = 0; k < n * t_max; k++) {
            auto u = 1 + rng.uniform_below(255);
            double mu = s[u];
            all_inside = all_inside && std::abs(measure_label(mu, shots, rng) - mu) <= eta;
        }
        contained += all_inside;
    }
    EXPECT_GE(static_cast<double>(contained) / runs, 1 - delta - 0.03);
}

TEST(ShotModel, ParseAndFormat) {
    ShotModel exact = ShotModel::parse("exact");
    EXPECT_FALSE(exact.finite());
    EXPECT_EQ(exact.radius(8), 0);
    ShotModel m = ShotModel::parse("finite:Ns=10000,delta=0.05,Tmax=8");
    EXPECT_TRUE(m.finite());
    EXPECT_EQ(m.shots, 10000);
    EXPECT_DOUBLE_EQ(m.delta, 0.05);
    EXPECT_EQ(m.t_max, 8);
    EXPECT_EQ(m.to_string(), "finite:Ns=10000,delta=0.05,Tmax=8");
    EXPECT_EQ(ShotModel::parse(m.to_string()), m);
    EXPECT_EQ(ShotModel::parse("finite:Tmax=8,delta=0.05,Ns=1e4"), m);
    EXPECT_DOUBLE_EQ(m.radius(8), hoeffding_radius(10000, 8, 8, 0.05));
}

TEST(ShotModel, RejectsBadInput) {
    EXPECT_THROW(ShotModel::parse("finite:Ns=100,delta=0.05"), ValidationError);
    EXPECT_THROW(ShotModel::parse("finite:Ns=0,delta=0.05,Tmax=8"), ValidationError);
    EXPECT_THROW(ShotModel::parse("finite:Ns=10.5,delta=0.05,Tmax=8"), ValidationError);
    EXPECT_THROW(ShotModel::parse("finite:Ns=100,delta=1,Tmax=8"), ValidationError);
    EXPECT_THROW(ShotModel::parse("finite:Ns=100,delta=0.05,Tmax=8,x=1"), ValidationError);
    EXPECT_THROW(ShotModel::parse("shots"), ValidationError);
}

}  // namespace
}  // namespace stabcert
