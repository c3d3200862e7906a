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

#ifndef STABCERT_RNG_H
#define STABCERT_RNG_H

#include <cstdint>
#include <initializer_list>
#include <random>

namespace stabcert {

/// Seedable pseudo-random source. Streams are derived from (seed, indices...) so that results
/// do not depend on the order in which trials are scheduled.
class Rng {
   public:
    explicit Rng(uint64_t seed);

    /// Independent stream keyed by a master seed and a path of indices (trial, arm, ...).
    static Rng derive(uint64_t master_seed, std::initializer_list<uint64_t> path);

    uint64_t next_u64() {
        return engine_();
    }
    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01();
    /// Uniform integer in [0, bound); bound must be positive.
    uint64_t uniform_below(uint64_t bound);
    /// Standard exponential variate.
    double exponential();
    bool bernoulli(double p);
    /// Binomial(trials, p) count.
    int64_t binomial(int64_t trials, double p);

   private:
    std::mt19937_64 engine_;
};

}  // namespace stabcert

#endif
