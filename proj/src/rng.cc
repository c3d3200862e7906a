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

#include "stabcert/rng.h"

#include <cmath>
#include <vector>

namespace stabcert {

Rng::Rng(uint64_t seed) : engine_(seed) {
}

Rng Rng::derive(uint64_t master_seed, std::initializer_list<uint64_t> path) {
    std::vector<uint32_t> words;
    words.push_back(static_cast<uint32_t>(master_seed));
    words.push_back(static_cast<uint32_t>(master_seed >> 32));
    words.push_back(static_cast<uint32_t>(path.size()));
    for (uint64_t p : path) {
        words.push_back(static_cast<uint32_t>(p));
        words.push_back(static_cast<uint32_t>(p >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    Rng result(0);
    result.engine_.seed(seq);
    return result;
}

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

uint64_t Rng::uniform_below(uint64_t bound) {
    // Rejection sampling keeps the draw exactly uniform.
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    while (true) {
        uint64_t x = engine_();
        if (x < limit) {
            return x % bound;
        }
    }
}

double Rng::exponential() {
    return -std::log1p(-uniform01());
}

bool Rng::bernoulli(double p) {
    return uniform01() < p;
}

int64_t Rng::binomial(int64_t trials, double p) {
    if (p <= 0) {
        return 0;
    }
    if (p >= 1) {
        return trials;
    }
    std::binomial_distribution<int64_t> dist(trials, p);
    return dist(engine_);
}

}  // namespace stabcert
