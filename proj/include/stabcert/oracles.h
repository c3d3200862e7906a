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

#ifndef STABCERT_ORACLES_H
#define STABCERT_ORACLES_H

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stabcert/gf2.h"
#include "stabcert/polytope.h"

namespace stabcert::oracle {

// Brute-force reference implementations for small n. They share no code with the production
// paths they check.

/// Walsh coefficients by the O(4^n) double sum.
std::vector<double> naive_walsh(int n, const std::vector<double> &p);

/// Rank as log2 of the size of the enumerated span.
int span_rank(int n, const std::vector<uint32_t> &vectors);

/// Every ordered basis of F_2^n (n <= 3).
std::vector<std::vector<uint32_t>> all_ordered_bases(int n);

/// Largest total weight over all n-element bases of F_2^n \ {0} (n <= 4).
double best_basis_score(int n, const std::vector<double> &weights);

/// min and max of p(0) over the feasible set by enumerating vertices; nullopt when the set is
/// empty. `max_systems` bounds the number of square systems solved.
std::optional<std::pair<double, double>> vertex_endpoints(const ConstraintSet &c, long max_systems = 2'000'000);

struct Report {
    std::vector<std::string> lines;
    int failures = 0;
};

/// The n <= 4 oracle suites behind the selftest command.
Report run_selftest(uint64_t seed);

}  // namespace stabcert::oracle

#endif
