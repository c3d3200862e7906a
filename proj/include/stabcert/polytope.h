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

#ifndef STABCERT_POLYTOPE_H
#define STABCERT_POLYTOPE_H

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>

#include "stabcert/gf2.h"
#include "stabcert/syndrome.h"

namespace stabcert {

/// Tolerance to which endpoint witnesses must satisfy every constraint.
inline constexpr double kNumericTolerance = 1e-9;

enum class ConstraintKind { exact, band };

/// One Walsh constraint lo <= p^(u) <= hi; exact constraints have lo == hi.
struct WalshConstraint {
    ConstraintKind kind = ConstraintKind::exact;
    double lo = 0;
    double hi = 0;

    bool empty() const {
        return lo > hi;
    }
};

/// Accumulated Walsh data defining the feasible set of syndrome distributions.
/// The zero label is never stored: normalization is implicit.
class ConstraintSet {
   public:
    ConstraintSet() = default;
    explicit ConstraintSet(int n);

    int n() const {
        return n_;
    }
    size_t size() const {
        return entries_.size();
    }
    const std::map<uint32_t, WalshConstraint> &entries() const {
        return entries_;
    }
    const WalshConstraint *find(Label u) const;

    /// Sets p^(u) = mu exactly (value clipped to [-1, 1]); intersects with any existing entry.
    void add_exact(Label u, double mu);
    /// Adds the band [max(-1, mu_hat - eta), min(1, mu_hat + eta)], intersected with any
    /// existing entry for u. A zero-width band becomes an exact constraint.
    void add_band(Label u, double mu_hat, double eta);
    /// Adds a raw interval constraint (clipped to [-1, 1]).
    void add_interval(Label u, double lo, double hi);

    /// True when some entry has an empty interval.
    bool trivially_infeasible() const;
    /// Largest violation of normalization, nonnegativity, or any Walsh constraint by p.
    double max_violation(const SyndromeDistribution &p) const;

   private:
    void merge(Label u, WalshConstraint c);

    int n_ = 0;
    std::map<uint32_t, WalshConstraint> entries_;
};

/// Same labels, kinds, and interval endpoints to within `tolerance`.
bool approx_equal(const ConstraintSet &a, const ConstraintSet &b, double tolerance);

/// Exact constraints p^(u) = p_true^(u) for each label.
ConstraintSet build_exact_constraints(const SyndromeDistribution &p_true, std::span<const Label> labels);

enum class Tiebreak { solver_default, lexicographic };
enum class EndpointStatus { solved, infeasible };

/// Certified interval [L, U] with witnesses attaining each endpoint.
struct EndpointResult {
    EndpointStatus status = EndpointStatus::infeasible;
    double lower = 0;
    double upper = 1;
    std::optional<SyndromeDistribution> witness_lo;
    std::optional<SyndromeDistribution> witness_hi;
    int64_t iterations = 0;

    double width() const {
        return upper - lower;
    }
    bool solved() const {
        return status == EndpointStatus::solved;
    }
};

enum class Sense { minimize, maximize };

struct CoordinateOptimum {
    EndpointStatus status = EndpointStatus::infeasible;
    double value = 0;
    std::optional<SyndromeDistribution> argopt;
};

/// Backend that optimizes p(s) over the feasible set of a ConstraintSet.
/// Implementations hold no mutable state shared between calls.
class EndpointSolver {
   public:
    virtual ~EndpointSolver() = default;
    virtual CoordinateOptimum optimize(const ConstraintSet &constraints, uint32_t coordinate, Sense sense,
                                       Tiebreak tiebreak) const = 0;
    /// Both endpoints for p(0). The default calls optimize() twice.
    virtual EndpointResult solve(const ConstraintSet &constraints, Tiebreak tiebreak) const;
};

/// Dense two-phase simplex over the 2^n probability variables with +-1 Walsh rows.
class SimplexEndpointSolver final : public EndpointSolver {
   public:
    CoordinateOptimum optimize(const ConstraintSet &constraints, uint32_t coordinate, Sense sense,
                               Tiebreak tiebreak) const override;
    /// Shares one phase-one solve between the two endpoints.
    EndpointResult solve(const ConstraintSet &constraints, Tiebreak tiebreak) const override;
};

const EndpointSolver &default_endpoint_solver();

/// L = min p(0), U = max p(0) over the feasible set, using the default backend.
EndpointResult solve_endpoints(const ConstraintSet &constraints, Tiebreak tiebreak = Tiebreak::solver_default);

}  // namespace stabcert

#endif
