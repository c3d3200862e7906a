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

#include "stabcert/polytope.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stabcert/simplex.h"

namespace stabcert {

ConstraintSet::ConstraintSet(int n) : n_(n) {
    check_qubit_count(n);
}

const WalshConstraint *ConstraintSet::find(Label u) const {
    auto it = entries_.find(u.bits());
    return it == entries_.end() ? nullptr : &it->second;
}

void ConstraintSet::merge(Label u, WalshConstraint c) {
    if (u.n() != n_) {
        throw DimensionError("constraint label dimension mismatch");
    }
    if (u.is_zero()) {
        throw ValidationError("the zero label is implicit and cannot be constrained");
    }
    auto [it, inserted] = entries_.try_emplace(u.bits(), c);
    if (inserted) {
        return;
    }
    WalshConstraint &cur = it->second;
    cur.lo = std::max(cur.lo, c.lo);
    cur.hi = std::min(cur.hi, c.hi);
    if (cur.lo == cur.hi || c.kind == ConstraintKind::exact) {
        cur.kind = ConstraintKind::exact;
    }
}

void ConstraintSet::add_exact(Label u, double mu) {
    double v = std::clamp(mu, -1.0, 1.0);
    merge(u, {ConstraintKind::exact, v, v});
}

void ConstraintSet::add_interval(Label u, double lo, double hi) {
    lo = std::max(-1.0, lo);
    hi = std::min(1.0, hi);
    merge(u, {lo == hi ? ConstraintKind::exact : ConstraintKind::band, lo, hi});
}

void ConstraintSet::add_band(Label u, double mu_hat, double eta) {
    if (!(eta >= 0)) {
        throw ValidationError("band radius must be nonnegative");
    }
    add_interval(u, mu_hat - eta, mu_hat + eta);
}

bool ConstraintSet::trivially_infeasible() const {
    return std::any_of(entries_.begin(), entries_.end(), [](const auto &e) { return e.second.empty(); });
}

double ConstraintSet::max_violation(const SyndromeDistribution &p) const {
    if (p.n() != n_) {
        throw DimensionError("distribution dimension mismatch");
    }
    double total = 0, worst = 0;
    for (double x : p.probs()) {
        total += x;
        worst = std::max(worst, -x);
    }
    worst = std::max(worst, std::abs(total - 1));
    WalshSpectrum spec = walsh(p);
    for (const auto &[u, c] : entries_) {
        double v = spec[u];
        worst = std::max({worst, c.lo - v, v - c.hi});
    }
    return worst;
}

bool approx_equal(const ConstraintSet &a, const ConstraintSet &b, double tolerance) {
    if (a.n() != b.n() || a.size() != b.size()) {
        return false;
    }
    for (auto ia = a.entries().begin(), ib = b.entries().begin(); ia != a.entries().end(); ++ia, ++ib) {
        if (ia->first != ib->first || ia->second.kind != ib->second.kind ||
            std::abs(ia->second.lo - ib->second.lo) > tolerance ||
            std::abs(ia->second.hi - ib->second.hi) > tolerance) {
            return false;
        }
    }
    return true;
}

ConstraintSet build_exact_constraints(const SyndromeDistribution &p_true, std::span<const Label> labels) {
    ConstraintSet out(p_true.n());
    if (labels.empty()) {
        return out;
    }
    WalshSpectrum spec = walsh(p_true);
    for (const Label &u : labels) {
        out.add_exact(u, spec[u.bits()]);
    }
    return out;
}

namespace {

// Standard form over x = (p, slacks): a normalization row, then one or two +-1 character rows
// per constraint. Vacuous sides of a band at the physical limits emit no row.
struct StandardForm {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    int num_probs = 0;
};

StandardForm build_standard_form(const ConstraintSet &c) {
    int n = c.n();
    int num_probs = 1 << n;
    int rows = 1;
    int slacks = 0;
    for (const auto &[u, w] : c.entries()) {
        if (w.lo == w.hi) {
            rows++;
            continue;
        }
        if (w.lo > -1) {
            rows++;
            slacks++;
        }
        if (w.hi < 1) {
            rows++;
            slacks++;
        }
    }
    StandardForm f;
    f.num_probs = num_probs;
    f.a = Eigen::MatrixXd::Zero(rows, num_probs + slacks);
    f.b = Eigen::VectorXd::Zero(rows);
    f.a.row(0).head(num_probs).setOnes();
    f.b(0) = 1;
    int row = 1;
    int slack = num_probs;
    auto character_row = [&](uint32_t u) {
        for (int s = 0; s < num_probs; s++) {
            f.a(row, s) = popcount_parity(u & static_cast<uint32_t>(s)) ? -1.0 : 1.0;
        }
    };
    for (const auto &[u, w] : c.entries()) {
        if (w.lo == w.hi) {
            character_row(u);
            f.b(row++) = w.lo;
            continue;
        }
        if (w.lo > -1) {
            character_row(u);
            f.a(row, slack++) = -1;
            f.b(row++) = w.lo;
        }
        if (w.hi < 1) {
            character_row(u);
            f.a(row, slack++) = 1;
            f.b(row++) = w.hi;
        }
    }
    return f;
}

// Optimizes the objective, then (lexicographic mode) minimizes p(0), p(1), ... in turn over the
// successive optimal faces.
std::vector<double> optimize_over_face(DenseSimplex &lp, const Eigen::VectorXd &objective, int num_probs,
                                       Tiebreak tiebreak) {
    lp.clear_restrictions();
    lp.minimize(objective);
    if (tiebreak == Tiebreak::lexicographic) {
        Eigen::VectorXd unit = Eigen::VectorXd::Zero(lp.cols());
        for (int s = 0; s < num_probs; s++) {
            lp.restrict_to_optimal_face();
            unit(s) = 1;
            lp.minimize(unit);
            unit(s) = 0;
        }
    }
    Eigen::VectorXd x = lp.primal();
    return std::vector<double>(x.data(), x.data() + num_probs);
}

SyndromeDistribution checked_witness(const ConstraintSet &c, std::vector<double> x) {
    SyndromeDistribution w = SyndromeDistribution::from_solver(c.n(), std::move(x));
    double violation = c.max_violation(w);
    if (violation > kNumericTolerance) {
        throw std::runtime_error("endpoint witness violates constraints by " + std::to_string(violation));
    }
    return w;
}

}  // namespace

EndpointResult EndpointSolver::solve(const ConstraintSet &constraints, Tiebreak tiebreak) const {
    EndpointResult result;
    CoordinateOptimum lo = optimize(constraints, 0, Sense::minimize, tiebreak);
    if (lo.status != EndpointStatus::solved) {
        return result;
    }
    CoordinateOptimum hi = optimize(constraints, 0, Sense::maximize, tiebreak);
    if (hi.status != EndpointStatus::solved) {
        return result;
    }
    result.status = EndpointStatus::solved;
    result.lower = lo.value;
    result.upper = hi.value;
    result.witness_lo = std::move(lo.argopt);
    result.witness_hi = std::move(hi.argopt);
    return result;
}

CoordinateOptimum SimplexEndpointSolver::optimize(const ConstraintSet &constraints, uint32_t coordinate, Sense sense,
                                                  Tiebreak tiebreak) const {
    CoordinateOptimum out;
    if (constraints.trivially_infeasible()) {
        return out;
    }
    StandardForm form = build_standard_form(constraints);
    if (coordinate >= static_cast<uint32_t>(form.num_probs)) {
        throw ValidationError("coordinate out of range");
    }
    DenseSimplex lp(form.a, form.b);
    if (!lp.find_feasible_basis()) {
        return out;
    }
    Eigen::VectorXd objective = Eigen::VectorXd::Zero(lp.cols());
    objective(coordinate) = sense == Sense::minimize ? 1 : -1;
    out.argopt = checked_witness(constraints, optimize_over_face(lp, objective, form.num_probs, tiebreak));
    out.value = (*out.argopt)[coordinate];
    out.status = EndpointStatus::solved;
    return out;
}

EndpointResult SimplexEndpointSolver::solve(const ConstraintSet &constraints, Tiebreak tiebreak) const {
    EndpointResult result;
    if (constraints.trivially_infeasible()) {
        return result;
    }
    StandardForm form = build_standard_form(constraints);
    DenseSimplex lp(form.a, form.b);
    if (!lp.find_feasible_basis()) {
        return result;
    }
    Eigen::VectorXd objective = Eigen::VectorXd::Zero(lp.cols());
    objective(0) = 1;
    result.witness_lo = checked_witness(constraints, optimize_over_face(lp, objective, form.num_probs, tiebreak));
    objective(0) = -1;
    result.witness_hi = checked_witness(constraints, optimize_over_face(lp, objective, form.num_probs, tiebreak));
    result.lower = result.witness_lo->fidelity();
    result.upper = std::max(result.witness_hi->fidelity(), result.lower);
    result.iterations = lp.iterations();
    result.status = EndpointStatus::solved;
    return result;
}

const EndpointSolver &default_endpoint_solver() {
    static const SimplexEndpointSolver solver;
    return solver;
}

EndpointResult solve_endpoints(const ConstraintSet &constraints, Tiebreak tiebreak) {
    return default_endpoint_solver().solve(constraints, tiebreak);
}

}  // namespace stabcert
