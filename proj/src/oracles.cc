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

#include "stabcert/oracles.h"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "stabcert/policy.h"
#include "stabcert/rng.h"
#include "stabcert/runner.h"
#include "stabcert/syndrome.h"

namespace stabcert::oracle {

std::vector<double> naive_walsh(int n, const std::vector<double> &p) {
    size_t size = size_t{1} << n;
    std::vector<double> out(size, 0.0);
    for (size_t u = 0; u < size; u++) {
        for (size_t s = 0; s < size; s++) {
            int parity = 0;
            for (int i = 0; i < n; i++) {
                parity ^= static_cast<int>(((u >> i) & 1) & ((s >> i) & 1));
            }
            out[u] += parity ? -p[s] : p[s];
        }
    }
    return out;
}

int span_rank(int n, const std::vector<uint32_t> &vectors) {
    std::vector<bool> in_span(size_t{1} << n, false);
    in_span[0] = true;
    std::vector<uint32_t> members{0};
    for (uint32_t v : vectors) {
        if (in_span[v]) {
            continue;
        }
        size_t count = members.size();
        for (size_t i = 0; i < count; i++) {
            uint32_t w = members[i] ^ v;
            in_span[w] = true;
            members.push_back(w);
        }
    }
    int r = 0;
    while ((size_t{1} << r) < members.size()) {
        r++;
    }
    return r;
}

std::vector<std::vector<uint32_t>> all_ordered_bases(int n) {
    std::vector<std::vector<uint32_t>> out;
    uint32_t size = 1u << n;
    std::vector<uint32_t> current;
    auto extend = [&](auto &self) -> void {
        if (static_cast<int>(current.size()) == n) {
            out.push_back(current);
            return;
        }
        for (uint32_t v = 1; v < size; v++) {
            current.push_back(v);
            if (span_rank(n, current) == static_cast<int>(current.size())) {
                self(self);
            }
            current.pop_back();
        }
    };
    extend(extend);
    return out;
}

double best_basis_score(int n, const std::vector<double> &weights) {
    uint32_t size = 1u << n;
    double best = -1;
    std::vector<uint32_t> chosen;
    auto choose = [&](auto &self, uint32_t start) -> void {
        if (static_cast<int>(chosen.size()) == n) {
            if (span_rank(n, chosen) == n) {
                double score = 0;
                for (uint32_t v : chosen) {
                    score += weights[v];
                }
                best = std::max(best, score);
            }
            return;
        }
        for (uint32_t v = start; v < size; v++) {
            chosen.push_back(v);
            self(self, v + 1);
            chosen.pop_back();
        }
    };
    choose(choose, 1);
    return best;
}

std::optional<std::pair<double, double>> vertex_endpoints(const ConstraintSet &c, long max_systems) {
    int n = c.n();
    int dim = 1 << n;
    auto character = [&](uint32_t u) {
        Eigen::RowVectorXd row(dim);
        for (int s = 0; s < dim; s++) {
            row(s) = (std::popcount(u & static_cast<uint32_t>(s)) & 1) ? -1.0 : 1.0;
        }
        return row;
    };
    // Equalities E x = e and inequalities G x >= g.
    std::vector<Eigen::RowVectorXd> eq_rows{Eigen::RowVectorXd::Ones(dim)};
    std::vector<double> eq_rhs{1.0};
    std::vector<Eigen::RowVectorXd> ineq_rows;
    std::vector<double> ineq_rhs;
    for (int s = 0; s < dim; s++) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(dim);
        row(s) = 1;
        ineq_rows.push_back(row);
        ineq_rhs.push_back(0);
    }
    for (const auto &[u, w] : c.entries()) {
        if (w.lo > w.hi) {
            return std::nullopt;
        }
        if (w.lo == w.hi) {
            eq_rows.push_back(character(u));
            eq_rhs.push_back(w.lo);
            continue;
        }
        if (w.lo > -1) {
            ineq_rows.push_back(character(u));
            ineq_rhs.push_back(w.lo);
        }
        if (w.hi < 1) {
            ineq_rows.push_back(-character(u));
            ineq_rhs.push_back(-w.hi);
        }
    }
    Eigen::MatrixXd e(eq_rows.size(), dim);
    for (size_t i = 0; i < eq_rows.size(); i++) {
        e.row(static_cast<Eigen::Index>(i)) = eq_rows[i];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> e_lu(e);
    int eq_rank = static_cast<int>(e_lu.rank());
    int k = dim - eq_rank;
    int m = static_cast<int>(ineq_rows.size());
    if (k > m) {
        return std::nullopt;
    }

    auto feasible = [&](const Eigen::VectorXd &x) {
        for (size_t i = 0; i < eq_rows.size(); i++) {
            if (std::abs(eq_rows[i].dot(x) - eq_rhs[i]) > 1e-9) {
                return false;
            }
        }
        for (int i = 0; i < m; i++) {
            if (ineq_rows[i].dot(x) < ineq_rhs[i] - 1e-9) {
                return false;
            }
        }
        return true;
    };

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    long systems = 0;
    std::vector<int> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    Eigen::MatrixXd a(eq_rows.size() + k, dim);
    Eigen::VectorXd b(eq_rows.size() + k);
    for (size_t i = 0; i < eq_rows.size(); i++) {
        a.row(static_cast<Eigen::Index>(i)) = eq_rows[i];
        b(static_cast<Eigen::Index>(i)) = eq_rhs[i];
    }
    while (true) {
        if (++systems > max_systems) {
            throw std::runtime_error("vertex enumeration exceeds its system budget");
        }
        for (int j = 0; j < k; j++) {
            a.row(static_cast<Eigen::Index>(eq_rows.size() + j)) = ineq_rows[pick[j]];
            b(static_cast<Eigen::Index>(eq_rows.size() + j)) = ineq_rhs[pick[j]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (lu.rank() == dim) {
            Eigen::VectorXd x = lu.solve(b);
            if (feasible(x)) {
                lo = std::min(lo, x(0));
                hi = std::max(hi, x(0));
            }
        }
        int j = k - 1;
        while (j >= 0 && pick[j] == m - k + j) {
            j--;
        }
        if (j < 0) {
            break;
        }
        pick[j]++;
        for (int i = j + 1; i < k; i++) {
            pick[i] = pick[i - 1] + 1;
        }
    }
    if (!std::isfinite(lo)) {
        return std::nullopt;
    }
    return std::make_pair(lo, hi);
}

namespace {

void check(Report &report, bool ok, const std::string &line) {
    report.lines.push_back((ok ? "ok    " : "FAIL  ") + line);
    report.failures += ok ? 0 : 1;
}

std::vector<Label> random_labels(int n, int count, Rng &rng) {
    std::vector<uint32_t> all((1u << n) - 1);
    std::iota(all.begin(), all.end(), 1u);
    for (size_t i = all.size(); i > 1; i--) {
        std::swap(all[i - 1], all[rng.uniform_below(i)]);
    }
    std::vector<Label> out;
    for (int i = 0; i < count && i < static_cast<int>(all.size()); i++) {
        out.emplace_back(n, all[i]);
    }
    return out;
}

}  // namespace

Report run_selftest(uint64_t seed) {
    Report report;
    Rng rng(seed);
    char buf[200];

    double walsh_err = 0;
    for (int n = 1; n <= 4; n++) {
        for (int rep = 0; rep < 20; rep++) {
            SyndromeDistribution p = sample_dirichlet_uniform(n, rng);
            std::vector<double> ref = naive_walsh(n, p.probs());
            WalshSpectrum fast = walsh(p);
            for (size_t u = 0; u < ref.size(); u++) {
                walsh_err = std::max(walsh_err, std::abs(ref[u] - fast[u]));
            }
        }
    }
    std::snprintf(buf, sizeof(buf), "walsh transform vs naive sum, n<=4: max error %.2e", walsh_err);
    check(report, walsh_err <= 1e-12, buf);

    int gl_bad = 0;
    for (int n = 1; n <= 3; n++) {
        size_t accepted = 0;
        size_t expected = all_ordered_bases(n).size();
        uint32_t size = 1u << n;
        std::vector<uint32_t> cols(n, 0);
        size_t total = 1;
        for (int i = 0; i < n; i++) {
            total *= size;
        }
        for (size_t code = 0; code < total; code++) {
            size_t rest = code;
            std::vector<Label> labels;
            for (int i = 0; i < n; i++) {
                labels.emplace_back(n, static_cast<uint32_t>(rest % size));
                rest /= size;
            }
            try {
                Gauge g(labels);
                accepted++;
            } catch (const ValidationError &) {
            }
        }
        gl_bad += accepted == expected ? 0 : 1;
    }
    check(report, gl_bad == 0, "gauge validation accepts exactly GL(n,2), n<=3");

    int greedy_bad = 0;
    for (int n = 2; n <= 4; n++) {
        for (int rep = 0; rep < 100; rep++) {
            std::vector<double> w(size_t{1} << n, 0.0);
            for (size_t u = 1; u < w.size(); u++) {
                w[u] = static_cast<double>(rng.uniform_below(4));
            }
            LabelSet queried(n);
            for (const Label &u : random_labels(n, static_cast<int>(rng.uniform_below(w.size())), rng)) {
                queried.insert(u);
            }
            std::vector<Label> basis = greedy_max_weight_basis(n, w, queried);
            double score = 0;
            std::vector<uint32_t> bits;
            for (const Label &u : basis) {
                score += w[u.bits()];
                bits.push_back(u.bits());
            }
            if (span_rank(n, bits) != n || std::abs(score - best_basis_score(n, w)) > 1e-12) {
                greedy_bad++;
            }
        }
    }
    std::snprintf(buf, sizeof(buf), "greedy basis attains the exhaustive optimum, n<=4: %d mismatches", greedy_bad);
    check(report, greedy_bad == 0, buf);

    double lp_err = 0;
    int lp_status_bad = 0;
    for (int n = 2; n <= 4; n++) {
        for (int rep = 0; rep < 12; rep++) {
            SyndromeDistribution p = sample_dirichlet_uniform(n, rng);
            int max_labels = (1 << n) - 1;
            int min_labels = n == 4 ? 9 : 0;
            int count = min_labels + static_cast<int>(rng.uniform_below(max_labels - min_labels + 1));
            std::vector<Label> labels = random_labels(n, count, rng);
            ConstraintSet c = build_exact_constraints(p, labels);
            if (n <= 3 && rep % 2 == 1) {
                c = ConstraintSet(n);
                WalshSpectrum spec = walsh(p);
                for (const Label &u : labels) {
                    c.add_band(u, spec[u.bits()], 0.05 + 0.1 * rng.uniform01());
                }
            }
            EndpointResult r = solve_endpoints(c);
            auto ref = vertex_endpoints(c);
            if (!ref || !r.solved()) {
                lp_status_bad++;
                continue;
            }
            lp_err = std::max({lp_err, std::abs(r.lower - ref->first), std::abs(r.upper - ref->second)});
        }
    }
    std::snprintf(buf, sizeof(buf), "endpoint LP vs vertex enumeration, n<=4: max error %.2e, %d status mismatches",
                  lp_err, lp_status_bad);
    check(report, lp_err <= 1e-6 && lp_status_bad == 0, buf);

    double complete_err = 0;
    for (int n = 1; n <= 4; n++) {
        for (int rep = 0; rep < 10; rep++) {
            RunConfig cfg;
            cfg.n = n;
            cfg.epsilon = 0;
            cfg.t_max = 1 << n;
            cfg.seed = seed;
            cfg.trial = static_cast<uint64_t>(rep);
            cfg.instance.kind = InstanceKind::dirichlet;
            cfg.assertions = AssertionLevel::strict;
            RunTrace trace = run_config(cfg);
            complete_err = std::max({complete_err, std::abs(trace.last().lower - trace.true_fidelity),
                                     std::abs(trace.last().upper - trace.true_fidelity)});
        }
    }
    std::snprintf(buf, sizeof(buf), "adaptive runs end at the true fidelity, n<=4: max error %.2e", complete_err);
    check(report, complete_err <= 1e-7, buf);
    return report;
}

}  // namespace stabcert::oracle
