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

#include "stabcert/simplex.h"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace stabcert {

DenseSimplex::DenseSimplex(Eigen::MatrixXd a, Eigen::VectorXd b, SimplexOptions options)
    : options_(options), a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() != b_.size()) {
        throw std::invalid_argument("simplex: row count mismatch between A and b");
    }
    for (Eigen::Index i = 0; i < b_.size(); i++) {
        if (b_(i) < 0) {
            a_.row(i) *= -1;
            b_(i) = -b_(i);
        }
    }
    frozen_.assign(cols(), false);
    b_work_ = b_;
}

void DenseSimplex::price(const Eigen::VectorXd &structural_cost, double artificial_cost) {
    Eigen::VectorXd cb(rows());
    for (int i = 0; i < rows(); i++) {
        cb(i) = is_artificial(basis_[i]) ? artificial_cost : structural_cost(basis_[i]);
    }
    reduced_ = structural_cost - tableau_.transpose() * cb;
    for (int i = 0; i < rows(); i++) {
        if (!is_artificial(basis_[i])) {
            reduced_(basis_[i]) = 0;
        }
    }
    objective_ = cb.dot(rhs_);
}

void DenseSimplex::refactor(const Eigen::VectorXd &structural_cost, double artificial_cost) {
    Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(rows(), rows());
    for (int i = 0; i < rows(); i++) {
        int var = basis_[i];
        if (is_artificial(var)) {
            basis_matrix(var - cols(), i) = 1;
        } else {
            basis_matrix.col(i) = a_.col(var);
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    tableau_ = lu.solve(a_);
    rhs_ = lu.solve(b_work_);
    price(structural_cost, artificial_cost);
    since_refactor_ = 0;
}

int DenseSimplex::choose_entering(bool bland) const {
    int best = -1;
    double best_value = -options_.optimality_tol;
    for (int j = 0; j < cols(); j++) {
        if (frozen_[j] || basis_row_[j] >= 0) {
            continue;
        }
        if (reduced_(j) < best_value) {
            best = j;
            if (bland) {
                return best;
            }
            best_value = reduced_(j);
        }
    }
    return best;
}

int DenseSimplex::choose_leaving(int entering, bool bland) const {
    const auto column = tableau_.col(entering);
    // Harris-style two pass test: relax the ratio bound by the feasibility tolerance, then take the
    // largest pivot among rows that stay within it.
    double bound = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows(); i++) {
        if (column(i) > options_.pivot_tol) {
            double slack = bland ? 0 : options_.feasibility_tol;
            bound = std::min(bound, (std::max(rhs_(i), 0.0) + slack) / column(i));
        }
    }
    if (!std::isfinite(bound)) {
        return -1;
    }
    int best = -1;
    double best_pivot = 0;
    int best_var = std::numeric_limits<int>::max();
    for (int i = 0; i < rows(); i++) {
        if (column(i) <= options_.pivot_tol) {
            continue;
        }
        double ratio = std::max(rhs_(i), 0.0) / column(i);
        if (ratio > bound) {
            continue;
        }
        if (bland) {
            // Artificial variables leave first, otherwise smallest index.
            int var = is_artificial(basis_[i]) ? -1 : basis_[i];
            if (ratio < bound || var < best_var) {
                if (ratio < bound) {
                    bound = ratio;
                }
                best_var = var;
                best = i;
            }
        } else if (column(i) > best_pivot) {
            best_pivot = column(i);
            best = i;
        }
    }
    return best;
}

void DenseSimplex::pivot(int row, int col) {
    double p = tableau_(row, col);
    tableau_.row(row) /= p;
    rhs_(row) /= p;
    Eigen::VectorXd factor = tableau_.col(col);
    factor(row) = 0;
    Eigen::RowVectorXd pivot_row = tableau_.row(row);
    tableau_.noalias() -= factor * pivot_row;
    rhs_ -= factor * rhs_(row);
    tableau_.col(col).setZero();
    tableau_(row, col) = 1;

    double entering_cost = reduced_(col);
    reduced_ -= entering_cost * pivot_row.transpose();
    reduced_(col) = 0;
    objective_ += entering_cost * rhs_(row);

    int leaving = basis_[row];
    if (!is_artificial(leaving)) {
        basis_row_[leaving] = -1;
    }
    basis_[row] = col;
    basis_row_[col] = row;
    iterations_++;
    since_refactor_++;
}

void DenseSimplex::run(const Eigen::VectorXd &structural_cost, double artificial_cost) {
    refactor(structural_cost, artificial_cost);
    int degenerate_streak = 0;
    int polish_rounds = 0;
    bool perturbed_once = false;
    bool bland = false;
    while (true) {
        if (iterations_ > options_.max_iterations) {
            throw std::runtime_error("simplex: iteration limit exceeded");
        }
        if (degenerate_streak > options_.degenerate_limit) {
            // Stalling at a degenerate vertex: first shift the basic values apart, and if that
            // was already tried in this solve fall back to Bland's rule.
            if (!perturbed_once) {
                perturb(structural_cost, artificial_cost);
                perturbed_once = true;
            } else {
                bland = true;
            }
            degenerate_streak = 0;
        }
        int q = choose_entering(bland);
        if (q < 0) {
            if (perturbed_) {
                remove_perturbation(structural_cost, artificial_cost);
                continue;
            }
            // Confirm optimality against a freshly factored tableau before stopping.
            if (since_refactor_ == 0 || polish_rounds > 3) {
                return;
            }
            refactor(structural_cost, artificial_cost);
            polish_rounds++;
            continue;
        }
        int r = choose_leaving(q, bland);
        if (r < 0) {
            throw std::runtime_error("simplex: objective unbounded below");
        }
        double before = objective_;
        pivot(r, q);
        if (objective_ < before - options_.feasibility_tol * 1e-3) {
            degenerate_streak = 0;
        } else {
            degenerate_streak++;
        }
        if (since_refactor_ >= options_.refactor_interval) {
            refactor(structural_cost, artificial_cost);
        }
    }
}

void DenseSimplex::perturb(const Eigen::VectorXd &structural_cost, double artificial_cost) {
    // Adds xi > 0 to the basic values, i.e. replaces b by b + B xi, so the current basis stays
    // feasible while ties in the ratio test are broken.
    std::mt19937_64 engine(static_cast<uint64_t>(iterations_) * 0x9e3779b97f4a7c15ull + 1);
    std::uniform_real_distribution<double> unit(0.5, 1.0);
    for (int i = 0; i < rows(); i++) {
        double xi = options_.perturbation * unit(engine);
        int var = basis_[i];
        if (is_artificial(var)) {
            b_work_(var - cols()) += xi;
        } else {
            b_work_ += xi * a_.col(var);
        }
    }
    perturbed_ = true;
    refactor(structural_cost, artificial_cost);
}

void DenseSimplex::remove_perturbation(const Eigen::VectorXd &structural_cost, double artificial_cost) {
    b_work_ = b_;
    perturbed_ = false;
    refactor(structural_cost, artificial_cost);
    // The basis is still dual feasible; dual simplex pivots restore primal feasibility.
    int64_t limit = iterations_ + 50 * static_cast<int64_t>(rows() + cols());
    while (true) {
        int r = -1;
        double most_negative = -options_.feasibility_tol;
        for (int i = 0; i < rows(); i++) {
            if (rhs_(i) < most_negative) {
                most_negative = rhs_(i);
                r = i;
            }
        }
        if (r < 0) {
            return;
        }
        if (iterations_ > limit) {
            throw std::runtime_error("simplex: dual cleanup did not converge");
        }
        int q = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        double best_pivot = 0;
        for (int j = 0; j < cols(); j++) {
            double a = tableau_(r, j);
            if (frozen_[j] || basis_row_[j] >= 0 || a >= -options_.pivot_tol) {
                continue;
            }
            double ratio = std::max(reduced_(j), 0.0) / -a;
            if (ratio < best_ratio - options_.optimality_tol ||
                (ratio <= best_ratio + options_.optimality_tol && -a > best_pivot)) {
                best_ratio = std::min(ratio, best_ratio);
                best_pivot = -a;
                q = j;
            }
        }
        if (q < 0) {
            throw std::runtime_error("simplex: no dual pivot available after perturbation");
        }
        pivot(r, q);
        if (since_refactor_ >= options_.refactor_interval) {
            refactor(structural_cost, artificial_cost);
        }
    }
}

void DenseSimplex::drop_row(int row) {
    int original = basis_[row] - cols();
    a_ = [&] {
        Eigen::MatrixXd kept(a_.rows() - 1, a_.cols());
        kept << a_.topRows(original), a_.bottomRows(a_.rows() - original - 1);
        return kept;
    }();
    Eigen::VectorXd kept_b(b_.size() - 1);
    kept_b << b_.head(original), b_.tail(b_.size() - original - 1);
    b_ = std::move(kept_b);
    b_work_ = b_;
    basis_.erase(basis_.begin() + row);
    for (int &var : basis_) {
        if (is_artificial(var) && var - cols() > original) {
            var--;
        }
    }
    for (int i = 0; i < static_cast<int>(basis_.size()); i++) {
        if (!is_artificial(basis_[i])) {
            basis_row_[basis_[i]] = i;
        }
    }
}

bool DenseSimplex::find_feasible_basis() {
    int m = rows();
    basis_.resize(m);
    basis_row_.assign(cols(), -1);
    for (int i = 0; i < m; i++) {
        basis_[i] = cols() + i;
    }
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(cols());
    run(zero, 1.0);
    double scale = std::max(1.0, b_.lpNorm<Eigen::Infinity>());
    if (objective_ > options_.feasibility_tol * scale * std::max(1, m / 16)) {
        feasible_ = false;
        return false;
    }
    // Pivot remaining (zero-valued) artificials out; rows where that is impossible are redundant.
    for (int i = 0; i < rows();) {
        if (!is_artificial(basis_[i])) {
            i++;
            continue;
        }
        int best = -1;
        double best_abs = 1e-7;
        for (int j = 0; j < cols(); j++) {
            if (basis_row_[j] < 0 && std::abs(tableau_(i, j)) > best_abs) {
                best_abs = std::abs(tableau_(i, j));
                best = j;
            }
        }
        if (best >= 0) {
            pivot(i, best);
            i++;
        } else {
            drop_row(i);
            refactor(zero, 1.0);
        }
    }
    refactor(zero, 0.0);
    feasible_ = true;
    return true;
}

void DenseSimplex::minimize(const Eigen::VectorXd &c) {
    if (!feasible_) {
        throw std::logic_error("simplex: minimize() called without a feasible basis");
    }
    if (c.size() != cols()) {
        throw std::invalid_argument("simplex: objective length mismatch");
    }
    run(c, 0.0);
}

void DenseSimplex::restrict_to_optimal_face() {
    for (int j = 0; j < cols(); j++) {
        if (basis_row_[j] < 0 && reduced_(j) > options_.face_tol) {
            frozen_[j] = true;
        }
    }
}

void DenseSimplex::clear_restrictions() {
    frozen_.assign(cols(), false);
}

Eigen::VectorXd DenseSimplex::primal() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(cols());
    for (int i = 0; i < rows(); i++) {
        if (!is_artificial(basis_[i])) {
            x(basis_[i]) = rhs_(i);
        }
    }
    return x;
}

}  // namespace stabcert
