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

#ifndef STABCERT_SIMPLEX_H
#define STABCERT_SIMPLEX_H

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace stabcert {

struct SimplexOptions {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-11;
    double pivot_tol = 1e-9;
    /// Reduced costs above this are treated as strictly positive when restricting to a face.
    double face_tol = 1e-9;
    int refactor_interval = 50;
    /// Consecutive degenerate pivots tolerated before the right-hand side is perturbed (and, on a
    /// second stall within one solve, before switching to Bland's rule).
    int degenerate_limit = 50;
    /// Size of the random shift applied to basic values when stalling.
    double perturbation = 1e-6;
    int64_t max_iterations = 1'000'000;
};

enum class SimplexStatus { optimal, infeasible };

/// Dense tableau primal simplex for  min c.x  s.t.  A x = b, x >= 0.
///
/// Phase one runs once; afterwards any number of objectives can be minimized starting from the
/// current basis. The tableau is periodically rebuilt from an LU factorization of the basis, and
/// always before a result is reported, so primal values carry factorization-level accuracy
/// rather than accumulated pivot error.
class DenseSimplex {
   public:
    DenseSimplex(Eigen::MatrixXd a, Eigen::VectorXd b, SimplexOptions options = {});

    /// Phase one. Returns false when no nonnegative solution exists. Redundant rows are dropped.
    bool find_feasible_basis();

    /// Minimizes c.x from the current feasible basis. Requires find_feasible_basis() == true.
    void minimize(const Eigen::VectorXd &c);

    /// Excludes every nonbasic column whose reduced cost for the last objective is positive,
    /// which confines later optimizations to that objective's optimal face.
    void restrict_to_optimal_face();
    void clear_restrictions();

    Eigen::VectorXd primal() const;
    double objective_value() const {
        return objective_;
    }
    int64_t iterations() const {
        return iterations_;
    }
    int rows() const {
        return static_cast<int>(b_.size());
    }
    int cols() const {
        return static_cast<int>(a_.cols());
    }

   private:
    bool is_artificial(int var) const {
        return var >= cols();
    }
    void price(const Eigen::VectorXd &structural_cost, double artificial_cost);
    void run(const Eigen::VectorXd &structural_cost, double artificial_cost);
    int choose_entering(bool bland) const;
    int choose_leaving(int entering, bool bland) const;
    void pivot(int row, int col);
    void refactor(const Eigen::VectorXd &structural_cost, double artificial_cost);
    void drop_row(int row);
    void perturb(const Eigen::VectorXd &structural_cost, double artificial_cost);
    void remove_perturbation(const Eigen::VectorXd &structural_cost, double artificial_cost);

    SimplexOptions options_;
    Eigen::MatrixXd a_;
    Eigen::VectorXd b_;
    // Right-hand side used by the tableau; differs from b_ only while perturbed.
    Eigen::VectorXd b_work_;
    Eigen::MatrixXd tableau_;
    Eigen::VectorXd rhs_;
    Eigen::VectorXd reduced_;
    std::vector<int> basis_;
    std::vector<int> basis_row_;
    std::vector<bool> frozen_;
    double objective_ = 0;
    int64_t iterations_ = 0;
    int since_refactor_ = 0;
    bool feasible_ = false;
    bool perturbed_ = false;
};

}  // namespace stabcert

#endif
