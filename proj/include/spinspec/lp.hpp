#pragma once

// Dense two-phase primal simplex. Small by design: the functional searches
// produce a few hundred active rows over ~100 variables, and candidates are
// only ever trusted after exact verification.

#include <Eigen/Dense>
#include <vector>

namespace spinspec {

enum class LPStatus { Optimal, Infeasible, Unbounded, Stalled };

struct LinearProgram {
  // minimize c^T x  subject to  A x (rel) b,  x >= 0
  // rel: -1 for <=, 0 for =, +1 for >=
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
  std::vector<int> rel;
};

struct LPResult {
  LPStatus status = LPStatus::Stalled;
  Eigen::VectorXd x;
  double objective = 0;
};

LPResult solve_lp(const LinearProgram& lp, int max_iters = 200000);

}  // namespace spinspec
