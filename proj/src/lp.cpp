#include <spinspec/lp.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace spinspec {

namespace {

constexpr double kPivotTol = 1e-8;
constexpr double kCostTol = 1e-9;

// Revised simplex with an explicit basis inverse, eta updates and periodic
// refactorization. Phase 1 minimizes the artificial sum, phase 2 the true
// objective over the structural and slack columns.
struct Revised {
  const Eigen::MatrixXd& A;
  const Eigen::VectorXd& b;
  Eigen::VectorXd cost;
  int m, n;
  std::vector<int> basis;
  std::vector<char> in_basis;
  Eigen::MatrixXd Binv;
  Eigen::VectorXd xB;
  int pivots_since_factor = 0;

  Revised(const Eigen::MatrixXd& A_, const Eigen::VectorXd& b_)
      : A(A_), b(b_), m((int)A_.rows()), n((int)A_.cols()) {}

  void refactor() {
    Eigen::MatrixXd B(m, m);
    for (int i = 0; i < m; ++i) B.col(i) = A.col(basis[i]);
    Binv = B.partialPivLu().inverse();
    xB = Binv * b;
    pivots_since_factor = 0;
  }

  Eigen::VectorXd cB() const {
    Eigen::VectorXd c(m);
    for (int i = 0; i < m; ++i) c(i) = cost(basis[i]);
    return c;
  }
  double objective() const { return cB().dot(xB); }

  // 0 optimal, 1 unbounded, 2 iteration cap
  int run(int max_iters, int priced_limit) {
    refactor();
    int stall = 0;
    double last_obj = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iters; ++it) {
      bool bland = stall > 400;
      Eigen::VectorXd y = Binv.transpose() * cB();
      int enter = -1;
      double best = -kCostTol;
      for (int j = 0; j < priced_limit; ++j) {
        if (in_basis[j]) continue;
        double d = cost(j) - y.dot(A.col(j));
        if (bland) {
          if (d < -kCostTol) {
            enter = j;
            break;
          }
        } else if (d < best) {
          best = d;
          enter = j;
        }
      }
      if (enter < 0) return 0;
      Eigen::VectorXd w = Binv * A.col(enter);
      double theta = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i)
        if (w(i) > kPivotTol) theta = std::min(theta, std::max(xB(i), 0.0) / w(i));
      if (!std::isfinite(theta)) return 1;
      int leave = -1;
      double wbest = 0;
      for (int i = 0; i < m; ++i) {
        if (w(i) <= kPivotTol) continue;
        double ratio = std::max(xB(i), 0.0) / w(i);
        if (ratio > theta + 1e-9 * (1 + theta)) continue;
        if (bland) {
          if (leave < 0 || basis[i] < basis[leave]) leave = i;
        } else if (w(i) > wbest) {
          wbest = w(i);
          leave = i;
        }
      }
      in_basis[basis[leave]] = 0;
      in_basis[enter] = 1;
      basis[leave] = enter;
      double piv = w(leave);
      xB -= theta * w;
      xB(leave) = theta;
      Eigen::RowVectorXd brow = Binv.row(leave) / piv;
      for (int i = 0; i < m; ++i) {
        if (i == leave) continue;
        double f = w(i);
        if (f != 0) Binv.row(i) -= f * brow;
      }
      Binv.row(leave) = brow;
      if (++pivots_since_factor >= 100) refactor();
      double obj = objective();
      if (obj > last_obj - 1e-12)
        ++stall;
      else
        stall = 0;
      last_obj = obj;
    }
    return 2;
  }
};

}  // namespace

LPResult solve_lp(const LinearProgram& lp, int max_iters) {
  const int m = (int)lp.A.rows();
  const int n = (int)lp.A.cols();
  Eigen::MatrixXd A0 = lp.A;
  Eigen::VectorXd b = lp.b;
  std::vector<int> rel = lp.rel;
  for (int i = 0; i < m; ++i)
    if (b(i) < 0) {
      A0.row(i) *= -1;
      b(i) *= -1;
      rel[i] = -rel[i];
    }
  int n_slack = 0;
  for (int i = 0; i < m; ++i)
    if (rel[i] != 0) ++n_slack;
  // one artificial per row keeps the phase-1 basis trivial
  const int total = n + n_slack + m;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, total);
  A.leftCols(n) = A0;
  {
    int sc = n;
    for (int i = 0; i < m; ++i) {
      if (rel[i] == -1) A(i, sc++) = 1;
      else if (rel[i] == +1) A(i, sc++) = -1;
    }
    for (int i = 0; i < m; ++i) A(i, n + n_slack + i) = 1;
  }

  Revised rs(A, b);
  rs.basis.resize(m);
  rs.in_basis.assign(total, 0);
  for (int i = 0; i < m; ++i) {
    rs.basis[i] = n + n_slack + i;
    rs.in_basis[n + n_slack + i] = 1;
  }
  rs.cost = Eigen::VectorXd::Zero(total);
  rs.cost.tail(m).setOnes();

  LPResult out;
  int rc = rs.run(max_iters, n + n_slack);  // artificials never re-enter
  if (rc == 2) return out;
  if (rs.objective() > 1e-7 * (1.0 + b.cwiseAbs().maxCoeff())) {
    out.status = LPStatus::Infeasible;
    return out;
  }
  // drive any artificial still basic (at zero level) out of the basis
  for (int i = 0; i < m; ++i) {
    if (rs.basis[i] < n + n_slack) continue;
    Eigen::RowVectorXd row = rs.Binv.row(i) * A.leftCols(n + n_slack);
    for (int j = 0; j < n + n_slack; ++j)
      if (!rs.in_basis[j] && std::abs(row(j)) > 1e-7) {
        rs.in_basis[rs.basis[i]] = 0;
        rs.basis[i] = j;
        rs.in_basis[j] = 1;
        rs.refactor();
        break;
      }
  }

  rs.cost.setZero();
  rs.cost.head(n) = lp.c;
  rc = rs.run(max_iters, n + n_slack);
  if (rc == 2) return out;
  if (rc == 1) {
    out.status = LPStatus::Unbounded;
    return out;
  }
  out.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i)
    if (rs.basis[i] < n) out.x(rs.basis[i]) = rs.xB(i);
  out.objective = lp.c.dot(out.x);
  out.status = LPStatus::Optimal;
  return out;
}

}  // namespace spinspec
