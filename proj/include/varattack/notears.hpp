#pragma once

#include <cmath>
#include <vector>

#include "varattack/graph.hpp"
#include "varattack/scm.hpp"
#include "varattack/types.hpp"

namespace varattack {

// Dense matrix exponential by scaling-and-squaring with a degree-13 Pade
// approximant. Accurate to ~1e-13 relative for the norms seen here (the
// acyclicity penalty evaluates it on entrywise squares with 1-norm <= ~10).
template <typename Derived>
MatrixX<typename Derived::Scalar> matrix_exponential(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  using Mat = MatrixX<Scalar>;

  Mat a = input;
  const Index d = a.rows();
  const double theta13 = 5.371920351148152;
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();

  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    a *= Scalar(std::ldexp(1.0, -squarings));
  }

  static const double b[14] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};

  const Mat ident = Mat::Identity(d, d);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a2 * a4;
  const Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                     b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

  Mat r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

struct AcyclicityValue {
  double h = 0.0;     // trace(exp(W .* W)) - d; zero exactly on DAG supports
  MatrixXd grad;      // exp(W .* W)^T .* 2W
};

AcyclicityValue acyclicity(const MatrixXd& w);

struct LossValue {
  double value = 0.0;  // (1/2n) * ||X - XW||_F^2
  MatrixXd grad;       // (1/n) * X^T (XW - X)
};

LossValue loss(const MatrixXd& w, const DataMatrix& data);

// Edges where |w_ij| > omega. If the result still contains a cycle the
// smallest-magnitude edge lying on some cycle is removed, repeatedly;
// magnitude ties break lexicographically on (i, j).
DagStructure threshold(const MatrixXd& w, double omega);

struct NotearsConfig {
  double lambda1 = 0.1;     // L1 penalty weight
  double rho_init = 1.0;    // initial quadratic penalty
  double rho_mult = 10.0;   // growth factor when h stalls
  double h_tol = 1e-8;      // outer stopping tolerance on h
  int max_outer = 100;
  double inner_tol = 1e-6;  // infinity norm of the projected gradient
  int max_inner = 1000;
  double omega = 0.3;       // threshold for the reported structure
  bool record_inner = false;
};

struct OuterIterate {
  int outer = 0;
  double objective = 0.0;  // loss + lambda1 * ||W||_1 at the iterate
  double h = 0.0;
  double rho = 0.0;
};

struct SolveResult {
  MatrixXd w;               // continuous solution, zero diagonal
  DagStructure graph;       // threshold(w, omega)
  double h_final = 0.0;
  double objective_final = 0.0;
  bool converged = false;
  std::vector<OuterIterate> trace;
  std::vector<double> inner_objectives;  // filled when config.record_inner
};

// Least-squares structure learner: minimizes
//   (1/2n) ||X - XW||_F^2 + lambda1 ||W||_1
// subject to acyclicity, via an augmented Lagrangian on h(W) with the L1 term
// handled by splitting W = W+ - W- and running box-constrained L-BFGS on the
// nonnegative halves (diagonal pinned to zero). Deterministic: W starts at 0
// and every step is derived from (data, config) alone. Outer loop: after each
// inner minimization, alpha += rho * h; rho grows by rho_mult whenever h fails
// to shrink fourfold. Stops at h <= h_tol or max_outer (flagged not converged).
SolveResult solve(const DataMatrix& data, const NotearsConfig& config = {});

}  // namespace varattack
