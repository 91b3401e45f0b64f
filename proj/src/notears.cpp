#include "varattack/notears.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace varattack {

AcyclicityValue acyclicity(const MatrixXd& w) {
  if (w.rows() != w.cols()) throw std::invalid_argument("weight matrix must be square");
  const Index d = w.rows();
  const MatrixXd e = matrix_exponential(w.cwiseProduct(w));
  AcyclicityValue out;
  out.h = e.trace() - static_cast<double>(d);
  out.grad = e.transpose().cwiseProduct(2.0 * w);
  return out;
}

LossValue loss(const MatrixXd& w, const DataMatrix& data) {
  if (w.rows() != w.cols()) throw std::invalid_argument("weight matrix must be square");
  if (w.rows() != data.d()) throw std::invalid_argument("weight matrix and data dimension mismatch");
  const double n = static_cast<double>(data.n());
  const MatrixXd resid = data.values - data.values * w;
  LossValue out;
  out.value = resid.squaredNorm() / (2.0 * n);
  out.grad = -(data.values.transpose() * resid) / n;
  return out;
}

namespace {

bool reaches(const BoolMatrix& adj, Index from, Index to) {
  if (from == to) return true;
  const Index d = adj.rows();
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  std::vector<Index> stack{from};
  seen[static_cast<std::size_t>(from)] = true;
  while (!stack.empty()) {
    const Index u = stack.back();
    stack.pop_back();
    for (Index v = 0; v < d; ++v) {
      if (adj(u, v) && !seen[static_cast<std::size_t>(v)]) {
        if (v == to) return true;
        seen[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    }
  }
  return false;
}

}  // namespace

DagStructure threshold(const MatrixXd& w, double omega) {
  if (w.rows() != w.cols()) throw std::invalid_argument("weight matrix must be square");
  if (omega < 0.0) throw std::invalid_argument("threshold must be nonnegative");
  const Index d = w.rows();
  BoolMatrix edges = BoolMatrix::Constant(d, d, false);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j)
      if (std::abs(w(i, j)) > omega) edges(i, j) = true;

  // Trim cycles by dropping the weakest edge that sits on one, repeatedly.
  while (!is_acyclic(edges)) {
    Index bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) {
        if (!edges(i, j)) continue;
        const double mag = std::abs(w(i, j));
        if (mag >= best) continue;  // lexicographic (i, j) scan keeps ties stable
        if (!reaches(edges, j, i)) continue;
        best = mag;
        bi = i;
        bj = j;
      }
    edges(bi, bj) = false;
  }
  return DagStructure{std::move(edges), default_labels(d)};
}

namespace {

// Inner problem: smooth objective over x = [vec(W+); vec(W-)], x >= 0,
// diagonal coordinates pinned at zero.
//   phi(x) = 0.5 tr((W-I)^T C (W-I)) + lambda1 * sum(x) + 0.5 rho h^2 + alpha h
struct InnerProblem {
  const MatrixXd& gram;  // X^T X / n
  Index d;
  double lambda1;
  double rho;
  double alpha;

  MatrixXd unpack(const VectorXd& x) const {
    const Index m = d * d;
    return Eigen::Map<const MatrixXd>(x.data(), d, d) -
           Eigen::Map<const MatrixXd>(x.data() + m, d, d);
  }

  double eval(const VectorXd& x, VectorXd& grad) const {
    const Index m = d * d;
    const MatrixXd w = unpack(x);
    const MatrixXd diff = w - MatrixXd::Identity(d, d);
    const MatrixXd cdiff = gram * diff;
    const double quad = 0.5 * diff.cwiseProduct(cdiff).sum();

    const MatrixXd e = matrix_exponential(w.cwiseProduct(w));
    const double h = e.trace() - static_cast<double>(d);
    const MatrixXd hgrad = e.transpose().cwiseProduct(2.0 * w);

    const MatrixXd gw = cdiff + (rho * h + alpha) * hgrad;
    grad.resize(2 * m);
    Eigen::Map<MatrixXd>(grad.data(), d, d) = gw.array() + lambda1;
    Eigen::Map<MatrixXd>(grad.data() + m, d, d) = -gw.array() + lambda1;
    return quad + lambda1 * x.sum() + 0.5 * rho * h * h + alpha * h;
  }
};

struct LbfgsMemory {
  std::deque<VectorXd> s, y;
  std::deque<double> inv_sy;

  void push(const VectorXd& sv, const VectorXd& yv) {
    const double sy = sv.dot(yv);
    if (sy <= 1e-12 * sv.norm() * yv.norm()) return;
    s.push_back(sv);
    y.push_back(yv);
    inv_sy.push_back(1.0 / sy);
    if (s.size() > 10) {
      s.pop_front();
      y.pop_front();
      inv_sy.pop_front();
    }
  }

  // Two-loop recursion applied to q (already restricted to free coordinates).
  VectorXd apply(VectorXd q) const {
    const int k = static_cast<int>(s.size());
    std::vector<double> a(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
      a[static_cast<std::size_t>(i)] =
          inv_sy[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(i)].dot(q);
      q -= a[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    }
    if (k > 0) {
      const auto& ylast = y[static_cast<std::size_t>(k - 1)];
      const double gamma =
          s[static_cast<std::size_t>(k - 1)].dot(ylast) / ylast.squaredNorm();
      q *= std::clamp(gamma, 1e-10, 1e10);
    }
    for (int i = 0; i < k; ++i) {
      const double b = inv_sy[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)].dot(q);
      q += (a[static_cast<std::size_t>(i)] - b) * s[static_cast<std::size_t>(i)];
    }
    return q;
  }
};

// Box-constrained (x >= 0) L-BFGS with gradient projection and a backtracking
// Armijo search along the projected path. Deterministic.
VectorXd minimize_box(const InnerProblem& prob, VectorXd x, double tol, int max_iter,
                      const std::vector<bool>& fixed, std::vector<double>* objective_log) {
  const Index m = x.size();
  VectorXd grad(m);
  double phi = prob.eval(x, grad);
  if (objective_log) objective_log->push_back(phi);
  LbfgsMemory memory;

  for (int iter = 0; iter < max_iter; ++iter) {
    double pg_norm = 0.0;
    for (Index i = 0; i < m; ++i) {
      if (fixed[static_cast<std::size_t>(i)]) continue;
      const double pg = x[i] > 0.0 ? grad[i] : std::min(grad[i], 0.0);
      pg_norm = std::max(pg_norm, std::abs(pg));
    }
    if (pg_norm <= tol) break;

    VectorXd masked = grad;
    for (Index i = 0; i < m; ++i)
      if (fixed[static_cast<std::size_t>(i)] || (x[i] <= 0.0 && grad[i] > 0.0)) masked[i] = 0.0;

    VectorXd dir = -memory.apply(masked);
    for (Index i = 0; i < m; ++i)
      if (fixed[static_cast<std::size_t>(i)] || (x[i] <= 0.0 && grad[i] > 0.0)) dir[i] = 0.0;
    if (dir.dot(masked) > -1e-12 * dir.norm() * masked.norm()) dir = -masked;

    double step = iter == 0 ? std::min(1.0, 1.0 / (1.0 + masked.lpNorm<Eigen::Infinity>())) : 1.0;
    bool accepted = false;
    VectorXd x_new(m), grad_new(m);
    double phi_new = phi;
    for (int back = 0; back < 60; ++back) {
      x_new = (x + step * dir).cwiseMax(0.0);
      const double decrease = grad.dot(x_new - x);
      phi_new = prob.eval(x_new, grad_new);
      if (phi_new <= phi + 1e-4 * decrease && decrease < 0.0) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no further progress at floating-point resolution

    memory.push(x_new - x, grad_new - grad);
    x = std::move(x_new);
    grad = std::move(grad_new);
    phi = phi_new;
    if (objective_log) objective_log->push_back(phi);
  }
  return x;
}

}  // namespace

SolveResult solve(const DataMatrix& data, const NotearsConfig& config) {
  if (!data.values.allFinite())
    throw std::invalid_argument("data contains NaN or infinite entries");
  if (data.n() < 2) throw std::invalid_argument("need at least two samples");
  if (config.max_outer < 1 || config.max_inner < 1)
    throw std::invalid_argument("iteration limits must be positive");
  if (!(config.h_tol > 0.0)) throw std::invalid_argument("h_tol must be positive");
  if (config.lambda1 < 0.0) throw std::invalid_argument("lambda1 must be nonnegative");

  const Index d = data.d();
  const Index m = d * d;
  const MatrixXd gram =
      data.values.transpose() * data.values / static_cast<double>(data.n());

  std::vector<bool> fixed(static_cast<std::size_t>(2 * m), false);
  for (Index i = 0; i < d; ++i) {
    fixed[static_cast<std::size_t>(i * d + i)] = true;
    fixed[static_cast<std::size_t>(m + i * d + i)] = true;
  }

  const double rho_cap = 1e16;
  VectorXd x = VectorXd::Zero(2 * m);
  double alpha = 0.0;
  double rho = config.rho_init;
  double h_prev = std::numeric_limits<double>::infinity();

  SolveResult result;
  double h = std::numeric_limits<double>::infinity();
  MatrixXd w = MatrixXd::Zero(d, d);

  for (int outer = 1; outer <= config.max_outer; ++outer) {
    InnerProblem prob{gram, d, config.lambda1, rho, alpha};
    x = minimize_box(prob, std::move(x), config.inner_tol, config.max_inner, fixed,
                     config.record_inner ? &result.inner_objectives : nullptr);
    w = prob.unpack(x);
    h = acyclicity(w).h;

    const MatrixXd diff = w - MatrixXd::Identity(d, d);
    const double objective =
        0.5 * diff.cwiseProduct(gram * diff).sum() + config.lambda1 * w.cwiseAbs().sum();
    result.trace.push_back(OuterIterate{outer, objective, h, rho});

    alpha += rho * h;
    if (h <= config.h_tol) {
      result.converged = true;
      break;
    }
    if (h > 0.25 * h_prev) rho = std::min(rho * config.rho_mult, rho_cap);
    h_prev = h;
  }

  result.w = std::move(w);
  result.h_final = h;
  result.objective_final = result.trace.empty() ? 0.0 : result.trace.back().objective;
  result.graph = threshold(result.w, config.omega);
  result.graph.labels = data.labels;
  return result;
}

}  // namespace varattack
