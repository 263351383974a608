#include "suppest/sip.hpp"

#include <Eigen/Dense>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "suppest/errors.hpp"

namespace suppest {

IntervalSpec IntervalSpec::range(double lo, double hi) {
  if (!(lo > 0.0) || !std::isfinite(hi) || !(lo <= hi))
    throw InvalidInterval("interval needs 0 < lo <= hi, got [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
  return {lo, hi, lo == hi};
}

IntervalSpec IntervalSpec::point(double x) { return range(x, x); }

namespace {

void check_positive(double n, double k, int degree, const char* who) {
  if (!(n > 0.0) || !(k > 0.0) || !std::isfinite(n) || !std::isfinite(k))
    throw DomainError(std::string(who) + ": n and k must be positive");
  if (degree < 1) throw DomainError(std::string(who) + ": degree must be >= 1");
}

}  // namespace

IntervalSpec localized_interval(double n, double k, int degree) {
  check_positive(n, k, degree, "localized_interval");
  const double lo = n / k;
  const double hi = kLocalizationFactor * degree;
  if (lo < hi) return IntervalSpec::range(lo, hi);
  return IntervalSpec::point(lo);
}

IntervalSpec mrs_interval(double n, double k, int degree) {
  check_positive(n, k, degree, "mrs_interval");
  const double lo = n / k;
  return IntervalSpec::range(lo, lo + std::numbers::pi * degree / 2.0);
}

GridSpec build_grid(const IntervalSpec& interval, std::size_t s) {
  GridSpec grid;
  grid.interval_ = interval;
  if (interval.degenerate) {
    if (s != 1) throw InvalidGrid("a degenerate interval takes exactly one grid point");
    grid.points_ = {interval.lo};
    return grid;
  }
  if (s < 2) throw InvalidGrid("a proper interval needs at least two grid points");
  grid.spacing_ = (interval.hi - interval.lo) / static_cast<double>(s - 1);
  grid.points_.resize(s);
  for (std::size_t i = 0; i + 1 < s; ++i)
    grid.points_[i] = interval.lo + static_cast<double>(i) * grid.spacing_;
  grid.points_.back() = interval.hi;
  return grid;
}

void SipProblem::validate() const {
  if (degree < 0) throw DomainError("sip: degree must be nonnegative");
  if (grid.size() == 0) throw InvalidGrid("sip: empty grid");
  if (!(reg_weight >= 0.0) || !std::isfinite(reg_weight))
    throw DomainError("sip: reg_weight must be nonnegative");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw DomainError("sip: ridge must be nonnegative");
  if (reg_weight == 0.0 && ridge == 0.0 && degree > 0 &&
      grid.size() < static_cast<std::size_t>(degree) + 2)
    throw RankDeficient("sip: unregularized problem needs at least L + 2 grid points (have " +
                        std::to_string(grid.size()) + ", L = " + std::to_string(degree) +
                        "); use a larger s or a ridge");
}

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Constraint data in scaled coordinates y_l = a_l l!, where the objective at
// lambda_i reads
//   h_i(x) = w sum_l p_il x_l^2 + w p_i0 + ridge |x|^2 + (p_i . x - p_i0)^2
// with p_il = e^{-lambda} lambda^l / l! (Poisson pmf) and x = y_1..y_L
// restricted to the columns whose pmf is not identically zero on the grid.
struct Constraints {
  Mat P;             // s x m pmf columns for the free coordinates
  Vec p0;            // s pmf at l = 0
  std::vector<int> free_index;  // free coordinate -> l
  double w = 0.0;
  double ridge = 0.0;

  Eigen::Index size() const { return p0.size(); }
  Eigen::Index dim() const { return P.cols(); }

  Vec residual(const Vec& x) const { return P * x - p0; }

  Vec values(const Vec& x) const {
    const Vec r = residual(x);
    Vec h = r.array().square();
    if (w > 0.0) h.array() += w * ((P * x.array().square().matrix()).array() + p0.array());
    if (ridge > 0.0) h.array() += ridge * x.squaredNorm();
    return h;
  }

  // Rows are gradients of h_i.
  Mat gradients(const Vec& x) const {
    const Vec r = residual(x);
    Mat G = 2.0 * (r.asDiagonal() * P);
    if (w > 0.0) G += 2.0 * w * (P * x.asDiagonal());
    if (ridge > 0.0) G.rowwise() += 2.0 * ridge * x.transpose();
    return G;
  }

  // sum_i weight_i * Hess(h_i) / 2
  Mat weighted_quadratic(const Vec& weight) const {
    Mat A = P.transpose() * weight.asDiagonal() * P;
    if (w > 0.0) A.diagonal() += w * (P.transpose() * weight);
    if (ridge > 0.0) A.diagonal().array() += ridge * weight.sum();
    return A;
  }
};

Constraints build_constraints(const SipProblem& problem) {
  const auto& pts = problem.grid.points();
  const auto s = static_cast<Eigen::Index>(pts.size());
  const int L = problem.degree;
  const auto lf = log_factorials(L);

  Mat full(s, L + 1);
  for (Eigen::Index i = 0; i < s; ++i) {
    const double lam = pts[static_cast<std::size_t>(i)];
    const double log_lam = std::log(lam);
    for (int l = 0; l <= L; ++l)
      full(i, l) = std::exp(l * log_lam - lf[static_cast<std::size_t>(l)] - lam);
  }

  Constraints c;
  c.w = problem.reg_weight;
  c.ridge = problem.ridge;
  c.p0 = full.col(0);
  for (int l = 1; l <= L; ++l)
    if (full.col(l).maxCoeff() > 0.0) c.free_index.push_back(l);
  c.P.resize(s, static_cast<Eigen::Index>(c.free_index.size()));
  for (std::size_t j = 0; j < c.free_index.size(); ++j)
    c.P.col(static_cast<Eigen::Index>(j)) = full.col(c.free_index[j]);
  return c;
}

// Solves A z = b for symmetric positive semidefinite A after symmetric
// diagonal scaling. Returns false when the scaled matrix is numerically
// singular.
bool spd_solve(const Mat& A, const Vec& b, Vec& z) {
  const Eigen::Index m = A.rows();
  Vec d(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double a = A(j, j);
    if (!(a > 0.0) || !std::isfinite(a)) return false;
    d(j) = 1.0 / std::sqrt(a);
  }
  const Mat S = d.asDiagonal() * A * d.asDiagonal();
  Eigen::LDLT<Mat> ldlt(S);
  if (ldlt.info() != Eigen::Success) return false;
  const Vec dd = ldlt.vectorD();
  if (!(dd.minCoeff() > dd.cwiseAbs().maxCoeff() * 1e-18)) return false;
  const Vec rhs = d.asDiagonal() * b;
  Vec u = ldlt.solve(rhs);
  // One round of iterative refinement.
  u += ldlt.solve(rhs - S * u);
  z = d.asDiagonal() * u;
  return z.allFinite();
}

struct Certificate {
  double dual_value = -std::numeric_limits<double>::infinity();
  Vec x;  // Lagrangian minimizer at the weights
  bool ok = false;
};

Certificate dual_bound(const Constraints& c, const Vec& weights) {
  Certificate cert;
  const Mat A = c.weighted_quadratic(weights);
  const Vec b = c.P.transpose() * (weights.array() * c.p0.array()).matrix();
  if (!spd_solve(A, b, cert.x)) return cert;
  cert.dual_value = weights.dot(c.values(cert.x));
  cert.ok = true;
  return cert;
}

Polynomial to_polynomial(const Constraints& c, int degree, const Vec& x) {
  std::vector<double> a(static_cast<std::size_t>(degree) + 1, 0.0);
  a[0] = -1.0;
  double fact = 1.0;
  std::size_t j = 0;
  for (int l = 1; l <= degree; ++l) {
    fact *= l;
    if (j < c.free_index.size() && c.free_index[j] == l) {
      a[static_cast<std::size_t>(l)] = x(static_cast<Eigen::Index>(j)) / fact;
      ++j;
    }
  }
  return Polynomial(std::move(a));
}

Vec from_polynomial(const Constraints& c, const Polynomial& p) {
  Vec x = Vec::Zero(c.dim());
  const auto lf = log_factorials(p.degree());
  for (std::size_t j = 0; j < c.free_index.size(); ++j) {
    const auto l = static_cast<std::size_t>(c.free_index[j]);
    x(static_cast<Eigen::Index>(j)) = p[l] * std::exp(lf[l]);
  }
  return x;
}

std::string fmt_double(double v) { return fmt::format("{:.3g}", v); }

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

// No free coordinates: the constraint values do not depend on x.
SolveResult solve_fixed(const Constraints& c, int degree) {
  const Vec h = c.values(Vec::Zero(c.dim()));
  Eigen::Index arg = 0;
  const double top = h.maxCoeff(&arg);
  SolveResult out;
  out.coeffs = to_polynomial(c, degree, Vec::Zero(c.dim()));
  out.t_d = top;
  out.dual_value = top;
  out.duality_gap = 0.0;
  out.dual_weights.assign(static_cast<std::size_t>(c.size()), 0.0);
  out.dual_weights[static_cast<std::size_t>(arg)] = 1.0;
  return out;
}

// One grid point: the problem is a single strictly convex quadratic.
SolveResult solve_single(const Constraints& c, int degree) {
  const Vec weights = Vec::Ones(1);
  Certificate cert = dual_bound(c, weights);
  if (!cert.ok)
    throw RankDeficient("sip: single-point quadratic is singular; add regularization or a ridge");
  SolveResult out;
  out.coeffs = to_polynomial(c, degree, cert.x);
  out.t_d = c.values(cert.x)(0);
  out.dual_value = cert.dual_value;
  out.duality_gap = std::max(0.0, out.t_d - cert.dual_value);
  out.iterations = 1;
  out.dual_weights = {1.0};
  return out;
}

// Candidate primal/dual pair evaluated against the full grid.
struct Candidate {
  Vec x;
  Vec weights;  // normalized, full grid length
  double primal = std::numeric_limits<double>::infinity();
  double dual = -std::numeric_limits<double>::infinity();
  double gap() const { return std::max(0.0, primal - dual); }
};

std::optional<Candidate> evaluate(const Constraints& c, const Vec& x, const Vec& weights) {
  const double total = weights.sum();
  if (!(total > 0.0) || !std::isfinite(total)) return std::nullopt;
  const Vec wn = weights / total;
  Certificate cert = dual_bound(c, wn);
  if (!cert.ok) return std::nullopt;
  Candidate out;
  out.weights = wn;
  out.dual = cert.dual_value;
  out.x = x;
  out.primal = c.values(x).maxCoeff();
  const double primal_w = c.values(cert.x).maxCoeff();
  if (primal_w < out.primal) {
    out.primal = primal_w;
    out.x = cert.x;
  }
  return out;
}

// Newton on the optimality system restricted to a guessed active set:
//   sum_A w_i grad h_i(x) = 0,  sum_A w_i = 1,  h_i(x) = t  (i in A).
// Converges quadratically once the barrier has isolated the active points.
std::optional<Candidate> polish(const Constraints& c, const Candidate& from) {
  const Eigen::Index m = c.dim();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.size(); ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return from.weights(a) > from.weights(b);
  });
  const double w_top = from.weights(order.front());
  std::vector<Eigen::Index> active;
  for (Eigen::Index i : order) {
    if (static_cast<Eigen::Index>(active.size()) > m || from.weights(i) < 1e-6 * w_top) break;
    active.push_back(i);
  }

  for (int attempt = 0; attempt < 4 && !active.empty(); ++attempt) {
    const auto na = static_cast<Eigen::Index>(active.size());
    Vec x = from.x;
    Vec w(na);
    for (Eigen::Index j = 0; j < na; ++j) w(j) = from.weights(active[static_cast<std::size_t>(j)]);
    w /= w.sum();
    double t = from.primal;

    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      const Vec h = c.values(x);
      const Mat G = c.gradients(x);
      Vec wfull = Vec::Zero(c.size());
      Mat GA(na, m);
      Vec hA(na);
      for (Eigen::Index j = 0; j < na; ++j) {
        const Eigen::Index i = active[static_cast<std::size_t>(j)];
        wfull(i) = w(j);
        GA.row(j) = G.row(i);
        hA(j) = h(i);
      }
      const Eigen::Index dim = m + na + 1;
      Vec F(dim);
      F.head(m) = GA.transpose() * w;
      F(m) = w.sum() - 1.0;
      F.tail(na) = hA.array() - t;
      // Unknown order: x (m), t (1), w (na).
      Mat J = Mat::Zero(dim, dim);
      J.topLeftCorner(m, m) = 2.0 * c.weighted_quadratic(wfull);
      J.block(0, m + 1, m, na) = GA.transpose();
      J.block(m, m + 1, 1, na).setOnes();
      J.block(m + 1, 0, na, m) = GA;
      J.block(m + 1, m, na, 1).setConstant(-1.0);
      const Vec delta = J.fullPivLu().solve(-F);
      if (!delta.allFinite()) break;
      x += delta.head(m);
      t += delta(m);
      w += delta.tail(na);
      const double scale = std::max(std::abs(t), std::numeric_limits<double>::min());
      if (delta.head(m).cwiseAbs().maxCoeff() <= 1e-15 * (1.0 + x.cwiseAbs().maxCoeff()) &&
          std::abs(delta(m)) <= 1e-15 * scale) {
        converged = true;
        break;
      }
    }
    if (!converged && !x.allFinite()) return std::nullopt;

    Eigen::Index worst = 0;
    if (w.minCoeff(&worst) < 0.0) {
      active.erase(active.begin() + worst);
      continue;
    }
    Vec wfull = Vec::Zero(c.size());
    for (Eigen::Index j = 0; j < na; ++j) wfull(active[static_cast<std::size_t>(j)]) = w(j);
    return evaluate(c, x, wfull);
  }
  return std::nullopt;
}

constexpr double kRelativeTarget = 1e-12;
constexpr double kPolishBelow = 1e-4;
constexpr int kSlowCentering = 30;
constexpr int kMaxCentering = 200;
constexpr Eigen::Index kExchangeAbove = 400;
constexpr Eigen::Index kExchangeSeed = 129;
constexpr int kExchangeRounds = 50;
constexpr double kBarrierGrowth = 10.0;
constexpr double kCenteringTol = 1e-8;

// Log-barrier path following on  min t  s.t.  h_i(x) <= t, finished by an
// active-set Newton polish.
// Newton direction for the barrier in (x, t). The Hessian is M^T M with
//   M = [ diag(inv) [G, -1] ; sqrt(2 inv_i) [p_i, 0] ; variance and ridge rows ]
// and is factored through a QR of M, never formed explicitly, because it
// becomes too ill-conditioned for a normal-equations solve near the optimum.
bool newton_step(const Constraints& c, const Mat& G, const Vec& inv, const Vec& grad, Vec& step) {
  const Eigen::Index s = c.size();
  const Eigen::Index m = c.dim();
  const Eigen::Index extra = (c.w > 0.0 ? m : 0) + (c.ridge > 0.0 ? m : 0);
  Mat M = Mat::Zero(2 * s + extra, m + 1);
  M.topLeftCorner(s, m) = inv.asDiagonal() * G;
  M.block(0, m, s, 1) = -inv;
  M.block(s, 0, s, m) = inv.cwiseSqrt().asDiagonal() * c.P * std::sqrt(2.0);
  Eigen::Index row = 2 * s;
  if (c.w > 0.0) {
    const Vec d = (2.0 * c.w * (c.P.transpose() * inv)).cwiseSqrt();
    M.block(row, 0, m, m) = d.asDiagonal();
    row += m;
  }
  if (c.ridge > 0.0) M.block(row, 0, m, m).diagonal().setConstant(std::sqrt(2.0 * c.ridge * inv.sum()));

  Vec scale = M.colwise().norm().transpose();
  if (!(scale.minCoeff() > 0.0) || !scale.allFinite()) return false;
  scale = scale.cwiseInverse();
  M = M * scale.asDiagonal();
  Eigen::HouseholderQR<Mat> qr(M);
  const auto R = qr.matrixQR().topRows(m + 1).triangularView<Eigen::Upper>();
  const Vec diag = qr.matrixQR().diagonal().cwiseAbs();
  if (!(diag.minCoeff() > 1e-14 * diag.maxCoeff())) return false;
  const Vec rhs = -(scale.asDiagonal() * grad);
  Vec u = R.transpose().solve(rhs);
  u = R.solve(u);
  step = scale.asDiagonal() * u;
  return step.allFinite();
}

struct BarrierRun {
  std::optional<Candidate> best;
  long iterations = 0;
};

// Path following on  min t  s.t. h_i(x) <= t,  started from x_start. Stops
// once the certified gap is under min(tol, kRelativeTarget * primal), when
// progress stalls, or when the step budget runs out.
BarrierRun run_barrier(const Constraints& c, const Vec& x_start, double tol, long budget) {
  const Eigen::Index m = c.dim();
  constexpr double tiny = std::numeric_limits<double>::min();

  Vec x = x_start;
  const double h0 = c.values(x).maxCoeff();
  double t = 2.0 * h0 + tiny;
  double tau = static_cast<double>(c.size()) / std::max(t, tiny);
  double growth = kBarrierGrowth;

  BarrierRun run;
  auto& best = run.best;
  long& iterations = run.iterations;
  int stalled = 0;
  double polished_at = std::numeric_limits<double>::infinity();

  // Stalls only count once the tolerance is met or the barrier's own gap
  // s / tau is far below the best certified gap, so tau growth should have
  // helped.
  auto consider = [&](std::optional<Candidate> cand) {
    const bool tight = best && (best->gap() <= tol ||
                                static_cast<double>(c.size()) / tau < 1e-2 * best->gap());
    if (!cand) {
      if (tight) ++stalled;
      return;
    }
    if (!best || cand->gap() < best->gap()) {
      stalled = (tight && cand->gap() > 0.5 * best->gap()) ? stalled + 1 : 0;
      best = std::move(cand);
    } else if (tight) {
      ++stalled;
    }
  };
  auto barrier_value = [&](const Vec& xv, double tv) {
    const Eigen::ArrayXd slack = tv - c.values(xv).array();
    if ((slack <= 0.0).any()) return std::numeric_limits<double>::infinity();
    return tau * tv - slack.log().sum();
  };

  while (true) {
    bool centered = false;
    int steps = 0;
    while (iterations < budget && steps < kMaxCentering) {
      const Vec h = c.values(x);
      const Vec inv = (t - h.array()).inverse();
      const Mat G = c.gradients(x);

      Vec grad(m + 1);
      grad.head(m) = G.transpose() * inv;
      grad(m) = tau - inv.sum();

      Vec step;
      if (!newton_step(c, G, inv, grad, step)) break;
      ++iterations;
      ++steps;
      const double decrement2 = -grad.dot(step);
      if (!(decrement2 > kCenteringTol)) {
        centered = true;
        break;
      }
      // Backtracking on the barrier value; near the center the value is
      // dominated by rounding, so only feasibility is enforced there.
      const double f0 = barrier_value(x, t);
      double alpha = 1.0;
      bool moved = false;
      for (int back = 0; back < 60; ++back, alpha *= 0.5) {
        const Vec xn = x + alpha * step.head(m);
        const double tn = t + alpha * step(m);
        const double fn = barrier_value(xn, tn);
        if (!std::isfinite(fn)) continue;
        if (decrement2 < 1e-2 || fn <= f0 - 0.25 * alpha * decrement2) {
          x = xn;
          t = tn;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }

    const Vec inv = (t - c.values(x).array()).inverse();
    consider(evaluate(c, x, inv / tau));
    if (best) {
      const double rel = best->gap() / std::max(best->primal, tiny);
      if (rel < kPolishBelow && best->gap() < 0.1 * polished_at) {
        polished_at = best->gap();
        consider(polish(c, *best));
      }
      if (best->gap() <= std::min(tol, kRelativeTarget * best->primal)) break;
    }
    if (!centered || stalled >= 4 || tau > 1e300) break;
    // Long centerings mean tau is moving too fast for this instance.
    if (steps > kSlowCentering)
      growth = std::max(std::sqrt(growth), 2.0);
    else if (steps < kSlowCentering / 3)
      growth = std::min(growth * growth, kBarrierGrowth);
    tau *= growth;
  }
  return run;
}

Constraints restrict_rows(const Constraints& c, const std::vector<Eigen::Index>& rows) {
  Constraints out;
  out.w = c.w;
  out.ridge = c.ridge;
  out.free_index = c.free_index;
  const auto n = static_cast<Eigen::Index>(rows.size());
  out.P.resize(n, c.dim());
  out.p0.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out.P.row(j) = c.P.row(rows[static_cast<std::size_t>(j)]);
    out.p0(j) = c.p0(rows[static_cast<std::size_t>(j)]);
  }
  return out;
}

// Large grids are solved by exchange: run the barrier on a subset, add the
// full-grid local maxima that exceed the subset optimum, repeat. Weights
// supported on a subset still give a valid lower bound for the full grid.
std::optional<Candidate> exchange(const Constraints& c, const Vec& x_start, double tol,
                                  long budget, long& iterations) {
  const Eigen::Index s = c.size();
  std::vector<char> in(static_cast<std::size_t>(s), 0);
  const Eigen::Index stride = std::max<Eigen::Index>(1, (s - 1) / (kExchangeSeed - 1));
  for (Eigen::Index i = 0; i < s; i += stride) in[static_cast<std::size_t>(i)] = 1;
  in.back() = 1;

  std::optional<Candidate> best;
  Vec x = x_start;
  for (int round = 0; round < kExchangeRounds && iterations < budget; ++round) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < s; ++i)
      if (in[static_cast<std::size_t>(i)]) rows.push_back(i);
    const Constraints sub = restrict_rows(c, rows);
    BarrierRun run = run_barrier(sub, x, tol, budget - iterations);
    iterations += run.iterations;
    if (!run.best) break;

    Vec weights = Vec::Zero(s);
    for (std::size_t j = 0; j < rows.size(); ++j)
      weights(rows[j]) = run.best->weights(static_cast<Eigen::Index>(j));
    std::optional<Candidate> cand = evaluate(c, run.best->x, weights);
    if (cand && (!best || cand->gap() < best->gap())) best = cand;
    if (best && best->gap() <= std::min(tol, kRelativeTarget * best->primal)) break;

    x = run.best->x;
    const Vec h = c.values(x);
    int added = 0;
    for (Eigen::Index i = 0; i < s; ++i) {
      if (in[static_cast<std::size_t>(i)] || !(h(i) > run.best->primal)) continue;
      if ((i > 0 && h(i) < h(i - 1)) || (i + 1 < s && h(i) < h(i + 1))) continue;
      for (Eigen::Index j = std::max<Eigen::Index>(0, i - 1); j <= std::min(s - 1, i + 1); ++j)
        in[static_cast<std::size_t>(j)] = 1;
      ++added;
    }
    if (added == 0) break;
  }
  return best;
}

SolveResult solve_grid(const Constraints& c, int degree, const SolveOptions& options,
                       const Vec& x_start) {
  long iterations = 0;
  std::optional<Candidate> best;
  if (c.size() <= kExchangeAbove) {
    BarrierRun run = run_barrier(c, x_start, options.tol, options.max_iter);
    iterations = run.iterations;
    best = std::move(run.best);
  } else {
    best = exchange(c, x_start, options.tol, options.max_iter, iterations);
  }
  if (!best)
    throw RankDeficient("sip: aggregate quadratic form is singular (use a larger s or a ridge)");

  SolveResult out;
  out.coeffs = to_polynomial(c, degree, best->x);
  out.t_d = best->primal;
  out.dual_value = best->dual;
  out.duality_gap = best->gap();
  out.iterations = iterations;
  out.dual_weights = to_std(best->weights);
  if (!(out.duality_gap <= options.tol)) {
    const auto a = out.coeffs.coeffs();
    throw NonConvergence("sip: duality gap " + fmt_double(out.duality_gap) +
                             " above tolerance " + fmt_double(options.tol) + " after " +
                             std::to_string(iterations) + " Newton steps",
                         std::vector<double>(a.begin(), a.end()), out.duality_gap);
  }
  return out;
}

}  // namespace

SolveResult solve(const SipProblem& problem, const SolveOptions& options) {
  problem.validate();
  if (!(options.tol > 0.0)) throw DomainError("sip: tol must be positive");
  if (options.max_iter < 1) throw DomainError("sip: max_iter must be positive");
  if (options.start) {
    if (options.start->degree() != problem.degree)
      throw DomainError("sip: start polynomial degree does not match the problem");
    if (!options.start->is_estimator()) throw InvalidEstimator("sip: start needs a_0 = -1");
  }

  const Constraints c = build_constraints(problem);
  if (c.dim() == 0) return solve_fixed(c, problem.degree);
  if (c.size() == 1) return solve_single(c, problem.degree);

  const Vec x0 = options.start ? from_polynomial(c, *options.start) : Vec::Zero(c.dim());
  return solve_grid(c, problem.degree, options, x0);
}

SolveResult solve(const SipProblem& problem, double tol, long max_iter) {
  SolveOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  return solve(problem, options);
}

double certify(const SolveResult& result, const SipProblem& problem, std::size_t oversample) {
  if (oversample < 2) throw DomainError("certify: oversample must be >= 2");
  const auto& interval = problem.grid.interval();
  const std::size_t s = problem.grid.size();
  const GridSpec fine = interval.degenerate ? build_grid(interval, 1)
                                            : build_grid(interval, (s - 1) * oversample + 1);
  double top = -std::numeric_limits<double>::infinity();
  for (double lam : fine.points())
    top = std::max(top, objective_g(result.coeffs, {problem.reg_weight, lam}).g);
  return top;
}

}  // namespace suppest
