#include "rii/lp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace rii {

MilpModel MilpModel::make(int num_vars, Sense sense) {
  MilpModel m;
  m.objective = Eigen::VectorXd::Zero(num_vars);
  m.sense = sense;
  m.bounds.assign(num_vars, {-kInf, kInf});
  m.binary_mask.assign(num_vars, 0);
  return m;
}

void MilpModel::add_constraint(const Eigen::VectorXd& coeffs, Relation rel, double rhs) {
  if (coeffs.size() != objective.size())
    throw std::invalid_argument("MilpModel: constraint coefficient length mismatch");
  constraints.push_back({coeffs, rel, rhs});
}

void MilpModel::set_binary(int var) {
  binary_mask.at(var) = 1;
  auto& [lo, hi] = bounds[var];
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// How an original variable maps into nonnegative standard-form columns.
struct VarMap {
  enum Kind { fixed, shift_lo, shift_hi, split } kind;
  double offset = 0.0;  // x = offset + s (shift_lo), offset - s (shift_hi)
  int col = -1;
  int col_neg = -1;  // split: x = s[col] - s[col_neg]
};

struct LpCore {
  SolveStatus status;
  Eigen::VectorXd x;  // original-variable solution (when optimal)
};

// Dense two-phase tableau simplex over the model with the given working
// bounds (branch-and-bound overrides the model's own bounds per node).
LpCore solve_lp_core(const MilpModel& model,
                     const std::vector<std::pair<double, double>>& bounds) {
  const int n = model.num_vars();

  // Variable mapping into shifted nonnegative columns.
  std::vector<VarMap> vmap(n);
  std::vector<double> ub_rows;  // s <= cap, one per doubly bounded var
  std::vector<int> ub_cols;
  int ns = 0;
  for (int j = 0; j < n; ++j) {
    const auto [lo, hi] = bounds[j];
    if (lo > hi + kFeasTol) return {SolveStatus::infeasible, {}};
    if (std::isfinite(lo) && std::isfinite(hi) && hi - lo <= kFeasTol) {
      vmap[j] = {VarMap::fixed, lo, -1, -1};
    } else if (std::isfinite(lo)) {
      vmap[j] = {VarMap::shift_lo, lo, ns++, -1};
      if (std::isfinite(hi)) {
        ub_cols.push_back(vmap[j].col);
        ub_rows.push_back(hi - lo);
      }
    } else if (std::isfinite(hi)) {
      vmap[j] = {VarMap::shift_hi, hi, ns++, -1};
    } else {
      vmap[j] = {VarMap::split, 0.0, ns, ns + 1};
      ns += 2;
    }
  }

  const int m_orig = static_cast<int>(model.constraints.size());
  const int m = m_orig + static_cast<int>(ub_rows.size());

  // Structural part of every row, rhs adjusted for offsets, rhs made >= 0.
  RowMatrix A = RowMatrix::Zero(m, ns);
  Eigen::VectorXd rhs(m);
  std::vector<Relation> rel(m);
  for (int i = 0; i < m_orig; ++i) {
    const auto& con = model.constraints[i];
    double r = con.rhs;
    for (int j = 0; j < n; ++j) {
      const double a = con.coeffs(j);
      if (a == 0.0) continue;
      switch (vmap[j].kind) {
        case VarMap::fixed: r -= a * vmap[j].offset; break;
        case VarMap::shift_lo:
          A(i, vmap[j].col) += a;
          r -= a * vmap[j].offset;
          break;
        case VarMap::shift_hi:
          A(i, vmap[j].col) -= a;
          r -= a * vmap[j].offset;
          break;
        case VarMap::split:
          A(i, vmap[j].col) += a;
          A(i, vmap[j].col_neg) -= a;
          break;
      }
    }
    rhs(i) = r;
    rel[i] = con.rel;
  }
  for (std::size_t u = 0; u < ub_rows.size(); ++u) {
    const int i = m_orig + static_cast<int>(u);
    A(i, ub_cols[u]) = 1.0;
    rhs(i) = ub_rows[u];
    rel[i] = Relation::le;
  }
  for (int i = 0; i < m; ++i) {
    if (rhs(i) < 0.0) {
      A.row(i) = -A.row(i);
      rhs(i) = -rhs(i);
      if (rel[i] == Relation::le) rel[i] = Relation::ge;
      else if (rel[i] == Relation::ge) rel[i] = Relation::le;
    }
  }

  // Column layout: [structural | slack/surplus | artificial].
  int n_slack = 0, n_art = 0;
  for (int i = 0; i < m; ++i) {
    if (rel[i] != Relation::eq) ++n_slack;
    if (rel[i] != Relation::le) ++n_art;
  }
  const int N = ns + n_slack + n_art;
  RowMatrix T = RowMatrix::Zero(m, N);
  T.leftCols(ns) = A;
  Eigen::VectorXd b = rhs;
  std::vector<int> basis(m);
  const int art_begin = ns + n_slack;
  {
    int sc = ns, ac = art_begin;
    for (int i = 0; i < m; ++i) {
      switch (rel[i]) {
        case Relation::le:
          T(i, sc) = 1.0;
          basis[i] = sc++;
          break;
        case Relation::ge:
          T(i, sc) = -1.0;
          ++sc;
          T(i, ac) = 1.0;
          basis[i] = ac++;
          break;
        case Relation::eq:
          T(i, ac) = 1.0;
          basis[i] = ac++;
          break;
      }
    }
  }

  // Minimization objective over structural columns.
  Eigen::VectorXd c2 = Eigen::VectorXd::Zero(N);
  {
    const double sgn = model.sense == Sense::maximize ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      const double a = sgn * model.objective(j);
      if (a == 0.0) continue;
      switch (vmap[j].kind) {
        case VarMap::fixed: break;
        case VarMap::shift_lo: c2(vmap[j].col) += a; break;
        case VarMap::shift_hi: c2(vmap[j].col) -= a; break;
        case VarMap::split:
          c2(vmap[j].col) += a;
          c2(vmap[j].col_neg) -= a;
          break;
      }
    }
  }

  const double dual_tol = 1e-9;
  long iter = 0;
  const long bland_after = 200 + 20L * (m + N);
  const long iter_cap = 200'000 + 400L * (m + N);

  // Primal simplex sweep over the current tableau. `allow_art` gates the
  // artificial columns as entering candidates.
  auto run = [&](Eigen::VectorXd& d, bool allow_art) -> SolveStatus {
    const int last_col = allow_art ? N : art_begin;
    while (true) {
      if (++iter > iter_cap) throw std::runtime_error("simplex: iteration cap hit (cycling?)");
      const bool bland = iter > bland_after;

      int enter = -1;
      if (bland) {
        for (int jj = 0; jj < last_col; ++jj)
          if (d(jj) < -dual_tol) { enter = jj; break; }
      } else {
        double best = -dual_tol;
        for (int jj = 0; jj < last_col; ++jj)
          if (d(jj) < best) { best = d(jj); enter = jj; }
      }
      if (enter < 0) return SolveStatus::optimal;

      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m; ++i) {
        const double a = T(i, enter);
        if (a > kPivotTol) {
          const double ratio = b(i) / a;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return SolveStatus::unbounded;

      // Pivot on (leave, enter).
      const double piv = T(leave, enter);
      T.row(leave) /= piv;
      b(leave) /= piv;
      for (int i = 0; i < m; ++i) {
        if (i == leave) continue;
        const double f = T(i, enter);
        if (f != 0.0) {
          T.row(i) -= f * T.row(leave);
          b(i) -= f * b(leave);
          if (b(i) < 0.0 && b(i) > -1e-11) b(i) = 0.0;
        }
      }
      const double fd = d(enter);
      if (fd != 0.0) d -= fd * T.row(leave).transpose();
      basis[leave] = enter;
    }
  };

  // Phase 1: drive the artificials to zero.
  if (n_art > 0) {
    Eigen::VectorXd d1 = Eigen::VectorXd::Zero(N);
    d1.segment(art_begin, n_art).setOnes();
    for (int i = 0; i < m; ++i)
      if (basis[i] >= art_begin) d1 -= T.row(i).transpose();

    if (run(d1, true) != SolveStatus::optimal)
      throw std::runtime_error("simplex: phase-1 breakdown");

    double infeas = 0.0;
    for (int i = 0; i < m; ++i)
      if (basis[i] >= art_begin) infeas += b(i);
    if (infeas > kFeasTol * (1.0 + rhs.cwiseAbs().maxCoeff())) return {SolveStatus::infeasible, {}};

    // Pivot remaining zero-level artificials out of the basis; a row with
    // no usable pivot is redundant and gets neutralized.
    for (int i = 0; i < m; ++i) {
      if (basis[i] < art_begin) continue;
      int piv_col = -1;
      for (int jj = 0; jj < art_begin; ++jj)
        if (std::abs(T(i, jj)) > 1e-8) { piv_col = jj; break; }
      if (piv_col >= 0) {
        const double piv = T(i, piv_col);
        T.row(i) /= piv;
        b(i) /= piv;
        for (int r2 = 0; r2 < m; ++r2) {
          if (r2 == i) continue;
          const double f = T(r2, piv_col);
          if (f != 0.0) {
            T.row(r2) -= f * T.row(i);
            b(r2) -= f * b(i);
          }
        }
        basis[i] = piv_col;
      } else {
        T.row(i).setZero();
        T(i, basis[i]) = 1.0;
        b(i) = 0.0;
      }
    }
  }

  // Phase 2 with the priced-out real objective.
  Eigen::VectorXd d2 = c2;
  for (int i = 0; i < m; ++i) {
    const double cb = c2(basis[i]);
    if (cb != 0.0) d2 -= cb * T.row(i).transpose();
  }
  const SolveStatus st = run(d2, false);
  if (st == SolveStatus::unbounded) return {SolveStatus::unbounded, {}};

  // Recover the original-variable vertex.
  Eigen::VectorXd s = Eigen::VectorXd::Zero(N);
  for (int i = 0; i < m; ++i) s(basis[i]) = b(i);
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) {
    switch (vmap[j].kind) {
      case VarMap::fixed: x(j) = vmap[j].offset; break;
      case VarMap::shift_lo: x(j) = vmap[j].offset + s(vmap[j].col); break;
      case VarMap::shift_hi: x(j) = vmap[j].offset - s(vmap[j].col); break;
      case VarMap::split: x(j) = s(vmap[j].col) - s(vmap[j].col_neg); break;
    }
  }
  return {SolveStatus::optimal, std::move(x)};
}

void require_lp(const MilpModel& model) {
  if (model.bounds.size() != static_cast<std::size_t>(model.num_vars()) ||
      model.binary_mask.size() != static_cast<std::size_t>(model.num_vars()))
    throw std::invalid_argument("MilpModel: bounds/mask length mismatch");
}

}  // namespace

SolveOutcome simplex_solve(const MilpModel& model) {
  require_lp(model);
  for (char bin : model.binary_mask)
    if (bin) throw std::invalid_argument("simplex_solve: model has binary variables");

  const auto t0 = std::chrono::steady_clock::now();
  const LpCore core = solve_lp_core(model, model.bounds);
  SolveOutcome out;
  out.status = core.status;
  out.nodes_explored = 1;
  if (core.status == SolveStatus::optimal) {
    out.solution = core.x;
    out.objective_value = model.objective.dot(core.x);
  }
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

namespace {

struct BnbState {
  const MilpModel* model;
  std::vector<int> binary_vars;
  std::vector<std::pair<double, double>> bounds;
  long node_limit;
  long nodes = 0;
  bool hit_limit = false;
  bool unbounded_found = false;
  bool have_incumbent = false;
  double incumbent_value = kInf;  // in minimize terms
  Eigen::VectorXd incumbent;
  double obj_sign = 1.0;  // maximize solved as minimize of -objective
};

bool all_binaries_fixed(const BnbState& st) {
  for (int v : st.binary_vars)
    if (st.bounds[v].second - st.bounds[v].first > kIntTol) return false;
  return true;
}

void bnb_recurse(BnbState& st) {
  if (st.unbounded_found || st.hit_limit) return;
  if (st.nodes >= st.node_limit) {
    st.hit_limit = true;
    return;
  }
  ++st.nodes;

  const LpCore relax = solve_lp_core(*st.model, st.bounds);
  if (relax.status == SolveStatus::infeasible) return;

  if (relax.status == SolveStatus::unbounded) {
    if (all_binaries_fixed(st)) {
      st.unbounded_found = true;
      return;
    }
    // Weak relaxation gives no bound; dive on the first unfixed binary.
    for (int v : st.binary_vars) {
      if (st.bounds[v].second - st.bounds[v].first > kIntTol) {
        const auto saved = st.bounds[v];
        st.bounds[v] = {1.0, 1.0};
        bnb_recurse(st);
        st.bounds[v] = {0.0, 0.0};
        bnb_recurse(st);
        st.bounds[v] = saved;
        return;
      }
    }
    return;
  }

  const double bound = st.obj_sign * st.model->objective.dot(relax.x);
  if (st.have_incumbent && bound >= st.incumbent_value - 1e-9) return;

  // Most-fractional unfixed binary.
  int branch_var = -1;
  double best_frac = kIntTol;
  for (int v : st.binary_vars) {
    if (st.bounds[v].second - st.bounds[v].first <= kIntTol) continue;
    const double val = relax.x(v);
    const double frac = std::min(val, 1.0 - val);
    if (frac > best_frac) {
      best_frac = frac;
      branch_var = v;
    }
  }

  if (branch_var < 0) {
    // Integer feasible.
    st.have_incumbent = true;
    st.incumbent_value = bound;
    st.incumbent = relax.x;
    return;
  }

  const auto saved = st.bounds[branch_var];
  st.bounds[branch_var] = {1.0, 1.0};
  bnb_recurse(st);
  st.bounds[branch_var] = {0.0, 0.0};
  bnb_recurse(st);
  st.bounds[branch_var] = saved;
}

// Root heuristic: round the relaxation's binaries and accept the completion
// when it is feasible, giving bound pruning an early incumbent.
void try_rounding(BnbState& st) {
  const LpCore relax = solve_lp_core(*st.model, st.bounds);
  if (relax.status != SolveStatus::optimal) return;
  auto saved = st.bounds;
  for (int v : st.binary_vars) {
    const double r = relax.x(v) >= 0.5 ? 1.0 : 0.0;
    st.bounds[v] = {std::max(st.bounds[v].first, r), std::min(st.bounds[v].second, r)};
    if (st.bounds[v].first > st.bounds[v].second) {  // rounding clashed with a fixing
      st.bounds = saved;
      return;
    }
  }
  const LpCore fixed = solve_lp_core(*st.model, st.bounds);
  if (fixed.status == SolveStatus::optimal) {
    const double val = st.obj_sign * st.model->objective.dot(fixed.x);
    if (!st.have_incumbent || val < st.incumbent_value) {
      st.have_incumbent = true;
      st.incumbent_value = val;
      st.incumbent = fixed.x;
    }
  }
  st.bounds = saved;
}

}  // namespace

bool is_feasible(const MilpModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.num_vars()) return false;
  for (int j = 0; j < model.num_vars(); ++j) {
    const auto [lo, hi] = model.bounds[j];
    if (x(j) < lo - kFeasTol || x(j) > hi + kFeasTol) return false;
    if (model.binary_mask[j] && std::min(x(j), 1.0 - x(j)) > kIntTol) return false;
  }
  for (const auto& con : model.constraints) {
    const double lhs = con.coeffs.dot(x);
    switch (con.rel) {
      case Relation::le: if (lhs > con.rhs + kFeasTol) return false; break;
      case Relation::ge: if (lhs < con.rhs - kFeasTol) return false; break;
      case Relation::eq: if (std::abs(lhs - con.rhs) > kFeasTol) return false; break;
    }
  }
  return true;
}

SolveOutcome branch_and_bound(const MilpModel& model, long node_limit, const WarmStart* warm) {
  require_lp(model);
  if (node_limit < 1) throw std::invalid_argument("branch_and_bound: node_limit must be >= 1");

  const auto t0 = std::chrono::steady_clock::now();
  BnbState st;
  st.model = &model;
  st.bounds = model.bounds;
  st.node_limit = node_limit;
  st.obj_sign = model.sense == Sense::maximize ? -1.0 : 1.0;
  for (int j = 0; j < model.num_vars(); ++j)
    if (model.binary_mask[j]) st.binary_vars.push_back(j);

  if (warm && is_feasible(model, warm->solution)) {
    st.have_incumbent = true;
    st.incumbent = warm->solution;
    st.incumbent_value = st.obj_sign * model.objective.dot(warm->solution);
  }
  if (!st.binary_vars.empty()) try_rounding(st);
  bnb_recurse(st);

  SolveOutcome out;
  out.nodes_explored = st.nodes;
  if (st.unbounded_found) {
    out.status = SolveStatus::unbounded;
  } else if (st.hit_limit) {
    out.status = SolveStatus::node_limit;
    out.has_incumbent = st.have_incumbent;
    if (st.have_incumbent) {
      out.solution = st.incumbent;
      out.objective_value = model.objective.dot(st.incumbent);
    }
  } else if (st.have_incumbent) {
    out.status = SolveStatus::optimal;
    out.solution = st.incumbent;
    out.objective_value = model.objective.dot(st.incumbent);
  } else {
    out.status = SolveStatus::infeasible;
  }
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::string to_lp_text(const MilpModel& model) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << (model.sense == Sense::maximize ? "Maximize\n" : "Minimize\n") << " obj:";
  for (int j = 0; j < model.num_vars(); ++j)
    if (model.objective(j) != 0.0)
      os << (model.objective(j) >= 0 ? " + " : " - ") << std::abs(model.objective(j)) << " x"
         << j;
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    const auto& c = model.constraints[i];
    os << " c" << i << ":";
    for (int j = 0; j < model.num_vars(); ++j)
      if (c.coeffs(j) != 0.0)
        os << (c.coeffs(j) >= 0 ? " + " : " - ") << std::abs(c.coeffs(j)) << " x" << j;
    os << (c.rel == Relation::le ? " <= " : c.rel == Relation::ge ? " >= " : " = ") << c.rhs
       << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < model.num_vars(); ++j) {
    const auto [lo, hi] = model.bounds[j];
    if (std::isinf(lo) && std::isinf(hi)) os << " x" << j << " free\n";
    else if (std::isinf(lo)) os << " -inf <= x" << j << " <= " << hi << "\n";
    else if (std::isinf(hi)) os << " " << lo << " <= x" << j << "\n";
    else os << " " << lo << " <= x" << j << " <= " << hi << "\n";
  }
  bool any_bin = false;
  for (char bin : model.binary_mask) any_bin |= (bin != 0);
  if (any_bin) {
    os << "Binaries\n";
    for (int j = 0; j < model.num_vars(); ++j)
      if (model.binary_mask[j]) os << " x" << j;
    os << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace rii
