// Copyright 2026 The redeploy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "redeploy/ldr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace redeploy::lp {

using core::Arc;
using core::DemandPath;

double AffineRule::eval(const DemandPath& zeta) const {
  double v = intercept;
  const auto& z = zeta.data();
  const std::size_t n = std::min(z.size(), coef.size());
  for (std::size_t d = 0; d < n; ++d)
    if (coef[d] != 0.0) v += coef[d] * z[d];
  return v;
}

const char* to_string(DualFamily f) {
  switch (f) {
    case DualFamily::Epigraph: return "epi";
    case DualFamily::Capacity: return "cap";
    case DualFamily::Shortage: return "sho";
    case DualFamily::Emergency: return "eme";
    case DualFamily::NonnegB: return "nnb";
    case DualFamily::NonnegX: return "nnx";
    case DualFamily::NonnegY: return "nny";
  }
  return "?";
}

namespace {

// Shape checks and derived per-day data shared by the builders and oracle.
struct Prepared {
  int S = 0, L = 0, A = 0, T = 0, t0 = 0, N = 0;
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out_arcs, in_arcs;
  std::vector<int> mu;              // [t * A + a]
  std::vector<double> plan_unit;    // p * mu + tau
  std::vector<double> emer_unit;    // theta * p * mu + tau
  std::vector<double> shortage;     // [t * L + i]
  std::vector<char> constant;       // [d]
  std::vector<double> const_value;  // [d]
  std::vector<int> active, active_pos, upto;
  std::vector<double> mean_upper, mean_lower;  // [d]
  std::vector<double> committed_out, committed_in;  // [t * L + i]
  double eta = 0.0;

  // Whether a deployment on arc a on day k is still away on day t.
  bool in_window(int k, int a, int t) const { return k <= t && t < k + mu[k * A + a]; }
};

Prepared prepare(const LdrProblem& pb) {
  pb.network.validate();
  pb.costs.validate(pb.network.num_locations);
  if (pb.boxes.empty()) throw BuildError("LDR model needs at least one uncertainty box");
  Prepared P;
  P.L = pb.network.num_locations;
  P.S = pb.boxes.front().days();
  P.T = pb.horizon;
  P.t0 = pb.first_day;
  P.N = static_cast<int>(pb.boxes.size());
  P.eta = pb.costs.cancellation_pct;
  if (P.S < 1) throw BuildError("LDR model needs at least one modelled day");
  if (P.t0 < 0 || P.t0 + P.S > P.T) {
    throw BuildError("modelled days [" + std::to_string(P.t0) + ", " + std::to_string(P.t0 + P.S) +
                     ") fall outside the horizon of " + std::to_string(P.T) + " days");
  }
  for (std::size_t n = 0; n < pb.boxes.size(); ++n) {
    const auto& b = pb.boxes[n];
    if (b.days() != P.S || b.num_locations() != P.L || b.upper.days() != P.S || b.upper.num_locations() != P.L) {
      throw BuildError("uncertainty box " + std::to_string(n) + " does not match the model shape");
    }
    for (std::size_t k = 0; k < b.lower.data().size(); ++k) {
      if (!(b.lower.data()[k] <= b.upper.data()[k]) || !std::isfinite(b.upper.data()[k]) ||
          !std::isfinite(b.lower.data()[k])) {
        throw BuildError("uncertainty box " + std::to_string(n) + " has an empty or non-finite coordinate");
      }
    }
  }
  if (pb.state.num_locations() != P.L) throw BuildError("secondment state does not match the network");
  if (pb.fixed_plan && (pb.fixed_plan->days() != P.S || pb.fixed_plan->num_locations() != P.L)) {
    throw BuildError("fixed plan does not cover the modelled days");
  }

  P.arcs = pb.network.arcs();
  P.A = static_cast<int>(P.arcs.size());
  P.out_arcs.assign(P.L, {});
  P.in_arcs.assign(P.L, {});
  for (int a = 0; a < P.A; ++a) {
    P.out_arcs[P.arcs[a].from].push_back(a);
    P.in_arcs[P.arcs[a].to].push_back(a);
  }
  const auto& c = pb.costs;
  P.mu.resize(static_cast<std::size_t>(P.S) * P.A);
  P.plan_unit.resize(P.mu.size());
  P.emer_unit.resize(P.mu.size());
  for (int t = 0; t < P.S; ++t) {
    const int g = P.t0 + t;
    for (int a = 0; a < P.A; ++a) {
      const Arc& arc = P.arcs[a];
      const int mu = core::secondment_length(pb.network, arc.from, arc.to, g, P.T);
      const double tau = pb.network.transfer_bonus(arc.from, arc.to);
      P.mu[t * P.A + a] = mu;
      P.plan_unit[t * P.A + a] = c.premium * mu + tau;
      P.emer_unit[t * P.A + a] = c.theta(g) * c.premium * mu + tau;
    }
  }
  P.shortage.resize(static_cast<std::size_t>(P.S) * P.L);
  for (int t = 0; t < P.S; ++t)
    for (int i = 0; i < P.L; ++i) P.shortage[t * P.L + i] = c.shortage(P.t0 + t, i);

  const int D = P.S * P.L;
  P.constant.assign(D, 1);
  P.const_value.assign(D, 0.0);
  P.mean_upper.assign(D, 0.0);
  P.mean_lower.assign(D, 0.0);
  P.active_pos.assign(D, -1);
  for (int d = 0; d < D; ++d) {
    const double v = pb.boxes.front().lower.data()[d];
    P.const_value[d] = v;
    for (const auto& b : pb.boxes) {
      P.mean_upper[d] += b.upper.data()[d];
      P.mean_lower[d] += b.lower.data()[d];
      if (b.lower.data()[d] != v || b.upper.data()[d] != v) P.constant[d] = 0;
    }
    P.mean_upper[d] /= P.N;
    P.mean_lower[d] /= P.N;
    if (!P.constant[d]) {
      P.active_pos[d] = static_cast<int>(P.active.size());
      P.active.push_back(d);
    }
  }
  P.upto.assign(P.S, 0);
  for (int t = 0; t < P.S; ++t)
    for (int d : P.active)
      if (d / P.L <= t) ++P.upto[t];

  P.committed_out.resize(D);
  P.committed_in.resize(D);
  for (int t = 0; t < P.S; ++t) {
    for (int i = 0; i < P.L; ++i) {
      P.committed_out[t * P.L + i] = pb.state.committed_out(i, t);
      P.committed_in[t * P.L + i] = pb.state.committed_in(i, t);
    }
  }
  return P;
}

std::string vname(const char* kind, int t, int i, int j = -1, int m = -1, int l = -1) {
  char buf[96];
  if (j < 0) {
    if (m < 0) std::snprintf(buf, sizeof buf, "%s_t%d_i%d", kind, t, i);
    else std::snprintf(buf, sizeof buf, "%s_t%d_i%d_m%d_l%d", kind, t, i, m, l);
  } else {
    if (m < 0) std::snprintf(buf, sizeof buf, "%s_t%d_i%d_j%d", kind, t, i, j);
    else std::snprintf(buf, sizeof buf, "%s_t%d_i%d_j%d_m%d_l%d", kind, t, i, j, m, l);
  }
  return buf;
}

// A block of rule coefficients weighted by w, valid for the first `count`
// active coordinates.
struct RuleTerm {
  int base;
  int count;
  double w;
};

}  // namespace

LdrModel build_sro_ldr_lp(const LdrProblem& pb) {
  const Prepared P = prepare(pb);
  LdrModel M;
  LinearProgram& lp = M.lp;
  const int S = P.S, L = P.L, A = P.A;
  const double eta = P.eta;
  M.days_ = S;
  M.L_ = L;
  M.first_day_ = P.t0;
  M.horizon_ = P.T;
  M.arcs_ = P.arcs;
  M.active_ = P.active;
  M.active_upto_ = P.upto;

  // Planned transfers.
  M.a_var_.assign(static_cast<std::size_t>(S) * A, -1);
  M.a_fixed_.assign(static_cast<std::size_t>(S) * A, 0.0);
  for (int t = 0; t < S; ++t) {
    for (int a = 0; a < A; ++a) {
      const Arc& arc = P.arcs[a];
      const double cost = eta * P.plan_unit[t * A + a];
      if (pb.fixed_plan) {
        const double v = pb.fixed_plan->at(t, arc.from, arc.to);
        if (!(v >= 0.0)) throw BuildError("fixed plan holds a negative entry");
        M.a_fixed_[t * A + a] = v;
        lp.add_objective_offset(cost * v);
      } else {
        M.a_var_[t * A + a] = lp.add_variable(vname("a", P.t0 + t, arc.from, arc.to), 0.0, kInf, cost);
      }
    }
  }
  if (pb.fixed_plan) {
    for (int t = 0; t < S; ++t)
      for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j)
          if ((i == j || !pb.network.allowed(i, j)) && pb.fixed_plan->at(t, i, j) != 0.0)
            throw BuildError("fixed plan uses a disallowed arc");
  }

  // Affine rules; intercepts carry the deterministic part of the cost.
  // Each coefficient is stored as the difference of two nonnegative parts,
  // (pos, neg) at base + 2k and base + 2k + 1.
  auto add_rule = [&](const char* k0, const char* k1, int t, int i, int j, double icpt_cost, int& icpt, int& base) {
    icpt = lp.add_variable(vname(k0, P.t0 + t, i, j), -kInf, kInf, icpt_cost);
    base = lp.num_variables();
    char pos[16], neg[16];
    std::snprintf(pos, sizeof pos, "%sp", k1);
    std::snprintf(neg, sizeof neg, "%sn", k1);
    for (int k = 0; k < P.upto[t]; ++k) {
      const int d = P.active[k];
      lp.add_variable(vname(pos, P.t0 + t, i, j, P.t0 + d / L, d % L), 0.0, kInf, 0.0);
      lp.add_variable(vname(neg, P.t0 + t, i, j, P.t0 + d / L, d % L), 0.0, kInf, 0.0);
    }
  };
  M.b0_.resize(static_cast<std::size_t>(S) * A);
  M.b1_.resize(M.b0_.size());
  M.x0_.resize(M.b0_.size());
  M.x1_.resize(M.b0_.size());
  M.y0_.resize(static_cast<std::size_t>(S) * L);
  M.y1_.resize(M.y0_.size());
  std::vector<double> cx(static_cast<std::size_t>(S) * A), cb(cx.size());
  for (int t = 0; t < S; ++t) {
    for (int a = 0; a < A; ++a) {
      const int ta = t * A + a;
      cx[ta] = P.emer_unit[ta] + (eta - 1.0) * P.plan_unit[ta];
      cb[ta] = (1.0 - eta) * P.plan_unit[ta];
      add_rule("b0", "b1", t, P.arcs[a].from, P.arcs[a].to, cb[ta], M.b0_[ta], M.b1_[ta]);
      add_rule("x0", "x1", t, P.arcs[a].from, P.arcs[a].to, cx[ta], M.x0_[ta], M.x1_[ta]);
    }
    for (int i = 0; i < L; ++i) {
      add_rule("y0", "y1", t, i, -1, P.shortage[t * L + i], M.y0_[t * L + i], M.y1_[t * L + i]);
    }
  }

  // Robust row "icpt + const + beta . zeta <= 0" on every box, or the
  // worst-case objective term when `objective` is set.
  std::vector<Term> terms;
  auto add_robust = [&](DualFamily fam, int t, int i, int j, const std::vector<Term>& icpt, double icpt_const,
                        const std::vector<RuleTerm>& rules, const std::vector<std::pair<int, double>>& const_beta,
                        bool objective) {
    double rhs = -icpt_const;
    std::vector<std::pair<int, double>> cbeta;  // (active position, value)
    int maxk = 0;
    for (const auto& r : rules) maxk = std::max(maxk, r.count);
    for (const auto& [d, v] : const_beta) {
      if (P.constant[d]) {
        rhs -= v * P.const_value[d];
      } else {
        cbeta.emplace_back(P.active_pos[d], v);
        maxk = std::max(maxk, P.active_pos[d] + 1);
      }
    }
    LdrModel::DualRecord rec{fam, t < 0 ? -1 : P.t0 + t, i, j, {}, {}, {}};
    const char* fname = to_string(fam);
    for (int k = 0; k < maxk; ++k) {
      terms.clear();
      for (const auto& r : rules) {
        if (k < r.count) {
          terms.push_back({r.base + 2 * k, -r.w});
          terms.push_back({r.base + 2 * k + 1, r.w});
        }
      }
      double c = 0.0;
      for (const auto& [pos, v] : cbeta)
        if (pos == k) c += v;
      if (terms.empty() && c == 0.0) continue;
      const int d = P.active[k];
      const int m = P.t0 + d / L, l = d % L;
      char nbuf[32];
      std::snprintf(nbuf, sizeof nbuf, "nu_%s", fname);
      const int nu = lp.add_variable(vname(nbuf, rec.t, i, j, m, l), 0.0, kInf);
      std::snprintf(nbuf, sizeof nbuf, "psi_%s", fname);
      const int psi = lp.add_variable(vname(nbuf, rec.t, i, j, m, l), 0.0, kInf);
      terms.push_back({nu, 1.0});
      terms.push_back({psi, -1.0});
      std::snprintf(nbuf, sizeof nbuf, "link_%s", fname);
      lp.add_constraint(vname(nbuf, rec.t, i, j, m, l), terms, Sense::Equal, c);
      rec.dims.push_back(d);
      rec.nu_vars.push_back(nu);
      rec.psi_vars.push_back(psi);
    }
    if (objective) {
      for (std::size_t q = 0; q < rec.dims.size(); ++q) {
        lp.add_objective(rec.nu_vars[q], P.mean_upper[rec.dims[q]]);
        lp.add_objective(rec.psi_vars[q], -P.mean_lower[rec.dims[q]]);
      }
    } else if (rec.dims.empty()) {
      lp.add_constraint(vname(fname, rec.t, i, j), icpt, Sense::LessEqual, rhs);
    } else {
      for (int n = 0; n < P.N; ++n) {
        terms = icpt;
        const auto& box = pb.boxes[n];
        for (std::size_t q = 0; q < rec.dims.size(); ++q) {
          terms.push_back({rec.nu_vars[q], box.upper.data()[rec.dims[q]]});
          terms.push_back({rec.psi_vars[q], -box.lower.data()[rec.dims[q]]});
        }
        char nbuf[32];
        std::snprintf(nbuf, sizeof nbuf, "%s_n%d", fname, n);
        lp.add_constraint(vname(nbuf, rec.t, i, j), terms, Sense::LessEqual, rhs);
      }
    }
    M.dual_records_.push_back(std::move(rec));
  };

  // rule(zeta) >= 0 on every box. With beta = -(pos - neg), the split parts
  // are themselves a valid dual pair (nu = neg, psi = pos), and the minimal
  // split is the optimal one, so no linking rows are needed.
  auto add_nonneg = [&](DualFamily fam, int t, int i, int j, int icpt, int base) {
    LdrModel::DualRecord rec{fam, P.t0 + t, i, j, {}, {}, {}};
    for (int k = 0; k < P.upto[t]; ++k) {
      rec.dims.push_back(P.active[k]);
      rec.nu_vars.push_back(base + 2 * k + 1);
      rec.psi_vars.push_back(base + 2 * k);
    }
    const char* fname = to_string(fam);
    if (rec.dims.empty()) {
      lp.add_constraint(vname(fname, rec.t, i, j), {{icpt, -1.0}}, Sense::LessEqual, 0.0);
    } else {
      for (int n = 0; n < P.N; ++n) {
        terms.assign(1, {icpt, -1.0});
        const auto& box = pb.boxes[n];
        for (std::size_t q = 0; q < rec.dims.size(); ++q) {
          terms.push_back({rec.nu_vars[q], box.upper.data()[rec.dims[q]]});
          terms.push_back({rec.psi_vars[q], -box.lower.data()[rec.dims[q]]});
        }
        char nbuf[32];
        std::snprintf(nbuf, sizeof nbuf, "%s_n%d", fname, n);
        lp.add_constraint(vname(nbuf, rec.t, i, j), terms, Sense::LessEqual, 0.0);
      }
    }
    M.dual_records_.push_back(std::move(rec));
  };

  // Worst-case objective.
  {
    std::vector<RuleTerm> rules;
    for (int t = 0; t < S; ++t) {
      for (int a = 0; a < A; ++a) {
        rules.push_back({M.x1_[t * A + a], P.upto[t], cx[t * A + a]});
        rules.push_back({M.b1_[t * A + a], P.upto[t], cb[t * A + a]});
      }
      for (int i = 0; i < L; ++i) rules.push_back({M.y1_[t * L + i], P.upto[t], P.shortage[t * L + i]});
    }
    add_robust(DualFamily::Epigraph, -1, -1, -1, {}, 0.0, rules, {}, true);
  }

  std::vector<Term> icpt;
  std::vector<RuleTerm> rules;
  for (int t = 0; t < S; ++t) {
    for (int i = 0; i < L; ++i) {
      const double co = P.committed_out[t * L + i], ci = P.committed_in[t * L + i];
      const double K = pb.network.capacity[i];
      // Planned transfers respect the rolling capacity window.
      if (!pb.fixed_plan) {
        icpt.clear();
        for (int a : P.out_arcs[i])
          for (int k = 0; k <= t; ++k)
            if (P.in_window(k, a, t)) icpt.push_back({M.a_var_[k * A + a], 1.0});
        if (!icpt.empty()) lp.add_constraint(vname("capa", P.t0 + t, i), icpt, Sense::LessEqual, K - co);
      }
      // Deployments respect the same window.
      icpt.clear();
      rules.clear();
      for (int a : P.out_arcs[i]) {
        for (int k = 0; k <= t; ++k) {
          if (!P.in_window(k, a, t)) continue;
          icpt.push_back({M.b0_[k * A + a], 1.0});
          rules.push_back({M.b1_[k * A + a], P.upto[k], 1.0});
        }
      }
      if (!icpt.empty()) add_robust(DualFamily::Capacity, t, i, -1, icpt, co - K, rules, {}, false);
      // Shortage: demand minus on-site staff never exceeds y.
      for (int a : P.in_arcs[i]) {
        for (int k = 0; k <= t; ++k) {
          if (!P.in_window(k, a, t)) continue;
          icpt.push_back({M.b0_[k * A + a], -1.0});
          rules.push_back({M.b1_[k * A + a], P.upto[k], -1.0});
        }
      }
      icpt.push_back({M.y0_[t * L + i], -1.0});
      rules.push_back({M.y1_[t * L + i], P.upto[t], -1.0});
      add_robust(DualFamily::Shortage, t, i, -1, icpt, co - ci - K, rules, {{t * L + i, 1.0}}, false);
    }
    for (int a = 0; a < A; ++a) {
      const int ta = t * A + a;
      const int i = P.arcs[a].from, j = P.arcs[a].to;
      // Emergency excess covers deployments beyond the plan.
      icpt = {{M.b0_[ta], 1.0}, {M.x0_[ta], -1.0}};
      double c0 = 0.0;
      if (M.a_var_[ta] >= 0) icpt.push_back({M.a_var_[ta], -1.0});
      else c0 = -M.a_fixed_[ta];
      add_robust(DualFamily::Emergency, t, i, j, icpt, c0,
                 {{M.b1_[ta], P.upto[t], 1.0}, {M.x1_[ta], P.upto[t], -1.0}}, {}, false);
      add_nonneg(DualFamily::NonnegB, t, i, j, M.b0_[ta], M.b1_[ta]);
      add_nonneg(DualFamily::NonnegX, t, i, j, M.x0_[ta], M.x1_[ta]);
    }
    for (int i = 0; i < L; ++i) add_nonneg(DualFamily::NonnegY, t, i, -1, M.y0_[t * L + i], M.y1_[t * L + i]);
  }
  return M;
}

LdrSolution LdrModel::extract(const std::vector<double>& x, bool with_duals) const {
  LdrSolution s;
  const int S = days_, L = L_, A = static_cast<int>(arcs_.size());
  const int D = S * L;
  s.days = S;
  s.num_locations = L;
  s.first_day = first_day_;
  s.horizon = horizon_;
  s.arcs = arcs_;
  s.active_dims = active_;
  s.a = core::TransferPlan(S, L);
  auto rule = [&](int icpt, int base, int t) {
    AffineRule r;
    r.intercept = x[icpt];
    r.coef.assign(D, 0.0);
    for (int k = 0; k < active_upto_[t]; ++k) r.coef[active_[k]] = x[base + 2 * k] - x[base + 2 * k + 1];
    return r;
  };
  for (int t = 0; t < S; ++t) {
    for (int a = 0; a < A; ++a) {
      const int ta = t * A + a;
      s.a.at(t, arcs_[a].from, arcs_[a].to) = a_var_[ta] >= 0 ? x[a_var_[ta]] : a_fixed_[ta];
      s.b.push_back(rule(b0_[ta], b1_[ta], t));
      s.x.push_back(rule(x0_[ta], x1_[ta], t));
    }
    for (int i = 0; i < L; ++i) s.y.push_back(rule(y0_[t * L + i], y1_[t * L + i], t));
  }
  if (with_duals) {
    for (const auto& r : dual_records_) {
      DualBlock blk{r.family, r.t, r.i, r.j, r.dims, {}, {}};
      for (std::size_t q = 0; q < r.dims.size(); ++q) {
        blk.nu.push_back(x[r.nu_vars[q]]);
        blk.psi.push_back(x[r.psi_vars[q]]);
      }
      s.duals.push_back(std::move(blk));
    }
  }
  s.objective_value = lp.evaluate_objective(x);
  return s;
}

LdrSolveResult solve_ldr(const LdrProblem& problem, const SolverOptions& options, bool with_duals) {
  LdrModel model = build_sro_ldr_lp(problem);
  LpResult res = solve(model.lp, options);
  if (res.report.status != SolveStatus::Optimal) {
    throw RuntimeFailure(std::string("LDR model did not solve to optimality: ") + to_string(res.report.status));
  }
  LdrSolveResult out{model.extract(res.x, with_duals), res.report};
  out.solution.objective_value = res.report.objective;
  return out;
}

core::DeploymentAction evaluate_ldr(const LdrSolution& sol, const DemandPath& realized, int t) {
  if (t < 0 || t >= sol.days) throw ArgumentError("evaluate_ldr: day outside the modelled days");
  if (realized.num_locations() != sol.num_locations || realized.days() < t + 1) {
    throw ArgumentError("evaluate_ldr: realized demand does not cover the requested day");
  }
  // Pad to the full modelled window so the coefficient vector lines up.
  DemandPath z(sol.days, sol.num_locations);
  for (int m = 0; m <= t; ++m)
    for (int l = 0; l < sol.num_locations; ++l) z.at(m, l) = realized.at(m, l);
  core::DeploymentAction b(sol.num_locations);
  for (std::size_t a = 0; a < sol.arcs.size(); ++a) {
    b.at(sol.arcs[a].from, sol.arcs[a].to) = sol.b_rule(t, static_cast<int>(a)).eval(z);
  }
  return b;
}

double worst_case_objective_oracle(const LdrSolution& sol, const LdrProblem& pb) {
  const Prepared P = prepare(pb);
  if (sol.days != P.S || sol.num_locations != P.L || static_cast<int>(sol.arcs.size()) != P.A) {
    throw ArgumentError("oracle: solution does not match the problem");
  }
  double planned = 0.0;
  for (int t = 0; t < P.S; ++t)
    for (int a = 0; a < P.A; ++a) planned += P.plan_unit[t * P.A + a] * sol.a.at(t, P.arcs[a].from, P.arcs[a].to);

  double total = 0.0;
  for (const auto& box : pb.boxes) {
    double best = -kInf;
    for (const DemandPath& v : uncertainty::enumerate_vertices(box)) {
      double f = 0.0;
      for (int t = 0; t < P.S; ++t) {
        for (int a = 0; a < P.A; ++a) {
          const int ta = t * P.A + a;
          const double av = sol.a.at(t, P.arcs[a].from, P.arcs[a].to);
          const double bv = sol.b_rule(t, a).eval(v);
          const double xv = sol.x_rule(t, a).eval(v);
          f += P.emer_unit[ta] * xv + (P.eta - 1.0) * P.plan_unit[ta] * (xv - bv + av);
        }
        for (int i = 0; i < P.L; ++i) f += P.shortage[t * P.L + i] * sol.y_rule(t, i).eval(v);
      }
      best = std::max(best, f);
    }
    total += best;
  }
  return planned + total / P.N;
}

LinearProgram build_saa_scenario_lp(const LdrProblem& pb) {
  const Prepared P = prepare(pb);
  for (const auto& b : pb.boxes) {
    if (b.lower != b.upper) throw BuildError("scenario form needs zero-width boxes");
  }
  const int S = P.S, L = P.L, A = P.A;
  const double eta = P.eta, invN = 1.0 / P.N;
  LinearProgram lp;

  std::vector<int> a_var(static_cast<std::size_t>(S) * A, -1);
  std::vector<double> a_fixed(a_var.size(), 0.0);
  for (int t = 0; t < S; ++t) {
    for (int a = 0; a < A; ++a) {
      const Arc& arc = P.arcs[a];
      const double cost = eta * P.plan_unit[t * A + a];
      if (pb.fixed_plan) {
        a_fixed[t * A + a] = pb.fixed_plan->at(t, arc.from, arc.to);
        lp.add_objective_offset(cost * a_fixed[t * A + a]);
      } else {
        a_var[t * A + a] = lp.add_variable(vname("a", P.t0 + t, arc.from, arc.to), 0.0, kInf, cost);
      }
    }
  }
  // Rule variables: intercept followed by coefficients on active coordinates.
  auto add_rule = [&](const char* k, int t, int i, int j) {
    const int first = lp.add_variable(vname(k, P.t0 + t, i, j), -kInf, kInf);
    for (int q = 0; q < P.upto[t]; ++q) lp.add_variable(vname(k, P.t0 + t, i, j, q, 0), -kInf, kInf);
    return first;
  };
  std::vector<int> bv(static_cast<std::size_t>(S) * A), xv(bv.size()), yv(static_cast<std::size_t>(S) * L);
  for (int t = 0; t < S; ++t) {
    for (int a = 0; a < A; ++a) {
      bv[t * A + a] = add_rule("b", t, P.arcs[a].from, P.arcs[a].to);
      xv[t * A + a] = add_rule("x", t, P.arcs[a].from, P.arcs[a].to);
    }
    for (int i = 0; i < L; ++i) yv[t * L + i] = add_rule("y", t, i, -1);
  }
  // Appends w * rule(sample n) to terms.
  auto push_rule = [&](std::vector<Term>& terms, int first, int t, int n, double w) {
    terms.push_back({first, w});
    const auto& pt = pb.boxes[n].lower.data();
    for (int q = 0; q < P.upto[t]; ++q) terms.push_back({first + 1 + q, w * pt[P.active[q]]});
  };

  std::vector<Term> terms;
  for (int n = 0; n < P.N; ++n) {
    const auto& pt = pb.boxes[n].lower;
    for (int t = 0; t < S; ++t) {
      for (int a = 0; a < A; ++a) {
        const int ta = t * A + a;
        const double cx = P.emer_unit[ta] + (eta - 1.0) * P.plan_unit[ta];
        const double cb = (1.0 - eta) * P.plan_unit[ta];
        lp.add_objective(xv[ta], invN * cx);
        lp.add_objective(bv[ta], invN * cb);
        for (int q = 0; q < P.upto[t]; ++q) {
          lp.add_objective(xv[ta] + 1 + q, invN * cx * pt.data()[P.active[q]]);
          lp.add_objective(bv[ta] + 1 + q, invN * cb * pt.data()[P.active[q]]);
        }
      }
      for (int i = 0; i < L; ++i) {
        const double s = P.shortage[t * L + i];
        lp.add_objective(yv[t * L + i], invN * s);
        for (int q = 0; q < P.upto[t]; ++q) lp.add_objective(yv[t * L + i] + 1 + q, invN * s * pt.data()[P.active[q]]);
      }
    }
  }

  for (int n = 0; n < P.N; ++n) {
    const auto& pt = pb.boxes[n].lower;
    for (int t = 0; t < S; ++t) {
      for (int i = 0; i < L; ++i) {
        const double co = P.committed_out[t * L + i], ci = P.committed_in[t * L + i];
        const double K = pb.network.capacity[i];
        if (!pb.fixed_plan && n == 0) {
          terms.clear();
          for (int a : P.out_arcs[i])
            for (int k = 0; k <= t; ++k)
              if (P.in_window(k, a, t)) terms.push_back({a_var[k * A + a], 1.0});
          if (!terms.empty()) lp.add_constraint(vname("capa", t, i), terms, Sense::LessEqual, K - co);
        }
        terms.clear();
        for (int a : P.out_arcs[i])
          for (int k = 0; k <= t; ++k)
            if (P.in_window(k, a, t)) push_rule(terms, bv[k * A + a], k, n, 1.0);
        if (!terms.empty()) lp.add_constraint(vname("cap", t, i, n), terms, Sense::LessEqual, K - co);
        for (int a : P.in_arcs[i])
          for (int k = 0; k <= t; ++k)
            if (P.in_window(k, a, t)) push_rule(terms, bv[k * A + a], k, n, -1.0);
        push_rule(terms, yv[t * L + i], t, n, -1.0);
        lp.add_constraint(vname("sho", t, i, n), terms, Sense::LessEqual, K - co + ci - pt.at(t, i));
        terms.clear();
        push_rule(terms, yv[t * L + i], t, n, 1.0);
        lp.add_constraint(vname("nny", t, i, n), terms, Sense::GreaterEqual, 0.0);
      }
      for (int a = 0; a < A; ++a) {
        const int ta = t * A + a;
        terms.clear();
        push_rule(terms, bv[ta], t, n, 1.0);
        push_rule(terms, xv[ta], t, n, -1.0);
        double rhs = a_fixed[ta];
        if (a_var[ta] >= 0) terms.push_back({a_var[ta], -1.0});
        lp.add_constraint(vname("eme", t, a, n), terms, Sense::LessEqual, rhs);
        terms.clear();
        push_rule(terms, bv[ta], t, n, 1.0);
        lp.add_constraint(vname("nnb", t, a, n), terms, Sense::GreaterEqual, 0.0);
        terms.clear();
        push_rule(terms, xv[ta], t, n, 1.0);
        lp.add_constraint(vname("nnx", t, a, n), terms, Sense::GreaterEqual, 0.0);
      }
    }
  }
  return lp;
}

}  // namespace redeploy::lp
