#include "orbitflow/hierarchy.hpp"

#include <cmath>

namespace orbitflow {

HierarchyContext::HierarchyContext(const AlgebraElement& a_in, const AlgebraElement& b_in,
                                   int j_in)
    : cd(a_in), b(b_in), j(j_in) {
  if (j < 1) throw StructuralError("hierarchy context: j must be >= 1");
  if (b.tag != a_in.tag) throw StructuralError("hierarchy context: a/b tag mismatch");
  check_algebra(b);
  const double comm = norm_alg(bracket_m(a_in.m, b.m));
  if (comm > tol::alg * std::max(1.0, norm_alg(a_in.m) * norm_alg(b.m)))
    throw StructuralError("hierarchy context: [a,b] != 0, norm " + std::to_string(comm));
  const double bperp = norm_alg(cd.pi1(b.m));
  if (bperp > tol::alg * std::max(1.0, norm_alg(b.m)))
    throw StructuralError("hierarchy context: b has a component off the centralizer");
  if (cd.centralizer_dim() != a_in.tag.rank()) {
    // singular base point: the hierarchy is the family of (a, j)-flows
    if (norm_alg(b.m - a_in.m) > tol::alg * std::max(1.0, norm_alg(a_in.m)))
      throw StructuralError("hierarchy context: a is singular, b must equal a");
  }
}

HierarchyContext make_context(const AlgebraElement& a, int j) {
  return HierarchyContext(a, a, j);
}

Field constant_field(const LineGrid& g, const AlgebraElement& v) {
  Field out(g, v.tag, DecayClass::free_form);
  for (auto& m : out.values) m = v.m;
  return out;
}

void check_phase_point(const HierarchyContext& ctx, const Field& u) {
  Field shape = u;
  shape.decay = DecayClass::free_form;
  check_field(shape);
  if (u.tag != ctx.tag()) throw StructuralError("phase point: tag mismatch");
  // decay gate: softer than tol::decay so dispersive tails from long runs do
  // not abort mid-flow, but non-decaying data is still rejected
  const double boundary =
      std::max(norm_alg(u.values.front()), norm_alg(u.values.back()));
  if (boundary > 1e-4 * std::max(1.0, u.sup_norm()))
    throw DomainError("phase point: boundary norm " + std::to_string(boundary) +
                      " is not decaying");
  double p0 = 0.0;
  for (const Mat& v : u.values) p0 = std::max(p0, norm_alg(ctx.cd.pi0(v)));
  if (p0 > tol::solve * std::max(1.0, u.sup_norm()))
    throw DomainError("phase point: centralizer component of norm " + std::to_string(p0));
}

QSequence q_sequence(const HierarchyContext& ctx, const Field& u, int jmax) {
  if (jmax < 1) throw DomainError("q_sequence: jmax must be >= 1");
  check_phase_point(ctx, u);
  const LineGrid& g = u.grid;
  const int N = g.N;

  QSequence out;
  out.q.reserve(jmax + 1);
  out.q.push_back(constant_field(g, ctx.b));

  // The centralizer part of each Q level is built as an antiderivative, so its
  // x-derivative is known exactly (the stored integrand). Using it keeps the
  // recursion term free of derivative-of-antiderivative round-off, so the pi0
  // residual reports genuine structural violations only.
  Field pi1_part(g, u.tag, DecayClass::free_form);  // pi1(Q_level), zero at level 0
  Field d_pi0(g, u.tag, DecayClass::free_form);     // exact d/dx of pi0(Q_level)

  for (int level = 0; level < jmax; ++level) {
    const Field& Q = out.q.back();
    Field T = derivative(pi1_part, 1);
    for (int i = 0; i < N; ++i)
      T.values[i] += d_pi0.values[i] + bracket_m(u.values[i], Q.values[i]);

    double t_norm = 0.0, t_pi0 = 0.0;
    for (int i = 0; i < N; ++i) {
      t_norm = std::max(t_norm, norm_alg(T.values[i]));
      t_pi0 = std::max(t_pi0, norm_alg(ctx.cd.pi0(T.values[i])));
    }
    const double rel = t_pi0 / std::max(t_norm, 1e-14);
    if (t_norm > 1e-12 && rel > tau_rec)
      throw ConsistencyError("q_sequence: recursion term leaves U_a^perp, relative residual " +
                             std::to_string(rel));
    out.pi0_residual = std::max(out.pi0_residual, rel * (t_norm > 1e-12 ? 1.0 : 0.0));

    Field next_pi1(g, u.tag, DecayClass::free_form);
    Field integrand(g, u.tag, DecayClass::free_form);
    for (int i = 0; i < N; ++i) {
      next_pi1.values[i] = ctx.cd.ad_inverse_m(T.values[i], false);
      integrand.values[i] = -ctx.cd.pi0(bracket_m(u.values[i], next_pi1.values[i]));
    }
    Field pi0_part = antiderivative_from_left(integrand);
    Field next(g, u.tag, DecayClass::free_form);
    for (int i = 0; i < N; ++i)
      next.values[i] = next_pi1.values[i] + pi0_part.values[i];
    out.q.push_back(std::move(next));
    pi1_part = std::move(next_pi1);
    d_pi0 = std::move(integrand);
  }
  return out;
}

double check_asymptotic_normalization(const HierarchyContext& ctx, const QSequence& qs, int m) {
  if (m < 1) throw DomainError("asymptotic normalization: power must be >= 1");
  const int jmax = static_cast<int>(qs.q.size()) - 1;
  const LineGrid& g = qs.q.front().grid;
  const int N = g.N;
  const int d = ctx.tag().matrix_dim();

  // coefficients of (sum_j Q_j lambda^-j)^m up to lambda^-jmax, per sample
  std::vector<std::vector<Mat>> pow(jmax + 1);
  for (int p = 0; p <= jmax; ++p) pow[p] = qs.q[p].values;
  for (int rep = 1; rep < m; ++rep) {
    std::vector<std::vector<Mat>> nxt(jmax + 1,
                                      std::vector<Mat>(N, Mat::Zero(d, d)));
    for (int p = 0; p <= jmax; ++p)
      for (int r = 0; r <= p; ++r)
        for (int i = 0; i < N; ++i) nxt[p][i] += pow[r][i] * qs.q[p - r].values[i];
    pow = std::move(nxt);
  }

  double worst = 0.0;
  for (int p = 1; p <= jmax; ++p)
    for (int i = 0; i < N; ++i) worst = std::max(worst, std::abs(pow[p][i].trace()));
  return worst;
}

Field flow_rhs(const HierarchyContext& ctx, const Field& u, double* pi0_residual) {
  QSequence qs = q_sequence(ctx, u, ctx.j + 1);
  if (pi0_residual) *pi0_residual = qs.pi0_residual;
  const Field& Qnext = qs.q[ctx.j + 1];
  Field out(u.grid, u.tag, DecayClass::free_form);
  for (int i = 0; i < u.size(); ++i) out.values[i] = bracket_m(Qnext.values[i], ctx.a().m);
  return out;
}

FlowTrajectory integrate_flow(const HierarchyContext& ctx, const Field& u0, double T,
                              double dt, int snapshots) {
  check_phase_point(ctx, u0);
  if (!(T > 0)) throw DomainError("integrate_flow: T must be positive");
  if (snapshots < 2) snapshots = 2;
  if (dt <= 0) dt = stable_dt(u0.grid, ctx.j);
  long steps = std::max<long>(1, std::lround(std::ceil(T / dt)));
  // align to the snapshot count so stored times are exactly uniform
  const long blocks = snapshots - 1;
  steps = ((steps + blocks - 1) / blocks) * blocks;
  const double dt_eff = T / double(steps);

  FlowTrajectory traj;
  traj.dt = dt_eff;
  auto rhs = [&](const Field& s) { return flow_rhs(ctx, s); };

  std::vector<long> snap_at(snapshots);
  for (int k = 0; k < snapshots; ++k)
    snap_at[k] = std::lround(double(k) * double(steps) / (snapshots - 1));

  Field u = u0;
  long next = 0;
  for (long s = 0; s <= steps; ++s) {
    if (next < snapshots && s == snap_at[next]) {
      traj.t.push_back(s * dt_eff);
      traj.u.push_back(u);
      double p0 = 0.0;
      for (const Mat& v : u.values) p0 = std::max(p0, norm_alg(ctx.cd.pi0(v)));
      traj.pi0_drift = std::max(traj.pi0_drift, p0);
      ++next;
    }
    if (s < steps) u = rk4_step(rhs, u, dt_eff, s);
  }
  return traj;
}

LaxConnection lax_pair(const HierarchyContext& ctx, const Field& u, Complex lambda) {
  QSequence qs = q_sequence(ctx, u, ctx.j);
  LaxConnection lc;
  lc.lambda = lambda;
  lc.grid = u.grid;
  lc.A.resize(u.size());
  lc.B.resize(u.size());
  for (int i = 0; i < u.size(); ++i) {
    lc.A[i] = lambda * ctx.a().m + u.values[i];
    Mat B = std::pow(lambda, ctx.j) * ctx.b.m;
    for (int m = 1; m <= ctx.j; ++m)
      B += std::pow(lambda, ctx.j - m) * qs.q[m].values[i];
    lc.B[i] = std::move(B);
  }
  return lc;
}

double flatness_residual(const HierarchyContext& ctx, const FlowTrajectory& traj,
                         Complex lambda) {
  const int K = static_cast<int>(traj.t.size());
  if (K < 3) throw DomainError("flatness_residual: need at least 3 snapshots");
  double worst = 0.0;
  for (int k = 1; k + 1 < K; ++k) {
    // second-order t-derivative weights valid for uneven snapshot spacing
    const double h1 = traj.t[k] - traj.t[k - 1];
    const double h2 = traj.t[k + 1] - traj.t[k];
    const double wm = -h2 / (h1 * (h1 + h2));
    const double w0 = (h2 - h1) / (h1 * h2);
    const double wp = h1 / (h2 * (h1 + h2));
    LaxConnection lc = lax_pair(ctx, traj.u[k], lambda);
    std::vector<Mat> Bx = apply_derivative(lc.grid, lc.B, 1);
    for (int i = 0; i < traj.u[k].size(); ++i) {
      Mat At = wm * traj.u[k - 1].values[i] + w0 * traj.u[k].values[i] +
               wp * traj.u[k + 1].values[i];
      Mat res = At - Bx[i] - bracket_m(lc.A[i], lc.B[i]);
      worst = std::max(worst, res.norm());
    }
  }
  return worst;
}

double conserved_F(const HierarchyContext& ctx, const Field& u, int j) {
  if (j < 0) throw DomainError("conserved_F: j must be >= 0");
  QSequence qs = q_sequence(ctx, u, j + 2);
  std::vector<double> integrand(u.size());
  for (int i = 0; i < u.size(); ++i)
    integrand[i] = inner_m(qs.q[j + 2].values[i], ctx.a().m);
  return -integrate_line(u.grid, integrand) / double(j + 1);
}

Field grad_F(const HierarchyContext& ctx, const Field& u, int j) {
  if (j < 0) throw DomainError("grad_F: j must be >= 0");
  QSequence qs = q_sequence(ctx, u, j + 1);
  Field out(u.grid, u.tag, DecayClass::free_form);
  for (int i = 0; i < u.size(); ++i) out.values[i] = ctx.cd.pi1(qs.q[j + 1].values[i]);
  return out;
}

Field poisson_Ja(const HierarchyContext& ctx, const Field& v) {
  Field out(v.grid, v.tag, DecayClass::free_form);
  for (int i = 0; i < v.size(); ++i) out.values[i] = bracket_m(v.values[i], ctx.a().m);
  return out;
}

Field poisson_P(const HierarchyContext& ctx, const Field& u, const Field& v,
                Anchoring anchor) {
  require_layout(u, v);
  Field out = derivative(v, 1);
  Field h_integrand(u.grid, u.tag, DecayClass::free_form);
  for (int i = 0; i < u.size(); ++i) {
    Mat uv = bracket_m(u.values[i], v.values[i]);
    Mat uv0 = ctx.cd.pi0(uv);
    out.values[i] += uv - uv0;
    h_integrand.values[i] = -uv0;
  }
  Field h = antiderivative_from_left(h_integrand);
  if (anchor == Anchoring::symmetric) {
    Mat half_total = 0.5 * h.values.back();
    for (auto& m : h.values) m -= half_total;
  }
  for (int i = 0; i < u.size(); ++i)
    out.values[i] += bracket_m(u.values[i], h.values[i]);
  return out;
}

Field poisson_Jk(const HierarchyContext& ctx, const Field& u, const Field& v, int k,
                 Anchoring anchor) {
  if (k < 0) throw DomainError("poisson_Jk: k must be >= 0");
  Field w = v;
  for (int rep = 0; rep < k; ++rep) {
    Field pw = poisson_P(ctx, u, w, anchor);
    for (int i = 0; i < w.size(); ++i) w.values[i] = ctx.cd.ad_inverse_m(pw.values[i], false);
  }
  return poisson_Ja(ctx, w);
}

Field poisson_P_shortcut(const HierarchyContext& ctx, const Field& u, const Field& v,
                         const Field& v_ext) {
  require_layout(u, v);
  require_layout(u, v_ext);
  const double scale = std::max(1.0, v_ext.sup_norm());
  double pi1_defect = 0.0;
  for (int i = 0; i < v.size(); ++i)
    pi1_defect = std::max(pi1_defect,
                          norm_alg(ctx.cd.pi1(v_ext.values[i]) - v.values[i]));
  if (pi1_defect > tol::solve * scale)
    throw DomainError("poisson_P_shortcut: pi1(v_ext) != v, defect " +
                      std::to_string(pi1_defect));
  const double left = norm_alg(v_ext.values.front());
  if (left > tol::solve * scale)
    throw DomainError("poisson_P_shortcut: v_ext does not vanish at -L, norm " +
                      std::to_string(left));

  Field out = derivative(v_ext, 1);
  for (int i = 0; i < u.size(); ++i)
    out.values[i] += bracket_m(u.values[i], v_ext.values[i]);
  double perp_defect = 0.0;
  for (int i = 0; i < u.size(); ++i)
    perp_defect = std::max(perp_defect, norm_alg(ctx.cd.pi0(out.values[i])));
  if (perp_defect > 1e-4 * std::max(1.0, out.sup_norm()))
    throw DomainError("poisson_P_shortcut: (v_ext)_x + [u, v_ext] leaves U_a^perp, defect " +
                      std::to_string(perp_defect));
  return out;
}

}  // namespace orbitflow
