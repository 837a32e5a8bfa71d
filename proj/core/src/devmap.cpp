#include "orbitflow/devmap.hpp"

#include <cmath>

namespace orbitflow {

namespace {

Curve conjugated_curve(const HierarchyContext& ctx, const Frame& g) {
  Curve c;
  c.base = ctx.a();
  c.field = Field(g.grid, g.tag, DecayClass::orbit_valued);
  for (int i = 0; i < g.size(); ++i)
    c.field.values[i] = conjugate_m(g.values[i], ctx.a().m);
  return c;
}

double pair_defect(const HierarchyContext& ctx, const Curve& gamma, const Frame& g) {
  double d = 0.0;
  for (int i = 0; i < g.size(); ++i)
    d = std::max(d, norm_alg(gamma.field.values[i] -
                             conjugate_m(g.values[i], ctx.a().m)));
  return d;
}

}  // namespace

DevelopedPair undevelop(const HierarchyContext& ctx, const Field& u) {
  check_phase_point(ctx, u);
  DevelopedPair pair;
  pair.u = u;
  pair.g = solve_frame(u, identity_element(ctx.tag()));
  pair.gamma = conjugated_curve(ctx, pair.g);
  pair.reconstruction_defect = 0.0;
  return pair;
}

DevelopedPair develop(const HierarchyContext& ctx, const Curve& gamma) {
  check_grid(gamma.grid());
  if (gamma.field.tag != ctx.tag()) throw StructuralError("develop: tag mismatch");
  CurveDefect cd = curve_defect(gamma);
  if (cd.spectrum > tol::orbit)
    throw DomainError("develop: samples leave the orbit, spectrum drift " +
                      std::to_string(cd.spectrum));

  const LineGrid& g = gamma.grid();
  const int N = g.N;
  const double h = g.h();
  Field dgamma = derivative(gamma.field, 1);

  // u(x) = ad_a_inverse(g^-1 gamma_x g); solved self-consistently with the
  // frame by Picard sweeps over a CF4 exponential pass.
  Field u(g, ctx.tag(), DecayClass::free_form);
  Frame frame(g, ctx.tag());

  auto u_from_frame = [&](const Frame& fr, Field& dest) {
    for (int i = 0; i < N; ++i) {
      Mat v = fr.values[i].adjoint() * dgamma.values[i] * fr.values[i];
      dest.values[i] = ctx.cd.ad_inverse_m(v, false);
    }
  };

  // order-2 predictor: trapezoidal exponent
  frame.values[0] = Mat::Identity(ctx.tag().matrix_dim(), ctx.tag().matrix_dim());
  for (int i = 0; i + 1 < N; ++i) {
    Mat vi = frame.values[i].adjoint() * dgamma.values[i] * frame.values[i];
    Mat ui = ctx.cd.ad_inverse_m(vi, false);
    Mat gp = frame.values[i] * expm_antihermitian(h * ui);
    Mat vn = gp.adjoint() * dgamma.values[i + 1] * gp;
    Mat un = ctx.cd.ad_inverse_m(vn, false);
    frame.values[i + 1] =
        project_to_group(ctx.tag(), frame.values[i] * expm_antihermitian(0.5 * h * (ui + un)));
  }
  u_from_frame(frame, u);

  // CF4 sweeps until the phase point settles
  const int max_sweeps = 12;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Frame next = solve_frame(u, identity_element(ctx.tag()));
    Field u_new(g, ctx.tag(), DecayClass::free_form);
    u_from_frame(next, u_new);
    const double change = sup_distance(u_new, u);
    frame = std::move(next);
    u = std::move(u_new);
    if (change < 1e-13 * std::max(1.0, u.sup_norm())) break;
  }

  DevelopedPair pair;
  pair.reconstruction_defect = pair_defect(ctx, gamma, frame);
  const double bound = 10.0 * h * h * std::max(1.0, dgamma.sup_norm());
  if (pair.reconstruction_defect > bound)
    throw NumericalError("develop: reconstruction defect " +
                         std::to_string(pair.reconstruction_defect) + " exceeds " +
                         std::to_string(bound));
  pair.gamma = gamma;
  pair.g = std::move(frame);
  const double boundary = std::max(norm_alg(u.values.front()), norm_alg(u.values.back()));
  u.decay = boundary < tol::decay ? DecayClass::decaying : DecayClass::free_form;
  pair.u = std::move(u);
  return pair;
}

double tangency_defect(const Curve& gamma, const Field& xi) {
  require_layout(gamma.field, xi, "tangency");
  double d = 0.0;
  for (int i = 0; i < xi.size(); ++i) {
    AdSplitting split(gamma.field.tag, gamma.field.values[i]);
    d = std::max(d, norm_alg(split.normal(xi.values[i])));
  }
  return d;
}

static void require_tangent(const Curve& gamma, const Field& xi, const char* op) {
  const double d = tangency_defect(gamma, xi);
  if (d > 1e-4 * std::max(1.0, xi.sup_norm()))
    throw DomainError(std::string(op) + ": field is not tangent, normal part " +
                      std::to_string(d));
}

Field geo_J(const Curve& gamma, const Field& xi, bool check_tangent) {
  require_layout(gamma.field, xi, "geo_J");
  if (check_tangent) require_tangent(gamma, xi, "geo_J");
  Field out(xi.grid, xi.tag, DecayClass::free_form);
  for (int i = 0; i < xi.size(); ++i)
    out.values[i] = bracket_m(xi.values[i], gamma.field.values[i]);
  return out;
}

Field geo_J_inverse(const Curve& gamma, const Field& v, bool check_tangent) {
  require_layout(gamma.field, v, "geo_J_inverse");
  if (check_tangent) require_tangent(gamma, v, "geo_J_inverse");
  Field out(v.grid, v.tag, DecayClass::free_form);
  for (int i = 0; i < v.size(); ++i) {
    AdSplitting split(v.tag, gamma.field.values[i]);
    out.values[i] = split.solve_bracket(v.values[i]);
  }
  return out;
}

Field geo_Lambda_conj(const HierarchyContext& ctx, const DevelopedPair& pair, const Field& xi,
                      Anchoring anchor) {
  require_layout(pair.u, xi, "geo_Lambda_conj");
  const int N = xi.size();
  Field v(xi.grid, xi.tag, DecayClass::free_form);
  double pi0_defect = 0.0;
  for (int i = 0; i < N; ++i) {
    Mat w = pair.g.values[i].adjoint() * xi.values[i] * pair.g.values[i];
    pi0_defect = std::max(pi0_defect, norm_alg(ctx.cd.pi0(w)));
    v.values[i] = ctx.cd.pi1(w);
  }
  if (pi0_defect > 1e-4 * std::max(1.0, xi.sup_norm()))
    throw DomainError("geo_Lambda_conj: input is not tangent, defect " +
                      std::to_string(pi0_defect));
  Field pv = poisson_P(ctx, pair.u, v, anchor);
  Field out(xi.grid, xi.tag, DecayClass::free_form);
  for (int i = 0; i < N; ++i)
    out.values[i] = conjugate_m(pair.g.values[i], pv.values[i]);
  return out;
}

Field geo_Lambda_geom(const HierarchyContext& ctx, const Curve& gamma, const Field& xi,
                      Anchoring anchor) {
  if (ctx.cd.centralizer_dim() != ctx.tag().rank())
    throw DomainError("geo_Lambda_geom: base point must be regular (use geo_Lambda_conj)");
  require_layout(gamma.field, xi, "geo_Lambda_geom");
  const int N = xi.size();

  DevelopedPair pair = develop(ctx, gamma);
  Field xi_x = derivative(xi, 1);

  // covariant derivative and second fundamental form from the ambient x-derivative
  Field cov(xi.grid, xi.tag, DecayClass::free_form);
  Field II(xi.grid, xi.tag, DecayClass::free_form);
  for (int i = 0; i < N; ++i) {
    AdSplitting split(xi.tag, gamma.field.values[i]);
    II.values[i] = split.normal(xi_x.values[i]);
    cov.values[i] = xi_x.values[i] - II.values[i];
  }

  Field out = cov;
  for (const AlgebraElement& ak : ctx.cd.basis_T()) {
    Field ahat = parallel_normal(pair, ak);
    Field ahat_x = derivative(ahat, 1);
    std::vector<double> integrand(N);
    for (int i = 0; i < N; ++i)
      integrand[i] = -inner_m(II.values[i], ahat.values[i]);
    std::vector<double> hk = apply_antiderivative(xi.grid, integrand);
    if (anchor == Anchoring::symmetric) {
      const double half_total = 0.5 * hk.back();
      for (double& v : hk) v -= half_total;
    }
    // -h_k * A_{ahat}(gamma_x) = +h_k * (ahat)_x
    for (int i = 0; i < N; ++i) out.values[i] += hk[i] * ahat_x.values[i];
  }
  return out;
}

Field parallel_normal(const DevelopedPair& pair, const AlgebraElement& b) {
  Field out(pair.u.grid, pair.u.tag, DecayClass::free_form);
  for (int i = 0; i < out.size(); ++i)
    out.values[i] = conjugate_m(pair.g.values[i], b.m);
  return out;
}

Field curve_flow_rhs(const HierarchyContext& ctx, const DevelopedPair& pair,
                     bool crosscheck, double* xcheck_defect, double xcheck_tol) {
  QSequence qs = q_sequence(ctx, pair.u, ctx.j);
  Field out(pair.u.grid, pair.u.tag, DecayClass::free_form);
  for (int i = 0; i < out.size(); ++i)
    out.values[i] = conjugate_m(
        pair.g.values[i], bracket_m(qs.q[ctx.j].values[i], ctx.a().m));

  if (crosscheck || xcheck_defect) {
    Field w = derivative(parallel_normal(pair, ctx.b), 1);
    for (int rep = 1; rep < ctx.j; ++rep)
      w = geo_Lambda_conj(ctx, pair, geo_J_inverse(pair.gamma, w, false));
    const double defect = sup_distance(out, w);
    if (xcheck_defect) *xcheck_defect = defect;
    if (crosscheck && defect > xcheck_tol)
      throw ConsistencyError("curve_flow_rhs: conjugated-Q and (Lambda J^-1)^{j-1} routes "
                             "disagree by " + std::to_string(defect));
  }
  return out;
}

Field schrodinger_rhs(const Curve& gamma) {
  CentralizerData cd(gamma.base);
  // the complex-structure condition ad(a)^2 = -Id on U_a^perp
  for (const Mat& e : algebra_basis(gamma.base.tag)) {
    Mat p = cd.pi1(e);
    if (norm_alg(bracket_m(gamma.base.m, bracket_m(gamma.base.m, p)) + p) >
        1e-8 * std::max(1.0, norm_alg(p)))
      throw DomainError("schrodinger_rhs: base point is not Hermitian-symmetric "
                        "(ad(a)^2 != -Id on U_a^perp)");
  }
  Field gxx = derivative(gamma.field, 2);
  Field out(gamma.field.grid, gamma.field.tag, DecayClass::free_form);
  for (int i = 0; i < out.size(); ++i)
    out.values[i] = bracket_m(gamma.field.values[i], gxx.values[i]);
  return out;
}

Field invariant_poly_rhs(const Curve& gamma, int k) {
  if (gamma.field.tag.family != Family::u)
    throw DomainError("invariant_poly_rhs: u(n) orbits only");
  if (k < 1) throw DomainError("invariant_poly_rhs: k must be >= 1");
  const Complex scale = std::pow(Complex(0, 1), k - 1);
  Field poly(gamma.field.grid, gamma.field.tag, DecayClass::free_form);
  for (int i = 0; i < poly.size(); ++i) {
    Mat p = gamma.field.values[i];
    for (int rep = 1; rep < k; ++rep) p = p * gamma.field.values[i];
    poly.values[i] = scale * p;
  }
  return derivative(poly, 1);
}

double height_H(const Curve& gamma, const AlgebraElement& b) {
  if (b.tag != gamma.field.tag) throw StructuralError("height_H: tag mismatch");
  std::vector<double> integrand(gamma.field.size());
  for (int i = 0; i < gamma.field.size(); ++i)
    integrand[i] = inner_m(gamma.field.values[i] - gamma.base.m, b.m);
  return integrate_line(gamma.grid(), integrand);
}

Field grad_height(const Curve& gamma, const AlgebraElement& b) {
  if (b.tag != gamma.field.tag) throw StructuralError("grad_height: tag mismatch");
  Field out(gamma.field.grid, gamma.field.tag, DecayClass::free_form);
  for (int i = 0; i < out.size(); ++i) {
    AdSplitting split(gamma.field.tag, gamma.field.values[i]);
    out.values[i] = split.tangent(b.m);
  }
  return out;
}

double project_curve_to_orbit(Curve& c) {
  const Eigen::VectorXd ref = spectrum_imag(c.base.m);
  double worst = 0.0;
  for (Mat& v : c.field.values) {
    Mat snapped = snap_spectrum(v, ref);
    if (c.field.tag.family == Family::so) snapped = snapped.real().cast<Complex>();
    worst = std::max(worst, norm_alg(snapped - v));
    v = std::move(snapped);
  }
  worst = std::max(worst, norm_alg(c.field.values.front() - c.base.m));
  c.field.values.front() = c.base.m;
  return worst;
}

CurveTrajectory integrate_curve_flow(const HierarchyContext& ctx, const Curve& gamma0,
                                     double T, double dt, int snapshots) {
  check_curve(gamma0);
  if (gamma0.field.tag != ctx.tag()) throw StructuralError("integrate_curve_flow: tag mismatch");
  if (!(T > 0)) throw DomainError("integrate_curve_flow: T must be positive");
  if (snapshots < 2) snapshots = 2;
  if (dt <= 0) dt = stable_dt(gamma0.grid(), ctx.j);
  const long steps = std::max<long>(1, std::lround(std::ceil(T / dt)));
  const double dt_eff = T / double(steps);

  CurveTrajectory traj;
  traj.dt = dt_eff;

  auto rhs = [&](const Field& f) {
    Curve c{f, ctx.a()};
    project_curve_to_orbit(c);
    DevelopedPair pair = develop(ctx, c);
    return curve_flow_rhs(ctx, pair, false);
  };

  std::vector<long> snap_at(snapshots);
  for (int k = 0; k < snapshots; ++k)
    snap_at[k] = std::lround(double(k) * double(steps) / (snapshots - 1));

  Curve cur = gamma0;
  long next = 0;
  for (long s = 0; s <= steps; ++s) {
    if (next < snapshots && s == snap_at[next]) {
      traj.t.push_back(s * dt_eff);
      traj.gamma.push_back(cur);
      ++next;
    }
    if (s < steps) {
      Field stepped = rk4_step(rhs, cur.field, dt_eff, s);
      Curve c{std::move(stepped), ctx.a()};
      c.field.decay = DecayClass::orbit_valued;
      const double drift = project_curve_to_orbit(c);
      traj.reprojection_drift = std::max(traj.reprojection_drift, drift);
      if (drift > 100.0 * tol::orbit * std::max(1.0, norm_alg(ctx.a().m)))
        throw NumericalError("integrate_curve_flow: orbit drift " + std::to_string(drift) +
                             " too large for reprojection (step " + std::to_string(s) + ")");
      cur = std::move(c);
    }
  }
  return traj;
}

}  // namespace orbitflow
