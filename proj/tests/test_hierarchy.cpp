#include <doctest.h>

#include <cmath>
#include <random>

#include "orbitflow/fixtures.hpp"
#include "orbitflow/hierarchy.hpp"
#include "orbitflow/symspace.hpp"

using namespace orbitflow;

namespace {

HierarchyContext su2_nls(int j = 2) { return make_context(fixtures::su2_a(), j); }

double l2_pairing(const Field& f, const Field& g) {
  std::vector<double> s(f.size());
  for (int i = 0; i < f.size(); ++i) s[i] = inner_m(f.values[i], g.values[i]);
  return integrate_line(f.grid, s);
}

}  // namespace

TEST_CASE("q_sequence: Q1 = u for b = a, decay of higher terms") {
  LineGrid g{20.0, 512};
  HierarchyContext ctx = su2_nls();
  Field u = fixtures::su2_sech(g, 0.6);
  QSequence qs = q_sequence(ctx, u, 3);

  CHECK(sup_distance(qs.q[1], u) < 1e-10);
  CHECK(qs.pi0_residual < tau_rec);
  for (int j = 1; j <= 3; ++j) {
    CHECK(norm_alg(qs.q[j].values.front()) < 1e-8);
    CHECK(norm_alg(qs.q[j].values.back()) < 1e-8);
  }
}

TEST_CASE("q_sequence reproduces the su(2) closed form for Q2") {
  LineGrid g{20.0, 512};
  HierarchyContext ctx = su2_nls();
  Field u = fixtures::su2_sech(g, 0.55);
  QSequence qs = q_sequence(ctx, u, 2);

  Field ux = derivative(u, 1);
  const Mat a = ctx.a().m;
  double worst = 0.0;
  for (int i = 0; i < g.N; ++i) {
    const Complex q = fixtures::su2_to_q(u.values[i]);
    const double q2 = std::norm(q);
    Mat expected = bracket_m(a, ux.values[i]) - 2.0 * q2 * a;
    worst = std::max(worst, norm_alg(qs.q[2].values[i] - expected));
  }
  CHECK(worst < 3e-5);  // O(h^4) at N = 512; the N = 1024 bound lives in acceptance
}

TEST_CASE("q_sequence reproduces the sphere-restriction closed forms") {
  // S^3 hierarchy: u = sum u_i k_i, Q2 = -(|u|^2/2) a - sum (u_i)_x p_i,
  // Q3 = sum(-(u_i)_xx - (|u|^2/2) u_i) k_i + sum y_ij e_ij with
  // y_ij = -u_i (u_j)_x + u_j (u_i)_x.
  const int n = 3;
  SymmetricSpaceSpec spec = catalog(SpaceId::sphere, n);
  HierarchyContext ctx = make_context(spec.a, 3);
  LineGrid g{20.0, 512};

  const double c[2] = {0.45, -0.3};
  Field u = make_field(g, spec.tag, [&](double x) {
    Eigen::VectorXd v(n - 1);
    for (int i = 0; i < n - 1; ++i) v(i) = c[i] / std::cosh(x);
    return sn_k_embed(spec, v);
  });
  QSequence qs = q_sequence(ctx, u, 3);

  // component derivatives via the same stencils the recursion composes
  std::vector<Eigen::VectorXd> uc(g.N);
  for (int i = 0; i < g.N; ++i) uc[i] = sn_k_extract(spec, u.values[i]);
  std::vector<Eigen::VectorXd> ucx = apply_derivative(g, uc, 1);
  std::vector<Eigen::VectorXd> ucxx = apply_derivative(g, ucx, 1);

  double worst2 = 0.0, worst3 = 0.0;
  for (int i = 0; i < g.N; ++i) {
    const double nu2 = uc[i].squaredNorm();
    // Q2 oracle in P
    Mat q2 = -0.5 * nu2 * spec.a.m;
    for (int m = 0; m < n - 1; ++m) {
      Mat p = Mat::Zero(n + 1, n + 1);
      p(m + 2, 0) = 1.0;
      p(0, m + 2) = -1.0;
      q2 -= ucx[i](m) * p;
    }
    worst2 = std::max(worst2, norm_alg(qs.q[2].values[i] - q2));
    // Q3 oracle in K
    Mat q3 = Mat::Zero(n + 1, n + 1);
    for (int m = 0; m < n - 1; ++m) {
      const double coeff = -ucxx[i](m) - 0.5 * nu2 * uc[i](m);
      q3(m + 2, 1) += coeff;
      q3(1, m + 2) -= coeff;
    }
    for (int mi = 0; mi < n - 1; ++mi)
      for (int mj = 0; mj < n - 1; ++mj) {
        const double y = -uc[i](mi) * ucx[i](mj) + uc[i](mj) * ucx[i](mi);
        q3(mi + 2, mj + 2) += y;
      }
    worst3 = std::max(worst3, norm_alg(qs.q[3].values[i] - q3));
  }
  CHECK(worst2 < 2e-5);  // O(h^4) at N = 512
  CHECK(worst3 < 1e-5);
}

TEST_CASE("asymptotic normalization residual") {
  LineGrid g{20.0, 512};
  HierarchyContext ctx = su2_nls();

  Field zero(g, ctx.tag(), DecayClass::decaying);
  QSequence q0 = q_sequence(ctx, zero, 3);
  CHECK(check_asymptotic_normalization(ctx, q0, 2) < 1e-14);

  Field u = fixtures::su2_sech(g, 0.5);
  QSequence qs = q_sequence(ctx, u, 3);
  const double r512 = check_asymptotic_normalization(ctx, qs, 2);
  CHECK(r512 < 5e-5);

  LineGrid g2{20.0, 1024};
  Field u2 = fixtures::su2_sech(g2, 0.5);
  const double r1024 = check_asymptotic_normalization(ctx, q_sequence(ctx, u2, 3), 2);
  CHECK(r1024 < 1e-6);  // the default-grid bound
  CHECK(std::log2(r512 / r1024) > 3.0);  // ~O(h^4)
}

TEST_CASE("flow_rhs: vacuum, n-wave closed form, su(2) NLS coordinate form") {
  LineGrid g{20.0, 512};

  SUBCASE("vacuum") {
    HierarchyContext ctx = su2_nls();
    Field zero(g, ctx.tag(), DecayClass::decaying);
    CHECK(flow_rhs(ctx, zero).sup_norm() < 1e-14);
  }

  SUBCASE("n-wave (b,1) on u(3)") {
    AlgebraElement a = fixtures::un_diag({1.0, 2.0, 3.5});
    AlgebraElement b = fixtures::un_diag({0.7, -1.1, 0.4});
    HierarchyContext ctx(a, b, 1);
    Field u = fixtures::perp_bumps(ctx.cd, g, 0.4, 101);
    Field got = flow_rhs(ctx, u);

    Field ux = derivative(u, 1);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i) {
      Mat q1 = bracket_m(b.m, ctx.cd.solve_ad_a(u.values[i]));
      Mat expected = bracket_m(b.m, ctx.cd.solve_ad_a(ux.values[i])) +
                     bracket_m(u.values[i], q1);
      worst = std::max(worst, norm_alg(got.values[i] - expected));
    }
    CHECK(worst < 1e-8);
  }

  SUBCASE("su(2) (a,2) in the q coordinate: q_t = i(q_xx + 2|q|^2 q)") {
    HierarchyContext ctx = su2_nls();
    Field u = fixtures::su2_sech(g, 0.5);
    Field got = flow_rhs(ctx, u);
    Field uxx = derivative(derivative(u, 1), 1);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i) {
      const Complex q = fixtures::su2_to_q(u.values[i]);
      const Complex qxx = fixtures::su2_to_q(uxx.values[i]);
      const Complex expected = Complex(0, 1) * (qxx + 2.0 * std::norm(q) * q);
      worst = std::max(worst, std::abs(fixtures::su2_to_q(got.values[i]) - expected));
    }
    CHECK(worst < 2e-5);  // O(h^4) at N = 512; acceptance pins 1e-6 at N = 1024
  }
}

TEST_CASE("integrate_flow: vacuum stays constant; mass is conserved") {
  LineGrid g{15.0, 384};
  HierarchyContext ctx = su2_nls();

  Field zero(g, ctx.tag(), DecayClass::decaying);
  FlowTrajectory flat = integrate_flow(ctx, zero, 0.1, 0.0, 3);
  CHECK(sup_distance(flat.u.back(), zero) < 1e-14);

  Field u0 = fixtures::su2_sech(g, 0.6);
  FlowTrajectory traj = integrate_flow(ctx, u0, 0.3, 0.0, 5);
  CHECK(traj.pi0_drift < 1e-10);

  auto mass = [&](const Field& u) {
    std::vector<double> s(u.size());
    for (int i = 0; i < u.size(); ++i)
      s[i] = std::norm(fixtures::su2_to_q(u.values[i]));
    return integrate_line(g, s);
  };
  const double m0 = mass(traj.u.front());
  double drift = 0.0;
  for (const Field& u : traj.u) drift = std::max(drift, std::abs(mass(u) - m0));
  CHECK(drift / m0 < 1e-6);
}

TEST_CASE("Lax pair flatness") {
  LineGrid g{15.0, 256};
  HierarchyContext ctx = su2_nls();

  SUBCASE("vacuum: both sides vanish") {
    Field zero(g, ctx.tag(), DecayClass::decaying);
    FlowTrajectory traj = integrate_flow(ctx, zero, 0.1, 0.0, 5);
    CHECK(flatness_residual(ctx, traj, Complex(1.0, 0.0)) < 1e-13);
    CHECK(flatness_residual(ctx, traj, Complex(0.0, 1.0)) < 1e-13);
  }

  SUBCASE("connection assembly: A = a lambda + u exactly") {
    Field u = fixtures::su2_sech(g, 0.5);
    const Complex lam(0.3, -0.7);
    LaxConnection lc = lax_pair(ctx, u, lam);
    for (int i = 0; i < g.N; i += 50)
      CHECK((lc.A[i] - (lam * ctx.a().m + u.values[i])).cwiseAbs().maxCoeff() == 0.0);
    // at lambda = 0 the t-part is Q_j itself
    LaxConnection l0 = lax_pair(ctx, u, Complex(0, 0));
    QSequence qs = q_sequence(ctx, u, ctx.j);
    for (int i = 0; i < g.N; i += 50)
      CHECK((l0.B[i] - qs.q[ctx.j].values[i]).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("lambda = 0 reduces to the flow-equation residual") {
    Field u0 = fixtures::su2_sech(g, 0.5);
    FlowTrajectory traj = integrate_flow(ctx, u0, 0.2, 0.0, 5);
    const double lax0 = flatness_residual(ctx, traj, Complex(0.0, 0.0));
    // the same residual measured directly: |u_t - (Q_2)_x - [u, Q_2]|
    double direct = 0.0;
    for (size_t k = 1; k + 1 < traj.u.size(); ++k) {
      const double dt2 = traj.t[k + 1] - traj.t[k - 1];
      Field rhs = flow_rhs(ctx, traj.u[k]);
      for (int i = 0; i < g.N; ++i) {
        Mat ut = (traj.u[k + 1].values[i] - traj.u[k - 1].values[i]) / dt2;
        direct = std::max(direct, (ut - rhs.values[i]).norm());
      }
    }
    CHECK(lax0 == doctest::Approx(direct).epsilon(1e-6));
  }
}

TEST_CASE("conserved functionals and gradients") {
  LineGrid g{20.0, 512};
  HierarchyContext ctx = su2_nls();
  Field u = fixtures::su2_sech(g, 0.62);

  SUBCASE("F_{a,0} is the mass") {
    std::vector<double> s(u.size());
    for (int i = 0; i < u.size(); ++i)
      s[i] = std::norm(fixtures::su2_to_q(u.values[i]));
    const double mass = integrate_line(g, s);
    CHECK(conserved_F(ctx, u, 0) == doctest::Approx(mass).epsilon(1e-5));
    Field zero(g, ctx.tag(), DecayClass::decaying);
    CHECK(conserved_F(ctx, zero, 0) == doctest::Approx(0.0));
  }

  SUBCASE("grad F_{a,0} = u (since Q_1 = u)") {
    CHECK(sup_distance(grad_F(ctx, u, 0), u) < 1e-10);
  }

  SUBCASE("Gateaux directional derivative matches the gradient") {
    for (int j : {0, 1, 2}) {
      Field gradf = grad_F(ctx, u, j);
      for (int rep = 0; rep < 3; ++rep) {
        Field delta = fixtures::perp_bumps(ctx.cd, g, 0.3, 1000 + 10 * j + rep);
        const double eps = 1e-4;
        const double dF = (conserved_F(ctx, axpy(u, eps, delta), j) -
                           conserved_F(ctx, axpy(u, -eps, delta), j)) /
                          (2 * eps);
        const double pairing = l2_pairing(gradf, delta);
        const double dnorm = std::sqrt(l2_pairing(delta, delta));
        CHECK(std::abs(dF - pairing) / dnorm < 1e-5);
      }
    }
  }
}

TEST_CASE("Poisson operators") {
  LineGrid g{20.0, 512};
  HierarchyContext ctx = su2_nls();
  Field u = fixtures::su2_sech(g, 0.5);
  Field v = fixtures::perp_bumps(ctx.cd, g, 0.4, 201);
  Field w = fixtures::perp_bumps(ctx.cd, g, 0.4, 202);

  SUBCASE("J_a is the pointwise bracket with a") {
    Field ja = poisson_Ja(ctx, v);
    for (int i = 0; i < g.N; i += 37)
      CHECK((ja.values[i] - bracket_m(v.values[i], ctx.a().m)).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("P_0 is d/dx") {
    Field zero(g, ctx.tag(), DecayClass::decaying);
    CHECK(sup_distance(poisson_P(ctx, zero, v), derivative(v, 1)) < 1e-13);
  }

  SUBCASE("flow = J_k(grad F_{b,j-k}) for k = 0,1,2 and j = 2") {
    Field rhs = flow_rhs(ctx, u);
    for (int k : {0, 1, 2}) {
      Field jk = poisson_Jk(ctx, u, grad_F(ctx, u, 2 - k), k);
      CHECK(sup_distance(rhs, jk) < 1e-6);
    }
  }

  SUBCASE("Hamiltonian ladder J_a grad F_{b,j} = J_1 grad F_{b,j-1} = J_2 grad F_{b,j-2}") {
    Field l0 = poisson_Ja(ctx, grad_F(ctx, u, 2));
    Field l1 = poisson_Jk(ctx, u, grad_F(ctx, u, 1), 1);
    Field l2 = poisson_Jk(ctx, u, grad_F(ctx, u, 0), 2);
    CHECK(sup_distance(l0, l1) < 1e-6);
    CHECK(sup_distance(l0, l2) < 1e-6);
  }

  SUBCASE("skew-adjointness of J_a and P_u in the L^2 pairing") {
    CHECK(std::abs(l2_pairing(poisson_Ja(ctx, v), w) + l2_pairing(v, poisson_Ja(ctx, w))) <
          1e-10);
    CHECK(std::abs(l2_pairing(poisson_P(ctx, u, v, Anchoring::symmetric), w) +
                   l2_pairing(v, poisson_P(ctx, u, w, Anchoring::symmetric))) < 1e-6);
    // the left-anchored shorthand differs by a boundary functional
    CHECK(std::abs(l2_pairing(poisson_P(ctx, u, v), w) + l2_pairing(v, poisson_P(ctx, u, w))) >
          1e-3);
  }
}

TEST_CASE("poisson_P_shortcut") {
  LineGrid g{20.0, 512};
  HierarchyContext ctx = su2_nls();
  Field u = fixtures::su2_sech(g, 0.5);

  SUBCASE("[u,v] already perpendicular: P_u(v) = v_x + [u,v]") {
    // v parallel to u pointwise makes [u, v] = 0
    Field v = 0.7 * u;
    Field got = poisson_P_shortcut(ctx, u, v, v);
    Field expected = derivative(v, 1) + bracket_field(u, v);
    CHECK(sup_distance(got, expected) < 1e-12);
  }

  SUBCASE("v_ext = g^-1 b g - b gives P_u(pi1(g^-1 b g)) = -[u, b]") {
    Frame fr = solve_frame(u, identity_element(ctx.tag()));
    const Mat b = ctx.a().m;  // any centralizer direction
    Field v(g, ctx.tag(), DecayClass::free_form);
    Field v_ext(g, ctx.tag(), DecayClass::free_form);
    for (int i = 0; i < g.N; ++i) {
      Mat conj = fr.values[i].adjoint() * b * fr.values[i];
      v_ext.values[i] = conj - b;
      v.values[i] = ctx.cd.pi1(conj);
    }
    Field shortcut = poisson_P_shortcut(ctx, u, v, v_ext);
    Field direct = poisson_P(ctx, u, v);
    CHECK(sup_distance(shortcut, direct) < 5e-5);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i)
      worst = std::max(worst,
                       norm_alg(shortcut.values[i] + bracket_m(u.values[i], b)));
    CHECK(worst < 5e-5);
  }

  SUBCASE("violated preconditions are rejected") {
    Field v = fixtures::perp_bumps(ctx.cd, g, 0.3, 301);
    Field bad = constant_field(g, ctx.a());  // does not vanish at -L
    CHECK_THROWS_AS((void)poisson_P_shortcut(ctx, u, v, bad), DomainError);
  }
}

TEST_CASE("conservation along the flow for several functionals") {
  LineGrid g{15.0, 384};
  HierarchyContext ctx = su2_nls();
  Field u0 = fixtures::su2_sech(g, 0.55);
  FlowTrajectory traj = integrate_flow(ctx, u0, 0.25, 0.0, 5);
  for (int j : {0, 1, 2, 3}) {
    const double f0 = conserved_F(ctx, traj.u.front(), j);
    double drift = 0.0;
    for (const Field& u : traj.u)
      drift = std::max(drift, std::abs(conserved_F(ctx, u, j) - f0));
    CHECK(drift / std::max(1.0, std::abs(f0)) < 1e-6);
  }
}

TEST_CASE("hierarchy context invariants") {
  AlgebraElement a = fixtures::un_diag({1.0, 2.0, 3.0});
  AlgebraElement b = fixtures::un_diag({0.5, 0.5, -1.0});
  CHECK_NOTHROW(HierarchyContext(a, b, 1));

  // b outside the centralizer
  Mat off = Mat::Zero(3, 3);
  off(0, 1) = 1.0;
  off(1, 0) = -1.0;
  CHECK_THROWS_AS(HierarchyContext(a, {a.tag, off}, 1), StructuralError);

  // singular a demands b = a
  AlgebraTag u4{Family::u, 4};
  Mat m = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) m(i, i) = Complex(0, i < 2 ? 0.5 : -0.5);
  AlgebraElement sing{u4, m};
  CHECK_NOTHROW(make_context(sing, 2));
  Mat bm = Mat::Zero(4, 4);
  for (int i = 0; i < 4; ++i) bm(i, i) = Complex(0, i < 2 ? 1.0 : -0.5);
  CHECK_THROWS_AS(HierarchyContext(sing, {u4, bm}, 2), StructuralError);
}
