#include <doctest.h>

#include <cmath>
#include <random>

#include "orbitflow/devmap.hpp"
#include "orbitflow/fixtures.hpp"
#include "orbitflow/symspace.hpp"

using namespace orbitflow;

namespace {

// decaying component bump
double cbump(double x, double c, double w) { return std::exp(-(x - c) * (x - c) / (w * w)); }

}  // namespace

TEST_CASE("catalog entries satisfy the Cartan relations") {
  std::vector<SymmetricSpaceSpec> entries = {
      catalog(SpaceId::gr_complex, 2, 1), catalog(SpaceId::gr_complex, 3, 1),
      catalog(SpaceId::gr_complex, 4, 2), catalog(SpaceId::sphere, 3),
      catalog(SpaceId::sphere, 4),        catalog(SpaceId::gr2_real, 3),
      catalog(SpaceId::so2n_un, 3),       catalog(SpaceId::spn_un, 2)};
  for (const auto& spec : entries) {
    CAPTURE(space_name(spec.id));
    CHECK(cartan_defect(spec) < 1e-12);
  }
  CHECK_THROWS_AS((void)catalog(SpaceId::gr_complex, 2, 2), DomainError);
}

TEST_CASE("Gr(1, C^2) is the su(2) NLS setting") {
  SymmetricSpaceSpec spec = catalog(SpaceId::gr_complex, 2, 1);
  CHECK(spec.tag.family == Family::su);
  CHECK((spec.a.m - fixtures::su2_a().m).cwiseAbs().maxCoeff() < 1e-15);
  // q <-> matrix identification round trip
  Mat q(1, 1);
  q << Complex(0.3, -0.8);
  CHECK((gr_q_extract(spec, gr_q_embed(spec, q)) - q).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("sphere catalog: k_i and p_i elementary-matrix bases") {
  const int n = 3;
  SymmetricSpaceSpec spec = catalog(SpaceId::sphere, n);
  // a = e_21 - e_12 in 1-based indices
  CHECK(spec.a.m(1, 0) == Complex(1, 0));
  CHECK(spec.a.m(0, 1) == Complex(-1, 0));

  Eigen::VectorXd u(n - 1);
  u << 0.4, -1.1;
  Mat k = sn_k_embed(spec, u);
  // k_i = e_{i2} - e_{2i}, rows 3..n+1 in 1-based indexing
  CHECK(k(2, 1) == Complex(0.4, 0));
  CHECK(k(1, 2) == Complex(-0.4, 0));
  CHECK(k(3, 1) == Complex(-1.1, 0));
  // K cap U_a^perp lives in K; p_i in P
  CHECK(norm_alg(spec.p_project(k)) < 1e-14);
  Eigen::VectorXd v(n);
  v << 1.0, 0.0, 0.0;
  Mat p = sn_p_embed(spec, v);
  CHECK(norm_alg(spec.k_project(p)) < 1e-14);
  CHECK((p - spec.a.m).cwiseAbs().maxCoeff() < 1e-15);  // e_1 <-> a
  CHECK((sn_k_extract(spec, k) - u).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("Sp(n)/U(n): U_a^perp is the purely imaginary part of sp(n)") {
  SymmetricSpaceSpec spec = catalog(SpaceId::spn_un, 2);
  for (const Mat& e : algebra_basis(spec.tag)) {
    Mat p = spec.p_project(e);
    CHECK(p.real().cwiseAbs().maxCoeff() < 1e-13);
    Mat k = spec.k_project(e);
    CHECK(k.imag().cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("Hermitian entries: ad(a)^2 = -Id and the complex structure maps to i") {
  std::mt19937 gen(7);
  std::normal_distribution<double> dist(0.0, 1.0);

  SUBCASE("ad(a)^2 = -Id on U_a^perp") {
    for (SymmetricSpaceSpec spec :
         {catalog(SpaceId::gr_complex, 3, 1), catalog(SpaceId::gr2_real, 3),
          catalog(SpaceId::so2n_un, 3), catalog(SpaceId::spn_un, 2)}) {
      CAPTURE(space_name(spec.id));
      for (const Mat& e : algebra_basis(spec.tag)) {
        Mat p = spec.p_project(e);
        Mat twice = bracket_m(spec.a.m, bracket_m(spec.a.m, p));
        CHECK((twice + p).cwiseAbs().maxCoeff() < 1e-12);
      }
    }
  }

  SUBCASE("component maps intertwine ad(a) with multiplication by i") {
    SymmetricSpaceSpec gr = catalog(SpaceId::gr_complex, 3, 1);
    Mat q(1, 2);
    q << Complex(dist(gen), dist(gen)), Complex(dist(gen), dist(gen));
    Mat adq = gr_q_extract(gr, bracket_m(gr.a.m, gr_q_embed(gr, q)));
    CHECK((adq - Complex(0, 1) * q).cwiseAbs().maxCoeff() < 1e-13);

    SymmetricSpaceSpec g2 = catalog(SpaceId::gr2_real, 3);
    Eigen::VectorXd X(3), Y(3);
    for (int i = 0; i < 3; ++i) {
      X(i) = dist(gen);
      Y(i) = dist(gen);
    }
    auto [Xa, Ya] = gr2_extract(g2, bracket_m(g2.a.m, gr2_embed(g2, X, Y)));
    CHECK((Xa + Y).cwiseAbs().maxCoeff() < 1e-13);  // i(X+iY) = -Y + iX
    CHECK((Ya - X).cwiseAbs().maxCoeff() < 1e-13);

    SymmetricSpaceSpec so = catalog(SpaceId::so2n_un, 3);
    Eigen::MatrixXd Xs = Eigen::MatrixXd::Zero(3, 3), Ys = Eigen::MatrixXd::Zero(3, 3);
    Xs(0, 1) = dist(gen);
    Xs(1, 0) = -Xs(0, 1);
    Ys(1, 2) = dist(gen);
    Ys(2, 1) = -Ys(1, 2);
    auto [Xb, Yb] = so2n_extract(so, bracket_m(so.a.m, so2n_embed(so, Xs, Ys)));
    CHECK((Xb + Ys).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((Yb - Xs).cwiseAbs().maxCoeff() < 1e-13);

    SymmetricSpaceSpec sp = catalog(SpaceId::spn_un, 2);
    Eigen::MatrixXd Xp(2, 2), Yp(2, 2);
    Xp << dist(gen), 0.3, 0.3, dist(gen);
    Yp << dist(gen), -0.7, -0.7, dist(gen);
    auto [Xc, Yc] = spn_extract(sp, bracket_m(sp.a.m, spn_embed(sp, Xp, Yp)));
    CHECK((Xc + Yp).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((Yc - Xp).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("component systems match the abstract (a,2)-flow through the maps") {
  LineGrid g{20.0, 512};
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> cdist(-3.0, 3.0);
  std::uniform_real_distribution<double> wdist(1.5, 2.5);

  SUBCASE("MNLS on Gr(1, C^3), flow-matched convention") {
    SymmetricSpaceSpec spec = catalog(SpaceId::gr_complex, 3, 1);
    std::vector<Mat> q(g.N);
    const double c1 = cdist(gen), c2 = cdist(gen), w1 = wdist(gen), w2 = wdist(gen);
    for (int i = 0; i < g.N; ++i) {
      Mat qi(1, 2);
      const double x = g.x(i);
      qi << Complex(0.5 * cbump(x, c1, w1), 0.2 * cbump(x, c2, w2)),
          Complex(-0.3 * cbump(x, c2, w2), 0.4 * cbump(x, c1, w1));
      q[i] = qi;
    }
    Field u(g, spec.tag, DecayClass::decaying);
    for (int i = 0; i < g.N; ++i) u.values[i] = gr_q_embed(spec, q[i]);
    Field abstract = hermitian_a2_rhs(spec, u);
    std::vector<Mat> comp = mnls_rhs(g, q);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i)
      worst = std::max(worst,
                       (gr_q_extract(spec, abstract.values[i]) - comp[i]).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-10);

    // the literal-convention right-hand side differs by the factor i
    std::vector<Mat> lit = mnls_rhs(g, q, MnlsConvention::literal);
    CHECK((Complex(0, 1) * lit[g.N / 2] - comp[g.N / 2]).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("Gr(2, R^5) system") {
    SymmetricSpaceSpec spec = catalog(SpaceId::gr2_real, 3);
    std::vector<Eigen::VectorXd> X(g.N), Y(g.N);
    for (int i = 0; i < g.N; ++i) {
      const double x = g.x(i);
      Eigen::VectorXd xi(3), yi(3);
      xi << 0.4 * cbump(x, -1.0, 2.0), -0.2 * cbump(x, 0.5, 1.8), 0.3 * cbump(x, 1.5, 2.2);
      yi << 0.25 * cbump(x, 0.0, 2.1), 0.35 * cbump(x, -2.0, 1.9), -0.15 * cbump(x, 2.0, 2.4);
      X[i] = xi;
      Y[i] = yi;
    }
    Field u(g, spec.tag, DecayClass::decaying);
    for (int i = 0; i < g.N; ++i) u.values[i] = gr2_embed(spec, X[i], Y[i]);
    Field abstract = hermitian_a2_rhs(spec, u);
    auto [Xr, Yr] = gr2_rhs(g, X, Y);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i) {
      auto [Xa, Ya] = gr2_extract(spec, abstract.values[i]);
      worst = std::max(worst, (Xa - Xr[i]).cwiseAbs().maxCoeff());
      worst = std::max(worst, (Ya - Yr[i]).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-10);
  }

  SUBCASE("SO(6)/U(3) system") {
    SymmetricSpaceSpec spec = catalog(SpaceId::so2n_un, 3);
    std::vector<Eigen::MatrixXd> X(g.N), Y(g.N);
    for (int i = 0; i < g.N; ++i) {
      const double x = g.x(i);
      Eigen::MatrixXd xs = Eigen::MatrixXd::Zero(3, 3), ys = Eigen::MatrixXd::Zero(3, 3);
      xs(0, 1) = 0.4 * cbump(x, -0.5, 2.0);
      xs(0, 2) = -0.25 * cbump(x, 1.0, 1.8);
      xs(1, 2) = 0.3 * cbump(x, 0.0, 2.2);
      xs -= Eigen::MatrixXd(xs.transpose());
      ys(0, 1) = -0.2 * cbump(x, 0.7, 2.1);
      ys(0, 2) = 0.35 * cbump(x, -1.2, 1.9);
      ys(1, 2) = 0.15 * cbump(x, 2.0, 2.3);
      ys -= Eigen::MatrixXd(ys.transpose());
      X[i] = xs;
      Y[i] = ys;
    }
    Field u(g, spec.tag, DecayClass::decaying);
    for (int i = 0; i < g.N; ++i) u.values[i] = so2n_embed(spec, X[i], Y[i]);
    Field abstract = hermitian_a2_rhs(spec, u);
    auto [Xr, Yr] = so2n_rhs(g, X, Y);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i) {
      auto [Xa, Ya] = so2n_extract(spec, abstract.values[i]);
      worst = std::max(worst, (Xa - Xr[i]).cwiseAbs().maxCoeff());
      worst = std::max(worst, (Ya - Yr[i]).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-10);
  }

  SUBCASE("Sp(2)/U(2) system") {
    SymmetricSpaceSpec spec = catalog(SpaceId::spn_un, 2);
    std::vector<Eigen::MatrixXd> X(g.N), Y(g.N);
    for (int i = 0; i < g.N; ++i) {
      const double x = g.x(i);
      Eigen::MatrixXd xs(2, 2), ys(2, 2);
      xs << 0.4 * cbump(x, -0.6, 2.0), 0.2 * cbump(x, 0.8, 1.9),
          0.2 * cbump(x, 0.8, 1.9), -0.3 * cbump(x, 1.4, 2.2);
      ys << -0.25 * cbump(x, 0.0, 2.1), 0.3 * cbump(x, -1.5, 2.0),
          0.3 * cbump(x, -1.5, 2.0), 0.15 * cbump(x, 1.9, 2.4);
      X[i] = xs;
      Y[i] = ys;
    }
    Field u(g, spec.tag, DecayClass::decaying);
    for (int i = 0; i < g.N; ++i) u.values[i] = spn_embed(spec, X[i], Y[i]);
    Field abstract = hermitian_a2_rhs(spec, u);
    auto [Xr, Yr] = spn_rhs(g, X, Y);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i) {
      auto [Xa, Ya] = spn_extract(spec, abstract.values[i]);
      worst = std::max(worst, (Xa - Xr[i]).cwiseAbs().maxCoeff());
      worst = std::max(worst, (Ya - Yr[i]).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-10);
  }

  SUBCASE("hermitian closed form equals the recursion on Gr(1, C^2)") {
    SymmetricSpaceSpec spec = catalog(SpaceId::gr_complex, 2, 1);
    HierarchyContext ctx = make_context(spec.a, 2);
    Field u = fixtures::su2_sech(g, 0.5);
    Field rec = flow_rhs(ctx, u);
    // the direct second-derivative stencil differs from the recursion's
    // repeated first derivative at O(h^4)
    CHECK(sup_distance(hermitian_a2_rhs(spec, u), rec) < 2e-4);
    // with matching stencil composition the identity is tight
    Field uxx = derivative(derivative(u, 1), 1);
    Field closed(g, spec.tag, DecayClass::free_form);
    for (int i = 0; i < g.N; ++i) {
      const Mat& v = u.values[i];
      closed.values[i] = bracket_m(spec.a.m, uxx.values[i]) -
                         0.5 * bracket_m(v, bracket_m(v, bracket_m(spec.a.m, v)));
    }
    CHECK(sup_distance(closed, rec) < 2e-5);  // quadrature of the cubic term at N = 512
  }
}

TEST_CASE("vmKdV") {
  LineGrid g{20.0, 512};

  SUBCASE("n = 2 specializes to the classical mKdV") {
    std::vector<Eigen::VectorXd> u(g.N);
    for (int i = 0; i < g.N; ++i) {
      Eigen::VectorXd v(1);
      v << 0.6 * cbump(g.x(i), 0.0, 1.7);
      u[i] = v;
    }
    std::vector<Eigen::VectorXd> rhs = vmkdv_rhs(g, u);
    std::vector<Eigen::VectorXd> ux = apply_derivative(g, u, 1);
    std::vector<Eigen::VectorXd> uxxx = apply_derivative(g, u, 3);
    for (int i = 0; i < g.N; i += 41) {
      const double expected = -(uxxx[i](0) + 1.5 * u[i](0) * u[i](0) * ux[i](0));
      CHECK(rhs[i](0) == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  SUBCASE("the (a,3)-flow of the S^3 restriction is the vmKdV") {
    SymmetricSpaceSpec spec = catalog(SpaceId::sphere, 3);
    HierarchyContext ctx = make_context(spec.a, 3);
    std::vector<Eigen::VectorXd> uc(g.N);
    Field u(g, spec.tag, DecayClass::decaying);
    for (int i = 0; i < g.N; ++i) {
      Eigen::VectorXd v(2);
      const double x = g.x(i);
      v << 0.3 / std::cosh(x), -0.2 / std::cosh(x - 0.8);
      uc[i] = v;
      u.values[i] = sn_k_embed(spec, v);
    }
    Field abstract = flow_rhs(ctx, u);
    std::vector<Eigen::VectorXd> comp = vmkdv_rhs(g, uc);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i)
      worst = std::max(worst, (sn_k_extract(spec, abstract.values[i]) - comp[i])
                                  .cwiseAbs()
                                  .maxCoeff());
    CHECK(worst < 5e-4);  // stencil-route difference at N = 512; acceptance pins N = 1024
  }
}

TEST_CASE("odd flows preserve K, even flows do not") {
  SymmetricSpaceSpec spec = catalog(SpaceId::sphere, 3);

  SUBCASE("j = 1") {
    LineGrid g{10.0, 128};
    Field u0(g, spec.tag, DecayClass::decaying);
    for (int i = 0; i < g.N; ++i) {
      Eigen::VectorXd v(2);
      v << 0.4 * cbump(g.x(i), 0.0, 1.5), -0.3 * cbump(g.x(i), 0.6, 1.8);
      u0.values[i] = sn_k_embed(spec, v);
    }
    CHECK(odd_flow_invariance(spec, u0, 1, 0.4) < 1e-8);
  }

  SUBCASE("j = 3 on a coarse grid") {
    LineGrid g{12.0, 116};
    Field u0(g, spec.tag, DecayClass::decaying);
    for (int i = 0; i < g.N; ++i) {
      Eigen::VectorXd v(2);
      // wide bumps keep the dispersive radiation of the third-order flow
      // inside the window
      v << 0.3 * cbump(g.x(i), 0.0, 2.2), 0.2 * cbump(g.x(i), -0.5, 2.5);
      u0.values[i] = sn_k_embed(spec, v);
    }
    CHECK(odd_flow_invariance(spec, u0, 3, 0.4) < 1e-6);
  }

  SUBCASE("j = 2 is the negative control") {
    LineGrid g{10.0, 128};
    Field u0(g, spec.tag, DecayClass::decaying);
    for (int i = 0; i < g.N; ++i) {
      Eigen::VectorXd v(2);
      v << 0.5 * cbump(g.x(i), 0.0, 1.5), -0.4 * cbump(g.x(i), 0.6, 1.8);
      u0.values[i] = sn_k_embed(spec, v);
    }
    CHECK(odd_flow_invariance(spec, u0, 2, 0.2) > 1e-2);
  }

  SUBCASE("P-valued initial data is rejected") {
    LineGrid g{10.0, 128};
    Field bad = constant_field(g, spec.a);
    CHECK_THROWS_AS((void)odd_flow_invariance(spec, bad, 1, 0.1), DomainError);
  }
}

TEST_CASE("sphere curve flow and HFM") {
  SUBCASE("great circle: rhs = -gamma_x / 2") {
    LineGrid g{6.0, 512};
    std::vector<Eigen::VectorXd> gamma(g.N);
    for (int i = 0; i < g.N; ++i) {
      Eigen::VectorXd v(3);
      v << std::cos(g.x(i)), std::sin(g.x(i)), 0.0;
      gamma[i] = v;
    }
    std::vector<Eigen::VectorXd> rhs = sphere_curve_rhs(g, gamma);
    std::vector<Eigen::VectorXd> gx = apply_derivative(g, gamma, 1);
    double worst = 0.0, tangency = 0.0;
    for (int i = 0; i < g.N; ++i) {
      worst = std::max(worst, (rhs[i] + 0.5 * gx[i]).cwiseAbs().maxCoeff());
      tangency = std::max(tangency, std::abs(rhs[i].dot(gamma[i])));
    }
    CHECK(worst < 1e-6);
    CHECK(tangency < 1e-6);
  }

  SUBCASE("constant curve has zero HFM velocity; off-sphere input is rejected") {
    LineGrid g{6.0, 128};
    std::vector<Eigen::VectorXd> flat(g.N, Eigen::Vector3d(0, 0, 1));
    std::vector<Eigen::VectorXd> rhs = hfm_rhs(g, flat);
    for (int i = 0; i < g.N; i += 32) CHECK(rhs[i].norm() < 1e-14);
    std::vector<Eigen::VectorXd> off(g.N, Eigen::Vector3d(0, 0, 1.5));
    CHECK_THROWS_AS((void)hfm_rhs(g, off), DomainError);
  }

  SUBCASE("R^3 identification carries brackets to cross products") {
    std::mt19937 gen(23);
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int rep = 0; rep < 10; ++rep) {
      Eigen::Vector3d x(dist(gen), dist(gen), dist(gen));
      Eigen::Vector3d y(dist(gen), dist(gen), dist(gen));
      Mat br = bracket_m(r3_to_su2(x), r3_to_su2(y));
      CHECK((su2_to_r3(br) - x.cross(y)).cwiseAbs().maxCoeff() < 1e-13);
      CHECK((r3_to_su2(su2_to_r3(r3_to_su2(x))) - r3_to_su2(x)).cwiseAbs().maxCoeff() <
            1e-13);
    }
    // e3 maps to the su(2) base point
    CHECK((r3_to_su2(Eigen::Vector3d(0, 0, 1)) - fixtures::su2_a().m).cwiseAbs().maxCoeff() <
          1e-15);
  }

  SUBCASE("schrodinger_rhs pushed to R^3 is gamma x gamma_xx") {
    LineGrid g{20.0, 384};
    // smooth unit-sphere curve pinned at e3
    std::vector<Eigen::VectorXd> gvec(g.N);
    Curve c;
    c.base = fixtures::su2_a();
    c.field = Field(g, c.base.tag, DecayClass::orbit_valued);
    for (int i = 0; i < g.N; ++i) {
      const double x = g.x(i);
      const double th = 0.8 * cbump(x, 0.0, 2.0);
      const double ph = 1.3 * cbump(x, 1.0, 2.5);
      Eigen::Vector3d v(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                        std::cos(th));
      gvec[i] = v;
      c.field.values[i] = r3_to_su2(v);
    }
    Field schro = schrodinger_rhs(c);
    std::vector<Eigen::VectorXd> hfm = hfm_rhs(g, gvec);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i)
      worst = std::max(worst, (su2_to_r3(schro.values[i]) - hfm[i]).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-12);  // algebraic identity, same stencil both sides
  }

  SUBCASE("sphere curve flow matches the matrix (a,3) curve flow on S^2") {
    SymmetricSpaceSpec spec = catalog(SpaceId::sphere, 3);
    HierarchyContext ctx = make_context(spec.a, 3);
    LineGrid g{20.0, 512};
    Field u(g, spec.tag, DecayClass::decaying);
    for (int i = 0; i < g.N; ++i) {
      Eigen::VectorXd v(2);
      v << 0.3 * cbump(g.x(i), 0.0, 1.8), -0.25 * cbump(g.x(i), 0.7, 2.1);
      u.values[i] = sn_k_embed(spec, v);
    }
    DevelopedPair pair = undevelop(ctx, u);
    Field matrix_rhs = curve_flow_rhs(ctx, pair, false);
    std::vector<Eigen::VectorXd> gvec(g.N);
    for (int i = 0; i < g.N; ++i) gvec[i] = sn_p_extract(spec, pair.gamma.field.values[i]);
    std::vector<Eigen::VectorXd> sphere = sphere_curve_rhs(g, gvec);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i)
      worst = std::max(
          worst, (sn_p_extract(spec, matrix_rhs.values[i]) - sphere[i]).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-3);  // N = 512; the acceptance bound is at N = 1024
  }
}
