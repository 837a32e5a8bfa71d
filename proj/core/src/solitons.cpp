#include "orbitflow/solitons.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <memory>

namespace orbitflow {

void check_datum(const AlgebraTag& tag, const BacklundDatum& d) {
  if (tag.family != Family::su && tag.family != Family::u)
    throw DomainError("backlund: only su(n)/u(n) reality is supported");
  const int n = tag.matrix_dim();
  if (std::abs(d.z.imag()) < 1e-12)
    throw DomainError("backlund: pole must have nonzero imaginary part");
  if (d.V.rows() != n || d.V.cols() < 1 || d.V.cols() >= n)
    throw DomainError("backlund: V must be a proper nonzero subspace of C^n");
  Mat gram = d.V.adjoint() * d.V;
  if ((gram - Mat::Identity(d.V.cols(), d.V.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("backlund: V columns must be orthonormal");
}

Mat hermitian_projector(const Mat& V) { return V * V.adjoint(); }

Mat simple_factor(int n, const BacklundDatum& d, Complex lambda) {
  if (std::abs(lambda - std::conj(d.z)) < 1e-6)
    throw NumericalError("simple_factor: evaluation at the pole lambda = conj(z)");
  Mat pi = hermitian_projector(d.V);
  Mat pperp = Mat::Identity(n, n) - pi;
  return Mat::Identity(n, n) + ((std::conj(d.z) - d.z) / (lambda - std::conj(d.z))) * pperp;
}

SolitonSolution vacuum_solution(const HierarchyContext& ctx) {
  SolitonSolution sol;
  sol.tag = ctx.tag();
  const int n = ctx.tag().matrix_dim();
  Mat a = ctx.a().m;
  Mat b = ctx.b.m;
  const int j = ctx.j;
  sol.u = [n](double, double) { return Mat(Mat::Zero(n, n)); };
  sol.frame = [a, b, j](double x, double t, Complex lambda) {
    return expm_general(a * (lambda * x) + b * (std::pow(lambda, j) * t));
  };
  return sol;
}

Mat vacuum_frame_m(const HierarchyContext& ctx, Complex lambda, double x, double t) {
  return expm_general(ctx.a().m * (lambda * x) + ctx.b.m * (std::pow(lambda, ctx.j) * t));
}

GroupElement vacuum_frame(const HierarchyContext& ctx, double lambda, double x, double t) {
  GroupElement g{ctx.tag(), vacuum_frame_m(ctx, Complex(lambda, 0.0), x, t)};
  check_group(g, 1e-8);
  return g;
}

namespace {

Mat orthonormal_columns(const Mat& W) {
  Eigen::JacobiSVD<Mat> svd(W, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  if (smin < 1e-10)
    throw NumericalError("backlund: transported subspace collapsed, sigma_min = " +
                         std::to_string(smin));
  return svd.matrixU();
}

// finite-difference probe that `frame` trivializes the connection of `u`
void probe_frame(const HierarchyContext& ctx, const SolitonSolution& sol) {
  const double hx = 1e-5;
  const int n = ctx.tag().matrix_dim();
  const Complex lams[2] = {Complex(0.3, 0.0), Complex(0.0, 0.4)};
  const double pts[3][2] = {{0.0, 0.0}, {1.3, 0.2}, {-2.1, -0.35}};
  for (const Complex& lam : lams) {
    for (const auto& p : pts) {
      Mat Ep = sol.frame(p[0] + hx, p[1], lam);
      Mat Em = sol.frame(p[0] - hx, p[1], lam);
      Mat E = sol.frame(p[0], p[1], lam);
      Mat dE = (Ep - Em) / (2 * hx);
      Mat lhs = E.inverse() * dE;
      Mat rhs = lam * ctx.a().m + sol.u(p[0], p[1]);
      if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-3 * std::max(1.0, rhs.cwiseAbs().maxCoeff()))
        throw ConsistencyError("backlund: input frame does not trivialize the input "
                               "connection (E^-1 E_x != a lambda + u)");
    }
  }
  (void)n;
}

}  // namespace

SolitonSolution backlund(const HierarchyContext& ctx, const SolitonSolution& sol,
                         const BacklundDatum& d, bool check_frame) {
  check_datum(ctx.tag(), d);
  if (check_frame) probe_frame(ctx, sol);
  const int n = ctx.tag().matrix_dim();
  const Complex z = d.z;
  Mat a = ctx.a().m;

  auto inner_frame = sol.frame;
  auto inner_u = sol.u;
  Mat V = d.V;

  auto pi_tilde = [inner_frame, V, z](double x, double t) {
    Mat W = inner_frame(x, t, z).adjoint() * V;
    return hermitian_projector(orthonormal_columns(W));
  };

  SolitonSolution out;
  out.tag = ctx.tag();
  out.u = [inner_u, pi_tilde, a, z](double x, double t) {
    Mat pt = pi_tilde(x, t);
    return Mat(inner_u(x, t) + (z - std::conj(z)) * bracket_m(pt, a));
  };
  BacklundDatum fixed = d;
  out.frame = [inner_frame, pi_tilde, fixed, z, n](double x, double t, Complex lambda) {
    if (std::abs(lambda - z) < 1e-6)
      throw NumericalError("backlund frame: evaluation at the pole lambda = z");
    Mat left = simple_factor(n, fixed, lambda);
    Mat pt = pi_tilde(x, t);
    Mat ptperp = Mat::Identity(n, n) - pt;
    // f_{z, pi_tilde}(lambda)^-1 = I + (z - conj z)/(lambda - z) pi_tilde_perp
    Mat right_inv = Mat::Identity(n, n) + ((z - std::conj(z)) / (lambda - z)) * ptperp;
    return Mat(left * inner_frame(x, t, lambda) * right_inv);
  };
  return out;
}

SolitonSolution n_soliton(const HierarchyContext& ctx, const std::vector<BacklundDatum>& data) {
  for (size_t i = 0; i < data.size(); ++i)
    for (size_t k = i + 1; k < data.size(); ++k)
      if (std::abs(data[i].z - data[k].z) < 1e-12)
        throw DomainError("n_soliton: poles must be pairwise distinct");
  SolitonSolution sol = vacuum_solution(ctx);
  for (const BacklundDatum& d : data) sol = backlund(ctx, sol, d, false);
  return sol;
}

Field sample_solution(const SolitonSolution& sol, const LineGrid& g, double t) {
  Field out(g, sol.tag, DecayClass::free_form);
  for (int i = 0; i < g.N; ++i) out.values[i] = sol.u(g.x(i), t);
  if (norm_alg(out.values.front()) < tol::decay && norm_alg(out.values.back()) < tol::decay)
    out.decay = DecayClass::decaying;
  return out;
}

SolitonCurveFamily soliton_to_curve(const HierarchyContext& ctx,
                                    const std::function<Mat(double, double)>& k_frame,
                                    const LineGrid& g, const std::vector<double>& times) {
  if (times.empty()) throw DomainError("soliton_to_curve: need at least one time");
  SolitonCurveFamily fam;
  fam.t = times;

  std::vector<std::vector<Mat>> slices(times.size());
  for (size_t s = 0; s < times.size(); ++s) {
    slices[s].resize(g.N);
    for (int i = 0; i < g.N; ++i) slices[s][i] = k_frame(g.x(i), times[s]);
  }

  BoundaryLimit lim = limit_at_left(slices[0], 1e-4);
  if (!lim.flat)
    throw NumericalError("soliton_to_curve: frame tail is not flat at -L (deviation " +
                         std::to_string(lim.tail_deviation) + "); increase grid.L");
  fam.c = project_to_group(ctx.tag(), lim.value);

  for (size_t s = 0; s < times.size(); ++s) {
    BoundaryLimit ls = limit_at_left(slices[s], 1e-4);
    fam.c_drift = std::max(fam.c_drift, (ls.value - fam.c).cwiseAbs().maxCoeff());
    Curve c;
    c.base = ctx.a();
    c.field = Field(g, ctx.tag(), DecayClass::orbit_valued);
    Mat cinv = fam.c.adjoint();
    for (int i = 0; i < g.N; ++i) {
      Mat k = slices[s][i];
      c.field.values[i] = cinv * k * ctx.a().m * k.inverse() * fam.c;
    }
    fam.gamma.push_back(std::move(c));
  }
  return fam;
}

// -- finite type -----------------------------------------------------------------

/// linear-combination hook for the generic RK4 stepper
inline FiniteTypeState axpy_state(const FiniteTypeState& a, double s, const FiniteTypeState& b) {
  FiniteTypeState out = a;
  for (size_t i = 0; i < out.xi.size(); ++i) out.xi[i] += s * b.xi[i];
  return out;
}

namespace {

void check_ft_args(const HierarchyContext& ctx, int k, const FiniteTypeState& init) {
  if (k < 1) throw DomainError("finite_type: k must be >= 1");
  if (static_cast<int>(init.xi.size()) != k)
    throw StructuralError("finite_type: init must carry xi_1..xi_k");
  const int d = ctx.tag().matrix_dim();
  for (const Mat& m : init.xi)
    if (m.rows() != d || m.cols() != d) throw StructuralError("finite_type: shape mismatch");
  const double p0 = norm_alg(ctx.cd.pi0(init.xi[0]));
  if (p0 > tol::solve * std::max(1.0, norm_alg(init.xi[0])))
    throw DomainError("finite_type: xi_1 must lie in U_a^perp");
  if (ctx.j == 1) return;
  if (ctx.j == 2) {
    if (norm_alg(ctx.b.m - ctx.a().m) > tol::alg * std::max(1.0, norm_alg(ctx.a().m)))
      throw DomainError("finite_type: j = 2 is supported for b = a only");
    return;
  }
  throw DomainError("finite_type: supported flows are j = 1 and j = 2 (b = a)");
}

// t-equation coefficients from the generating recursion that matches the
// x-equation's bracket orientation (Y_x = [a lambda + u, Y]).
std::vector<Mat> ft_q_coeffs(const HierarchyContext& ctx, const FiniteTypeState& s) {
  std::vector<Mat> q(ctx.j + 1);
  q[0] = ctx.b.m;
  const Mat& u = s.xi[0];
  if (ctx.j >= 1) q[1] = bracket_m(ctx.b.m, ctx.cd.solve_ad_a(u));
  if (ctx.j == 2) {
    const int d = ctx.tag().matrix_dim();
    Mat ux = s.xi.size() >= 2 ? bracket_m(ctx.a().m, s.xi[1]) : Mat(Mat::Zero(d, d));
    Mat au = ctx.cd.solve_ad_a(u);
    q[2] = ctx.cd.solve_ad_a(ux) + 0.5 * ctx.cd.pi0(bracket_m(u, au));
  }
  return q;
}

bool finite_ft(const FiniteTypeState& s) {
  for (const Mat& m : s.xi)
    if (!m.allFinite()) return false;
  return true;
}

}  // namespace

FiniteTypeState finite_type_x_rhs(const HierarchyContext& ctx, const FiniteTypeState& s) {
  const int k = static_cast<int>(s.xi.size());
  const int d = ctx.tag().matrix_dim();
  FiniteTypeState r;
  r.xi.resize(k);
  for (int i = 1; i <= k; ++i) {
    Mat nexts = (i + 1 <= k) ? s.xi[i] : Mat(Mat::Zero(d, d));
    r.xi[i - 1] = bracket_m(ctx.a().m, nexts) + bracket_m(s.xi[0], s.xi[i - 1]);
  }
  return r;
}

FiniteTypeState finite_type_t_rhs(const HierarchyContext& ctx, const FiniteTypeState& s) {
  const int k = static_cast<int>(s.xi.size());
  const int d = ctx.tag().matrix_dim();
  std::vector<Mat> q = ft_q_coeffs(ctx, s);
  auto xi_at = [&](int l) -> Mat {
    if (l == 0) return ctx.a().m;
    if (l >= 1 && l <= k) return s.xi[l - 1];
    return Mat::Zero(d, d);
  };
  FiniteTypeState r;
  r.xi.resize(k);
  for (int i = 1; i <= k; ++i) {
    Mat acc = Mat::Zero(d, d);
    for (int m = 0; m <= ctx.j; ++m) acc += bracket_m(q[m], xi_at(i + ctx.j - m));
    r.xi[i - 1] = std::move(acc);
  }
  return r;
}

namespace {

FiniteTypeState integrate_ft(FiniteTypeState s, double span,
                             double step,
                             const std::function<FiniteTypeState(const FiniteTypeState&)>& rhs) {
  if (span == 0.0) return s;
  const long n = std::max<long>(1, std::lround(std::ceil(std::abs(span) / step)));
  const double dt = span / double(n);
  for (long i = 0; i < n; ++i) {
    s = rk4_step_state(rhs, s, dt);
    if (!finite_ft(s)) throw BlowUpError("finite_type: non-finite state", i);
  }
  return s;
}

}  // namespace

FiniteTypeRun finite_type_solve(const HierarchyContext& ctx, int k, const FiniteTypeState& init,
                                const LineGrid& grid, double T, int snapshots, double dt_t) {
  check_ft_args(ctx, k, init);
  check_grid(grid);
  if (snapshots < 2) snapshots = 2;
  const double h = grid.h();

  // anchor line: the sample closest to x = 0
  int i0 = 0;
  for (int i = 1; i < grid.N; ++i)
    if (std::abs(grid.x(i)) < std::abs(grid.x(i0))) i0 = i;

  auto xrhs = [&](const FiniteTypeState& s) { return finite_type_x_rhs(ctx, s); };
  auto trhs = [&](const FiniteTypeState& s) { return finite_type_t_rhs(ctx, s); };

  // init is given at x = 0; carry it to the anchor sample
  FiniteTypeState anchor0 = integrate_ft(init, grid.x(i0), h / 4.0, xrhs);

  FiniteTypeRun run;
  run.grid = grid;

  std::vector<FiniteTypeState> anchor_states;
  for (int sidx = 0; sidx < snapshots; ++sidx) {
    const double t = T * double(sidx) / (snapshots - 1);
    run.t.push_back(t);
    anchor_states.push_back(integrate_ft(anchor0, t, dt_t, trhs));
  }

  // x sweeps, both directions from the anchor
  for (int sidx = 0; sidx < snapshots; ++sidx) {
    std::vector<std::vector<Mat>> levels(k, std::vector<Mat>(grid.N));
    auto store = [&](int i, const FiniteTypeState& s) {
      for (int l = 0; l < k; ++l) levels[l][i] = s.xi[l];
    };
    store(i0, anchor_states[sidx]);
    FiniteTypeState s = anchor_states[sidx];
    for (int i = i0; i + 1 < grid.N; ++i) {
      s = integrate_ft(s, h, h / 4.0, xrhs);
      store(i + 1, s);
    }
    s = anchor_states[sidx];
    for (int i = i0; i - 1 >= 0; --i) {
      s = integrate_ft(s, -h, h / 4.0, xrhs);
      store(i - 1, s);
    }
    run.xi.push_back(std::move(levels));
  }

  // mixed-partial probes: x-sweep at t=0 then t-sweep, against the stored states
  {
    const int probe_is[3] = {i0 / 2, i0 + (grid.N - 1 - i0) / 2, grid.N - 1};
    const int probe_s = snapshots - 1;
    for (int pi : probe_is) {
      FiniteTypeState s0 = anchor_states[0];
      s0 = integrate_ft(s0, grid.x(pi) - grid.x(i0), h / 4.0, xrhs);
      FiniteTypeState sT = integrate_ft(s0, run.t[probe_s], dt_t, trhs);
      for (int l = 0; l < k; ++l)
        run.compat_residual = std::max(
            run.compat_residual, norm_alg(sT.xi[l] - run.xi[probe_s][l][pi]));
    }
  }

  // flow residual of u = xi_1. The system's bracket orientation encodes the
  // (b,j)-flow up to the reflection (x,t) -> (-x,-t); on its own slices u
  // satisfies u_t = (Q_j)_x + [Q_j, u] with the matching-orientation Q_j.
  // u_t comes from the t-equation, the Q_j route from spatial stencils.
  {
    double worst = 0.0;
    for (int sidx = 0; sidx < snapshots; ++sidx) {
      std::vector<Mat> u = run.xi[sidx][0];
      std::vector<Mat> ut(grid.N);
      for (int i = 0; i < grid.N; ++i) {
        FiniteTypeState s;
        s.xi.resize(k);
        for (int l = 0; l < k; ++l) s.xi[l] = run.xi[sidx][l][i];
        ut[i] = finite_type_t_rhs(ctx, s).xi[0];
      }
      std::vector<Mat> Qj(grid.N);
      if (ctx.j == 1) {
        for (int i = 0; i < grid.N; ++i) Qj[i] = bracket_m(ctx.b.m, ctx.cd.solve_ad_a(u[i]));
      } else {
        std::vector<Mat> ux = apply_derivative(grid, u, 1);
        for (int i = 0; i < grid.N; ++i)
          Qj[i] = ctx.cd.solve_ad_a(ux[i]) +
                  0.5 * ctx.cd.pi0(bracket_m(u[i], ctx.cd.solve_ad_a(u[i])));
      }
      std::vector<Mat> Qjx = apply_derivative(grid, Qj, 1);
      for (int i = 0; i < grid.N; ++i) {
        Mat res = ut[i] - Qjx[i] - bracket_m(Qj[i], u[i]);
        worst = std::max(worst, norm_alg(res));
      }
    }
    run.flow_residual = worst;
  }

  if (run.compat_residual > 1e-4)
    throw ConsistencyError("finite_type: mixed-partial residual " +
                           std::to_string(run.compat_residual));
  return run;
}

}  // namespace orbitflow
