#include "orbitflow/symspace.hpp"

#include <cmath>

namespace orbitflow {

std::string space_name(SpaceId id) {
  switch (id) {
    case SpaceId::gr_complex: return "Gr(k,C^n)";
    case SpaceId::sphere: return "S^n";
    case SpaceId::gr2_real: return "Gr(2,R^{n+2})";
    case SpaceId::so2n_un: return "SO(2n)/U(n)";
    case SpaceId::spn_un: return "Sp(n)/U(n)";
  }
  return "?";
}

SymmetricSpaceSpec catalog(SpaceId id, int n, int k) {
  SymmetricSpaceSpec s;
  s.id = id;
  s.n = n;
  s.k = k;
  const Complex I(0, 1);
  switch (id) {
    case SpaceId::gr_complex: {
      if (n < 2 || k < 1 || k >= n) throw DomainError("catalog: Gr(k,C^n) needs 1 <= k < n");
      // traceless exactly when n = 2k
      s.tag = AlgebraTag{n == 2 * k ? Family::su : Family::u, n};
      Mat a = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i) a(i, i) = (i < k ? I : -I) * 0.5;
      s.a = {s.tag, a};
      Mat e = Mat::Zero(n, n);
      for (int i = 0; i < n; ++i) e(i, i) = (i < k ? 1.0 : -1.0);
      s.dsigma = [e](const Mat& X) { return Mat(e * X * e); };
      break;
    }
    case SpaceId::sphere: {
      if (n < 2) throw DomainError("catalog: S^n needs n >= 2");
      s.tag = AlgebraTag{Family::so, n + 1};
      Mat a = Mat::Zero(n + 1, n + 1);
      a(1, 0) = 1.0;
      a(0, 1) = -1.0;
      s.a = {s.tag, a};
      Eigen::VectorXcd d = Eigen::VectorXcd::Ones(n + 1);
      d(0) = -1.0;
      Mat e = d.asDiagonal();
      s.dsigma = [e](const Mat& X) { return Mat(e * X * e); };
      break;
    }
    case SpaceId::gr2_real: {
      if (n < 2) throw DomainError("catalog: Gr(2,R^{n+2}) needs n >= 2");
      s.tag = AlgebraTag{Family::so, n + 2};
      Mat a = Mat::Zero(n + 2, n + 2);
      a(1, 0) = 1.0;
      a(0, 1) = -1.0;
      s.a = {s.tag, a};
      Eigen::VectorXcd d = Eigen::VectorXcd::Ones(n + 2);
      d(0) = d(1) = -1.0;
      Mat e = d.asDiagonal();
      s.dsigma = [e](const Mat& X) { return Mat(e * X * e); };
      break;
    }
    case SpaceId::so2n_un: {
      if (n < 2) throw DomainError("catalog: SO(2n)/U(n) needs n >= 2");
      s.tag = AlgebraTag{Family::so, 2 * n};
      Mat J = Mat::Zero(2 * n, 2 * n);
      J.topRightCorner(n, n) = -Mat::Identity(n, n);
      J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
      s.a = {s.tag, 0.5 * J};
      s.dsigma = [J](const Mat& X) { return Mat(-J * X * J); };  // J X J^-1, J^-1 = -J
      break;
    }
    case SpaceId::spn_un: {
      if (n < 1) throw DomainError("catalog: Sp(n)/U(n) needs n >= 1");
      s.tag = AlgebraTag{Family::sp, n};
      Mat J = Mat::Zero(2 * n, 2 * n);
      J.topRightCorner(n, n) = -Mat::Identity(n, n);
      J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
      s.a = {s.tag, 0.5 * J};
      s.dsigma = [](const Mat& X) { return Mat(X.conjugate()); };
      break;
    }
  }
  check_algebra(s.a);
  return s;
}

double cartan_defect(const SymmetricSpaceSpec& spec) {
  const auto& basis = algebra_basis(spec.tag);
  double worst = 0.0;
  std::vector<Mat> kpart, ppart;
  for (const Mat& e : basis) {
    Mat ks = spec.k_project(e), ps = spec.p_project(e);
    // involution is an involutive algebra map
    worst = std::max(worst, (spec.dsigma(spec.dsigma(e)) - e).cwiseAbs().maxCoeff());
    worst = std::max(worst, (ks + ps - e).cwiseAbs().maxCoeff());
    if (norm_alg(ks) > 1e-12) kpart.push_back(ks);
    if (norm_alg(ps) > 1e-12) ppart.push_back(ps);
  }
  auto k_defect = [&](const Mat& m) { return norm_alg(spec.p_project(m)); };
  auto p_defect = [&](const Mat& m) { return norm_alg(spec.k_project(m)); };
  for (const Mat& x : kpart)
    for (const Mat& y : kpart) worst = std::max(worst, k_defect(bracket_m(x, y)));
  for (const Mat& x : kpart)
    for (const Mat& y : ppart) worst = std::max(worst, p_defect(bracket_m(x, y)));
  for (const Mat& x : ppart)
    for (const Mat& y : ppart) worst = std::max(worst, k_defect(bracket_m(x, y)));
  // the base point lies in P for the isotropy picture, in K for Hermitian entries
  return worst;
}

Field hermitian_a2_rhs(const SymmetricSpaceSpec& spec, const Field& u) {
  if (u.tag != spec.tag) throw StructuralError("hermitian_a2_rhs: tag mismatch");
  const Mat& a = spec.a.m;
  Field uxx = derivative(u, 2);
  Field out(u.grid, u.tag, DecayClass::free_form);
  for (int i = 0; i < u.size(); ++i) {
    const Mat& v = u.values[i];
    out.values[i] = bracket_m(a, uxx.values[i]) -
                    0.5 * bracket_m(v, bracket_m(v, bracket_m(a, v)));
  }
  return out;
}

// -- identifications -------------------------------------------------------------

Mat gr_q_extract(const SymmetricSpaceSpec& spec, const Mat& u) {
  return u.topRightCorner(spec.k, spec.n - spec.k);
}

Mat gr_q_embed(const SymmetricSpaceSpec& spec, const Mat& q) {
  if (q.rows() != spec.k || q.cols() != spec.n - spec.k)
    throw StructuralError("gr_q_embed: q must be k x (n-k)");
  Mat u = Mat::Zero(spec.n, spec.n);
  u.topRightCorner(spec.k, spec.n - spec.k) = q;
  u.bottomLeftCorner(spec.n - spec.k, spec.k) = -q.adjoint();
  return u;
}

Eigen::VectorXd sn_k_extract(const SymmetricSpaceSpec& spec, const Mat& u) {
  Eigen::VectorXd out(spec.n - 1);
  for (int m = 0; m < spec.n - 1; ++m) out(m) = u(m + 2, 1).real();
  return out;
}

Mat sn_k_embed(const SymmetricSpaceSpec& spec, const Eigen::VectorXd& u) {
  if (u.size() != spec.n - 1) throw StructuralError("sn_k_embed: wrong length");
  Mat m = Mat::Zero(spec.n + 1, spec.n + 1);
  for (int i = 0; i < spec.n - 1; ++i) {
    m(i + 2, 1) = u(i);
    m(1, i + 2) = -u(i);
  }
  return m;
}

Eigen::VectorXd sn_p_extract(const SymmetricSpaceSpec& spec, const Mat& y) {
  Eigen::VectorXd out(spec.n);
  for (int s = 0; s < spec.n; ++s) out(s) = y(s + 1, 0).real();
  return out;
}

Mat sn_p_embed(const SymmetricSpaceSpec& spec, const Eigen::VectorXd& v) {
  if (v.size() != spec.n) throw StructuralError("sn_p_embed: wrong length");
  Mat m = Mat::Zero(spec.n + 1, spec.n + 1);
  for (int s = 0; s < spec.n; ++s) {
    m(s + 1, 0) = v(s);
    m(0, s + 1) = -v(s);
  }
  return m;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gr2_extract(const SymmetricSpaceSpec& spec,
                                                        const Mat& u) {
  Eigen::VectorXd X(spec.n), Y(spec.n);
  for (int j = 0; j < spec.n; ++j) {
    X(j) = u(0, j + 2).real();
    Y(j) = u(1, j + 2).real();
  }
  return {X, Y};
}

Mat gr2_embed(const SymmetricSpaceSpec& spec, const Eigen::VectorXd& X,
              const Eigen::VectorXd& Y) {
  if (X.size() != spec.n || Y.size() != spec.n) throw StructuralError("gr2_embed: wrong length");
  Mat u = Mat::Zero(spec.n + 2, spec.n + 2);
  for (int j = 0; j < spec.n; ++j) {
    u(0, j + 2) = X(j);
    u(j + 2, 0) = -X(j);
    u(1, j + 2) = Y(j);
    u(j + 2, 1) = -Y(j);
  }
  return u;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> so2n_extract(const SymmetricSpaceSpec& spec,
                                                         const Mat& u) {
  const int n = spec.n;
  return {u.topLeftCorner(n, n).real(), u.topRightCorner(n, n).real()};
}

Mat so2n_embed(const SymmetricSpaceSpec& spec, const Eigen::MatrixXd& X,
               const Eigen::MatrixXd& Y) {
  const int n = spec.n;
  if (X.rows() != n || Y.rows() != n) throw StructuralError("so2n_embed: wrong shape");
  if ((X + X.transpose()).cwiseAbs().maxCoeff() > 1e-12 ||
      (Y + Y.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw StructuralError("so2n_embed: X and Y must be skew");
  Mat u = Mat::Zero(2 * n, 2 * n);
  u.topLeftCorner(n, n) = X.cast<Complex>();
  u.topRightCorner(n, n) = Y.cast<Complex>();
  u.bottomLeftCorner(n, n) = Y.cast<Complex>();
  u.bottomRightCorner(n, n) = -X.cast<Complex>();
  return u;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> spn_extract(const SymmetricSpaceSpec& spec,
                                                        const Mat& u) {
  const int n = spec.n;
  return {u.topLeftCorner(n, n).imag(), u.topRightCorner(n, n).imag()};
}

Mat spn_embed(const SymmetricSpaceSpec& spec, const Eigen::MatrixXd& X,
              const Eigen::MatrixXd& Y) {
  const int n = spec.n;
  if (X.rows() != n || Y.rows() != n) throw StructuralError("spn_embed: wrong shape");
  if ((X - X.transpose()).cwiseAbs().maxCoeff() > 1e-12 ||
      (Y - Y.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw StructuralError("spn_embed: X and Y must be symmetric");
  const Complex I(0, 1);
  Mat u = Mat::Zero(2 * n, 2 * n);
  u.topLeftCorner(n, n) = I * X.cast<Complex>();
  u.topRightCorner(n, n) = I * Y.cast<Complex>();
  u.bottomLeftCorner(n, n) = I * Y.cast<Complex>();
  u.bottomRightCorner(n, n) = -I * X.cast<Complex>();
  return u;
}

Mat r3_to_su2(const Eigen::Vector3d& v) {
  const Complex I(0, 1);
  Mat m(2, 2);
  // f1 = -i/2 sigma1, f2 = i/2 sigma2, f3 = i/2 sigma3; [f1,f2] = f3 cyclic
  m(0, 0) = I * 0.5 * v(2);
  m(1, 1) = -I * 0.5 * v(2);
  m(0, 1) = -I * 0.5 * v(0) + 0.5 * v(1);
  m(1, 0) = -I * 0.5 * v(0) - 0.5 * v(1);
  return m;
}

Eigen::Vector3d su2_to_r3(const Mat& m) {
  Eigen::Vector3d v;
  v(2) = (m(0, 0) * Complex(0, -2)).real();
  v(0) = (m(0, 1) * Complex(0, 1) + m(1, 0) * Complex(0, 1)).real();
  v(1) = (m(0, 1) - m(1, 0)).real();
  return v;
}

// -- component right-hand sides ---------------------------------------------------

std::vector<Mat> mnls_rhs(const LineGrid& g, const std::vector<Mat>& q, MnlsConvention conv) {
  std::vector<Mat> qxx = apply_derivative(g, q, 2);
  std::vector<Mat> out(q.size());
  const Complex factor = conv == MnlsConvention::flow_matched ? Complex(0, 1) : Complex(1, 0);
  for (size_t i = 0; i < q.size(); ++i)
    out[i] = factor * (qxx[i] + 2.0 * q[i] * q[i].adjoint() * q[i]);
  return out;
}

std::pair<std::vector<Eigen::VectorXd>, std::vector<Eigen::VectorXd>>
gr2_rhs(const LineGrid& g, const std::vector<Eigen::VectorXd>& X,
        const std::vector<Eigen::VectorXd>& Y) {
  std::vector<Eigen::VectorXd> Xxx = apply_derivative(g, X, 2);
  std::vector<Eigen::VectorXd> Yxx = apply_derivative(g, Y, 2);
  std::vector<Eigen::VectorXd> Xo(X.size()), Yo(Y.size());
  for (size_t i = 0; i < X.size(); ++i) {
    const double xx = X[i].dot(X[i]), xy = X[i].dot(Y[i]), yy = Y[i].dot(Y[i]);
    Xo[i] = -Yxx[i] + xy * X[i] - 0.5 * (3.0 * xx + yy) * Y[i];
    Yo[i] = Xxx[i] + 0.5 * (xx + 3.0 * yy) * X[i] - xy * Y[i];
  }
  return {Xo, Yo};
}

std::pair<std::vector<Eigen::MatrixXd>, std::vector<Eigen::MatrixXd>>
so2n_rhs(const LineGrid& g, const std::vector<Eigen::MatrixXd>& X,
         const std::vector<Eigen::MatrixXd>& Y) {
  std::vector<Eigen::MatrixXd> Xxx = apply_derivative(g, X, 2);
  std::vector<Eigen::MatrixXd> Yxx = apply_derivative(g, Y, 2);
  std::vector<Eigen::MatrixXd> Xo(X.size()), Yo(Y.size());
  for (size_t i = 0; i < X.size(); ++i) {
    const Eigen::MatrixXd &x = X[i], &y = Y[i];
    Eigen::MatrixXd xy = x * y - y * x;
    Xo[i] = -Yxx[i] + (x * xy - xy * x) + 2.0 * y * y * y + y * x * x + x * x * y;
    Yo[i] = Xxx[i] + (y * xy - xy * y) - 2.0 * x * x * x - x * y * y - y * y * x;
  }
  return {Xo, Yo};
}

std::pair<std::vector<Eigen::MatrixXd>, std::vector<Eigen::MatrixXd>>
spn_rhs(const LineGrid& g, const std::vector<Eigen::MatrixXd>& X,
        const std::vector<Eigen::MatrixXd>& Y) {
  std::vector<Eigen::MatrixXd> Xxx = apply_derivative(g, X, 2);
  std::vector<Eigen::MatrixXd> Yxx = apply_derivative(g, Y, 2);
  std::vector<Eigen::MatrixXd> Xo(X.size()), Yo(Y.size());
  for (size_t i = 0; i < X.size(); ++i) {
    const Eigen::MatrixXd &x = X[i], &y = Y[i];
    Eigen::MatrixXd xy = x * y - y * x;
    Xo[i] = -Yxx[i] - (x * xy - xy * x) - 2.0 * y * y * y - y * x * x - x * x * y;
    Yo[i] = Xxx[i] - (y * xy - xy * y) + 2.0 * x * x * x + x * y * y + y * y * x;
  }
  return {Xo, Yo};
}

std::vector<Eigen::VectorXd> vmkdv_rhs(const LineGrid& g,
                                       const std::vector<Eigen::VectorXd>& u) {
  std::vector<Eigen::VectorXd> ux = apply_derivative(g, u, 1);
  std::vector<Eigen::VectorXd> uxxx = apply_derivative(g, u, 3);
  std::vector<Eigen::VectorXd> out(u.size());
  for (size_t i = 0; i < u.size(); ++i)
    out[i] = -(uxxx[i] + 1.5 * u[i].squaredNorm() * ux[i]);
  return out;
}

std::vector<Eigen::VectorXd> sphere_curve_rhs(const LineGrid& g,
                                              const std::vector<Eigen::VectorXd>& gamma) {
  for (const auto& v : gamma)
    if (std::abs(v.norm() - 1.0) > 1e-6)
      throw DomainError("sphere_curve_rhs: samples must lie on the unit sphere");
  std::vector<Eigen::VectorXd> gx = apply_derivative(g, gamma, 1);
  std::vector<Eigen::VectorXd> gxx = apply_derivative(g, gamma, 2);
  std::vector<Eigen::VectorXd> gxxx = apply_derivative(g, gamma, 3);
  std::vector<Eigen::VectorXd> out(gamma.size());
  for (size_t i = 0; i < gamma.size(); ++i)
    out[i] = -(gxxx[i] + 3.0 * gx[i].dot(gxx[i]) * gamma[i] +
               1.5 * gx[i].squaredNorm() * gx[i]);
  return out;
}

std::vector<Eigen::VectorXd> hfm_rhs(const LineGrid& g,
                                     const std::vector<Eigen::VectorXd>& gamma) {
  for (const auto& v : gamma)
    if (v.size() != 3 || std::abs(v.norm() - 1.0) > 1e-6)
      throw DomainError("hfm_rhs: samples must lie on the unit sphere in R^3");
  std::vector<Eigen::VectorXd> gxx = apply_derivative(g, gamma, 2);
  std::vector<Eigen::VectorXd> out(gamma.size());
  for (size_t i = 0; i < gamma.size(); ++i) {
    Eigen::Vector3d a = gamma[i], b = gxx[i];
    out[i] = a.cross(b);
  }
  return out;
}

double odd_flow_invariance(const SymmetricSpaceSpec& spec, const Field& u0, int j, double T,
                           double dt, int snapshots) {
  double k_defect = 0.0;
  for (const Mat& v : u0.values)
    k_defect = std::max(k_defect, norm_alg(spec.p_project(v)));
  if (k_defect > tol::solve * std::max(1.0, u0.sup_norm()))
    throw DomainError("odd_flow_invariance: initial data must lie in K");
  HierarchyContext ctx(spec.a, spec.a, j);
  FlowTrajectory traj = integrate_flow(ctx, u0, T, dt, snapshots);
  double drift = 0.0;
  for (const Field& u : traj.u)
    for (const Mat& v : u.values) drift = std::max(drift, norm_alg(spec.p_project(v)));
  return drift;
}

}  // namespace orbitflow
