#include "orbitflow/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace orbitflow {

namespace {

bool operator_less(const AlgebraTag& a, const AlgebraTag& b) {
  if (a.family != b.family) return static_cast<int>(a.family) < static_cast<int>(b.family);
  return a.n < b.n;
}

struct TagLess {
  bool operator()(const AlgebraTag& a, const AlgebraTag& b) const { return operator_less(a, b); }
};

// Basis of the real symmetric n x n matrices, Frobenius-normalized.
std::vector<Eigen::MatrixXd> symmetric_basis(int n) {
  std::vector<Eigen::MatrixXd> out;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
    E(k, k) = 1.0;
    out.push_back(E);
  }
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
      E(j, k) = E(k, j) = inv_sqrt2;
      out.push_back(E);
    }
  return out;
}

std::vector<Mat> build_basis(const AlgebraTag& tag) {
  const int n = tag.n;
  const Complex I(0.0, 1.0);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<Mat> basis;

  auto offdiag = [&](std::vector<Mat>& out) {
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Mat S = Mat::Zero(n, n);
        S(j, k) = inv_sqrt2;
        S(k, j) = -inv_sqrt2;
        out.push_back(S);
        Mat T = Mat::Zero(n, n);
        T(j, k) = I * inv_sqrt2;
        T(k, j) = I * inv_sqrt2;
        out.push_back(T);
      }
  };

  switch (tag.family) {
    case Family::u: {
      for (int k = 0; k < n; ++k) {
        Mat D = Mat::Zero(n, n);
        D(k, k) = I;
        basis.push_back(D);
      }
      offdiag(basis);
      break;
    }
    case Family::su: {
      // traceless imaginary diagonals: i * diag(1,..,1,-m,0,..)/sqrt(m(m+1))
      for (int m = 1; m < n; ++m) {
        Mat D = Mat::Zero(n, n);
        const double s = 1.0 / std::sqrt(double(m) * (m + 1));
        for (int k = 0; k < m; ++k) D(k, k) = I * s;
        D(m, m) = -I * (double(m) * s);
        basis.push_back(D);
      }
      offdiag(basis);
      break;
    }
    case Family::so: {
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          Mat S = Mat::Zero(n, n);
          S(j, k) = inv_sqrt2;
          S(k, j) = -inv_sqrt2;
          basis.push_back(S);
        }
      break;
    }
    case Family::sp: {
      // [[A, -conj(B)], [B, conj(A)]] with A in u(n), B complex symmetric.
      AlgebraTag un{Family::u, n};
      for (const Mat& A : build_basis(un)) {
        Mat X = Mat::Zero(2 * n, 2 * n);
        X.topLeftCorner(n, n) = A;
        X.bottomRightCorner(n, n) = A.conjugate();
        basis.push_back(X * inv_sqrt2);
      }
      for (const Eigen::MatrixXd& R : symmetric_basis(n)) {
        Mat B = R.cast<Complex>();
        Mat X = Mat::Zero(2 * n, 2 * n);
        X.topRightCorner(n, n) = -B.conjugate();
        X.bottomLeftCorner(n, n) = B;
        basis.push_back(X * inv_sqrt2);
        Mat Bi = I * R.cast<Complex>();
        Mat Y = Mat::Zero(2 * n, 2 * n);
        Y.topRightCorner(n, n) = -Bi.conjugate();
        Y.bottomLeftCorner(n, n) = Bi;
        basis.push_back(Y * inv_sqrt2);
      }
      break;
    }
  }
  return basis;
}

}  // namespace

int AlgebraTag::dim() const {
  switch (family) {
    case Family::u: return n * n;
    case Family::su: return n * n - 1;
    case Family::so: return n * (n - 1) / 2;
    case Family::sp: return n * (2 * n + 1);
  }
  return 0;
}

int AlgebraTag::rank() const {
  switch (family) {
    case Family::u: return n;
    case Family::su: return n - 1;
    case Family::so: return n / 2;
    case Family::sp: return n;
  }
  return 0;
}

std::string family_name(Family f) {
  switch (f) {
    case Family::u: return "u";
    case Family::su: return "su";
    case Family::so: return "so";
    case Family::sp: return "sp";
  }
  return "?";
}

std::string tag_name(const AlgebraTag& tag) {
  std::ostringstream os;
  os << family_name(tag.family) << "(" << tag.n << ")";
  return os.str();
}

const std::vector<Mat>& algebra_basis(const AlgebraTag& tag) {
  static std::map<AlgebraTag, std::vector<Mat>, TagLess> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(tag);
  if (it == cache.end()) it = cache.emplace(tag, build_basis(tag)).first;
  return it->second;
}

RealVec algebra_coords(const AlgebraTag& tag, const Mat& X) {
  const auto& basis = algebra_basis(tag);
  RealVec c(basis.size());
  for (size_t i = 0; i < basis.size(); ++i) c[static_cast<int>(i)] = inner_m(X, basis[i]);
  return c;
}

Mat algebra_from_coords(const AlgebraTag& tag, const RealVec& c) {
  const auto& basis = algebra_basis(tag);
  Mat X = Mat::Zero(tag.matrix_dim(), tag.matrix_dim());
  for (size_t i = 0; i < basis.size(); ++i) X += c[static_cast<int>(i)] * basis[i];
  return X;
}

double algebra_defect(const AlgebraElement& X) {
  const int d = X.tag.matrix_dim();
  if (X.m.rows() != d || X.m.cols() != d) return 1e300;
  double defect = (X.m + X.m.adjoint()).cwiseAbs().maxCoeff();
  switch (X.tag.family) {
    case Family::u: break;
    case Family::su: defect = std::max(defect, std::abs(X.m.trace())); break;
    case Family::so: defect = std::max(defect, X.m.imag().cwiseAbs().maxCoeff()); break;
    case Family::sp: {
      const int n = X.tag.n;
      Mat A = X.m.topLeftCorner(n, n);
      Mat B = X.m.bottomLeftCorner(n, n);
      defect = std::max(defect, (X.m.bottomRightCorner(n, n) - A.conjugate()).cwiseAbs().maxCoeff());
      defect = std::max(defect, (X.m.topRightCorner(n, n) + B.conjugate()).cwiseAbs().maxCoeff());
      defect = std::max(defect, (B - B.transpose()).cwiseAbs().maxCoeff());
      break;
    }
  }
  return defect;
}

double group_defect(const GroupElement& g) {
  const int d = g.tag.matrix_dim();
  if (g.m.rows() != d || g.m.cols() != d) return 1e300;
  double defect = (g.m.adjoint() * g.m - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  switch (g.tag.family) {
    case Family::u: break;
    case Family::su: defect = std::max(defect, std::abs(g.m.determinant() - Complex(1, 0))); break;
    case Family::so: defect = std::max(defect, g.m.imag().cwiseAbs().maxCoeff()); break;
    case Family::sp: {
      const int n = g.tag.n;
      Mat J = Mat::Zero(d, d);
      J.topRightCorner(n, n) = -Mat::Identity(n, n);
      J.bottomLeftCorner(n, n) = Mat::Identity(n, n);
      defect = std::max(defect, (g.m.transpose() * J * g.m - J).cwiseAbs().maxCoeff());
      break;
    }
  }
  return defect;
}

void check_algebra(const AlgebraElement& X, double tau) {
  const double d = algebra_defect(X);
  if (!(d <= tau))
    throw StructuralError("algebra element violates " + tag_name(X.tag) +
                          " structure, defect " + std::to_string(d));
}

void check_group(const GroupElement& g, double tau) {
  const double d = group_defect(g);
  if (!(d <= tau))
    throw StructuralError("group element violates " + tag_name(g.tag) +
                          " structure, defect " + std::to_string(d));
}

AlgebraElement zero_element(const AlgebraTag& tag) {
  return {tag, Mat::Zero(tag.matrix_dim(), tag.matrix_dim())};
}

GroupElement identity_element(const AlgebraTag& tag) {
  return {tag, Mat::Identity(tag.matrix_dim(), tag.matrix_dim())};
}

AlgebraElement bracket(const AlgebraElement& X, const AlgebraElement& Y) {
  if (X.tag != Y.tag)
    throw StructuralError("bracket: tag mismatch " + tag_name(X.tag) + " vs " + tag_name(Y.tag));
  return {X.tag, bracket_m(X.m, Y.m)};
}

double inner(const AlgebraElement& X, const AlgebraElement& Y) {
  if (X.tag != Y.tag)
    throw StructuralError("inner: tag mismatch " + tag_name(X.tag) + " vs " + tag_name(Y.tag));
  return inner_m(X.m, Y.m);
}

AlgebraElement conjugate(const GroupElement& g, const AlgebraElement& X) {
  if (g.tag != X.tag)
    throw StructuralError("conjugate: tag mismatch " + tag_name(g.tag) + " vs " + tag_name(X.tag));
  return {X.tag, conjugate_m(g.m, X.m)};
}

Mat expm_antihermitian(const Mat& X) {
  // iX is Hermitian; exp(X) = V exp(-i diag) V*.
  Eigen::SelfAdjointEigenSolver<Mat> es(Complex(0, 1) * X);
  Eigen::VectorXcd phases =
      (Complex(0, -1) * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat expm_general(const Mat& X) {
  // scaling and squaring on a plain Taylor series; inputs stay desk-scale
  const double nrm = X.cwiseAbs().maxCoeff() * X.rows();
  int s = 0;
  while ((nrm / std::pow(2.0, s)) > 0.5) ++s;
  Mat A = X / std::pow(2.0, s);
  Mat term = Mat::Identity(X.rows(), X.cols());
  Mat sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = (term * A) / double(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

GroupElement exp_to_group(const AlgebraElement& X) {
  Mat g = expm_antihermitian(X.m);
  if (X.tag.family == Family::so) g = g.real().cast<Complex>();
  return {X.tag, std::move(g)};
}

Mat project_to_group(const AlgebraTag& tag, const Mat& g) {
  Mat work = g;
  if (tag.family == Family::so) work = g.real().cast<Complex>();
  Eigen::JacobiSVD<Mat> svd(work, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues().minCoeff() < 1e-8)
    throw NumericalError("project_to_group: singular polar factor");
  Mat p = svd.matrixU() * svd.matrixV().adjoint();
  if (tag.family == Family::su) {
    Complex det = p.determinant();
    const double phase = std::arg(det);
    p *= std::exp(Complex(0, -phase / tag.n));
  }
  return p;
}

// -- centralizer --------------------------------------------------------------

namespace {

// ad(y) as a real dim x dim matrix in algebra coordinates.
Eigen::MatrixXd ad_matrix(const AlgebraTag& tag, const Mat& y) {
  const auto& basis = algebra_basis(tag);
  const int d = static_cast<int>(basis.size());
  Eigen::MatrixXd A(d, d);
  for (int j = 0; j < d; ++j) {
    Mat col = bracket_m(y, basis[j]);
    for (int i = 0; i < d; ++i) A(i, j) = inner_m(col, basis[i]);
  }
  return A;
}

struct SvdSplit {
  Eigen::MatrixXd kernel;  // columns span ker
  Eigen::MatrixXd pinv;    // pseudo-inverse, zero on ker
};

SvdSplit split_by_svd(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cut = (sv.size() > 0 ? sv(0) : 0.0) * tol::svd_cut;
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  SvdSplit out;
  out.kernel = svd.matrixV().rightCols(sv.size() - r);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (int i = 0; i < r; ++i) inv(i) = 1.0 / sv(i);
  out.pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
  return out;
}

}  // namespace

CentralizerData::CentralizerData(const AlgebraElement& a) : a_(a) {
  check_algebra(a);
  auto split = split_by_svd(ad_matrix(a.tag, a.m));
  kernel_basis_ = std::move(split.kernel);
  pinv_ = std::move(split.pinv);
  for (int k = 0; k < kernel_basis_.cols(); ++k)
    basis_T_.emplace_back(a.tag, algebra_from_coords(a.tag, kernel_basis_.col(k)));
}

Mat CentralizerData::pi0(const Mat& X) const {
  RealVec c = algebra_coords(tag(), X);
  RealVec proj = kernel_basis_ * (kernel_basis_.transpose() * c);
  return algebra_from_coords(tag(), proj);
}

AlgebraElement CentralizerData::pi0(const AlgebraElement& X) const {
  return {X.tag, pi0(X.m)};
}

AlgebraElement CentralizerData::pi1(const AlgebraElement& X) const {
  return {X.tag, pi1(X.m)};
}

Mat CentralizerData::ad_inverse_m(const Mat& v, bool check_domain) const {
  RealVec c = algebra_coords(tag(), v);
  if (check_domain) {
    const double kpart = (kernel_basis_.transpose() * c).norm();
    if (kpart > tol::solve * std::max(1.0, c.norm()))
      throw DomainError("ad_inverse: input has centralizer component of norm " +
                        std::to_string(kpart));
  }
  // [w, a] = v  <=>  [a, w] = -v  <=>  w = pinv(-v)
  return algebra_from_coords(tag(), Eigen::VectorXd(-(pinv_ * c)));
}

AlgebraElement CentralizerData::ad_inverse(const AlgebraElement& v) const {
  if (v.tag != tag()) throw StructuralError("ad_inverse: tag mismatch");
  return {v.tag, ad_inverse_m(v.m)};
}

AdSplitting::AdSplitting(const AlgebraTag& tag, const Mat& y) : tag_(tag) {
  auto split = split_by_svd(ad_matrix(tag, y));
  kernel_basis_ = std::move(split.kernel);
  pinv_ = std::move(split.pinv);
}

Mat AdSplitting::normal(const Mat& X) const {
  RealVec c = algebra_coords(tag_, X);
  return algebra_from_coords(tag_, kernel_basis_ * (kernel_basis_.transpose() * c));
}

Mat AdSplitting::tangent(const Mat& X) const { return X - normal(X); }

Mat AdSplitting::solve_bracket(const Mat& v) const {
  RealVec c = algebra_coords(tag_, v);
  return algebra_from_coords(tag_, Eigen::VectorXd(-(pinv_ * c)));
}

std::pair<AlgebraElement, AlgebraElement> orbit_projections(const AlgebraElement& y,
                                                            const AlgebraElement& X) {
  if (y.tag != X.tag) throw StructuralError("orbit_projections: tag mismatch");
  AdSplitting split(y.tag, y.m);
  Mat nrm = split.normal(X.m);
  return {AlgebraElement{X.tag, X.m - nrm}, AlgebraElement{X.tag, nrm}};
}

bool is_regular(const AlgebraElement& a) {
  CentralizerData cd(a);
  return cd.centralizer_dim() == a.tag.rank();
}

Eigen::VectorXd spectrum_imag(const Mat& X) {
  Eigen::SelfAdjointEigenSolver<Mat> es(Complex(0, 1) * X);
  Eigen::VectorXd ev = -es.eigenvalues();  // eigenvalues of X are i*(-these)... sorted below
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

Mat snap_spectrum(const Mat& X, const Eigen::VectorXd& ref) {
  Eigen::SelfAdjointEigenSolver<Mat> es(Complex(0, 1) * X);
  // es eigenvalues ascending = -imag parts, so imag parts run descending;
  // column i gets the snapped eigenvalue i*ref(d-1-i).
  const int d = static_cast<int>(ref.size());
  Eigen::VectorXcd diag(d);
  for (int i = 0; i < d; ++i) diag(i) = Complex(0, ref(d - 1 - i));
  return es.eigenvectors() * diag.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace orbitflow
