#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "orbitflow/errors.hpp"

namespace orbitflow {

using Mat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;
using Complex = std::complex<double>;

/// Default tolerances used across the library.
namespace tol {
inline constexpr double alg = 1e-10;    // algebra structure defects
inline constexpr double grp = 1e-10;    // group structure defects
inline constexpr double solve = 1e-8;   // linear solves / inversion round trips
inline constexpr double orbit = 1e-7;   // eigenvalue drift off an adjoint orbit
inline constexpr double decay = 1e-6;   // boundary magnitude of decaying fields
inline constexpr double svd_cut = 1e-9; // relative singular-value cutoff for ad(a)
}  // namespace tol

enum class Family { u, su, so, sp };

/// Which compact matrix Lie algebra an element lives in.
struct AlgebraTag {
  Family family = Family::u;
  int n = 1;

  /// Side length of the matrices that represent elements (2n for sp(n)).
  int matrix_dim() const { return family == Family::sp ? 2 * n : n; }
  /// Real dimension of the algebra as a vector space.
  int dim() const;
  /// Dimension of a maximal abelian subalgebra.
  int rank() const;

  bool operator==(const AlgebraTag& o) const { return family == o.family && n == o.n; }
  bool operator!=(const AlgebraTag& o) const { return !(*this == o); }
};

std::string family_name(Family f);
std::string tag_name(const AlgebraTag& tag);

/// An element of the Lie algebra named by `tag`: an anti-Hermitian matrix with
/// the family's extra structure (traceless for su, real for so, the symplectic
/// block symmetry for sp).
struct AlgebraElement {
  AlgebraTag tag;
  Mat m;

  AlgebraElement() = default;
  AlgebraElement(AlgebraTag t, Mat mat) : tag(t), m(std::move(mat)) {}
};

/// A group element: unitary (orthogonal for so, det 1 for su, symplectic for sp).
struct GroupElement {
  AlgebraTag tag;
  Mat m;

  GroupElement() = default;
  GroupElement(AlgebraTag t, Mat mat) : tag(t), m(std::move(mat)) {}
};

/// Largest structural violation of X as an element of its algebra.
double algebra_defect(const AlgebraElement& X);
/// Largest structural violation of g as an element of its group.
double group_defect(const GroupElement& g);

/// Throws StructuralError when the defect exceeds `tau`.
void check_algebra(const AlgebraElement& X, double tau = tol::alg);
void check_group(const GroupElement& g, double tau = tol::grp);

AlgebraElement zero_element(const AlgebraTag& tag);
GroupElement identity_element(const AlgebraTag& tag);

/// Orthonormal basis of the algebra under the Ad-invariant inner product.
/// Cached per tag; the reference stays valid for the program's lifetime.
const std::vector<Mat>& algebra_basis(const AlgebraTag& tag);

/// Coordinates of X in algebra_basis(tag) and back.
RealVec algebra_coords(const AlgebraTag& tag, const Mat& X);
Mat algebra_from_coords(const AlgebraTag& tag, const RealVec& c);

// -- point operations --------------------------------------------------------

/// [X, Y] = XY - YX. Tags must match.
AlgebraElement bracket(const AlgebraElement& X, const AlgebraElement& Y);
inline Mat bracket_m(const Mat& X, const Mat& Y) { return X * Y - Y * X; }

/// Ad-invariant inner product <X, Y> = -Re tr(XY); positive definite on every
/// catalog family.
double inner(const AlgebraElement& X, const AlgebraElement& Y);
inline double inner_m(const Mat& X, const Mat& Y) {
  return -(X.cwiseProduct(Y.transpose())).sum().real();
}
inline double norm_alg(const Mat& X) { return std::sqrt(std::max(0.0, inner_m(X, X))); }

/// g X g^-1.
AlgebraElement conjugate(const GroupElement& g, const AlgebraElement& X);
inline Mat conjugate_m(const Mat& g, const Mat& X) { return g * X * g.adjoint(); }

/// Matrix exponential of an algebra element, landing in the group.
GroupElement exp_to_group(const AlgebraElement& X);
/// Exponential of an anti-Hermitian matrix via Hermitian eigendecomposition.
Mat expm_antihermitian(const Mat& X);
/// General dense matrix exponential (scaling-and-squaring); used for frames
/// evaluated at complex spectral parameters.
Mat expm_general(const Mat& X);

/// Nearest unitary (polar factor); for su the determinant phase is removed,
/// for so the real part is projected first.
Mat project_to_group(const AlgebraTag& tag, const Mat& g);

// -- centralizer machinery ----------------------------------------------------

/// Kernel/image splitting of ad(a), built once per base point by
/// singular-value thresholding of the ad(a) operator matrix.
class CentralizerData {
 public:
  explicit CentralizerData(const AlgebraElement& a);

  const AlgebraElement& a() const { return a_; }
  const AlgebraTag& tag() const { return a_.tag; }
  /// Orthonormal basis of the centralizer U_a (the kernel of ad(a)).
  const std::vector<AlgebraElement>& basis_T() const { return basis_T_; }
  int centralizer_dim() const { return static_cast<int>(basis_T_.size()); }

  /// Orthogonal projection onto U_a.
  Mat pi0(const Mat& X) const;
  /// Orthogonal projection onto U_a^perp.
  Mat pi1(const Mat& X) const { return X - pi0(X); }
  AlgebraElement pi0(const AlgebraElement& X) const;
  AlgebraElement pi1(const AlgebraElement& X) const;

  /// The unique w in U_a^perp with [w, a] = v. Requires pi0(v) ~ 0, otherwise
  /// throws DomainError reporting |pi0(v)|.
  AlgebraElement ad_inverse(const AlgebraElement& v) const;
  Mat ad_inverse_m(const Mat& v, bool check_domain = true) const;

  /// Solve [a, w] = v on U_a^perp (the other orientation of ad_inverse).
  Mat solve_ad_a(const Mat& v) const { return -ad_inverse_m(v, false); }

 private:
  AlgebraElement a_;
  std::vector<AlgebraElement> basis_T_;
  Eigen::MatrixXd kernel_basis_;  // columns: coordinates of basis_T
  Eigen::MatrixXd pinv_;          // pseudo-inverse of the ad(a) coordinate matrix
};

/// Kernel/image projections of ad(y) at an arbitrary base point, for
/// tangent/normal splittings along curves on the orbit M_y.
class AdSplitting {
 public:
  AdSplitting(const AlgebraTag& tag, const Mat& y);

  /// Normal part: projection onto ker ad(y).
  Mat normal(const Mat& X) const;
  /// Tangent part: X - normal(X).
  Mat tangent(const Mat& X) const;
  /// The unique tangent w with [w, y] = v (v must be tangent).
  Mat solve_bracket(const Mat& v) const;

 private:
  AlgebraTag tag_;
  Eigen::MatrixXd kernel_basis_;
  Eigen::MatrixXd pinv_;
};

/// tangent/normal split of X at the orbit point y: normal lies in ker ad(y),
/// tangent in im ad(y).
std::pair<AlgebraElement, AlgebraElement> orbit_projections(const AlgebraElement& y,
                                                            const AlgebraElement& X);

/// True iff dim ker ad(a) equals the rank of the algebra (principal orbit).
bool is_regular(const AlgebraElement& a);

/// Sorted imaginary parts of the spectrum (elements are anti-Hermitian).
Eigen::VectorXd spectrum_imag(const Mat& X);

/// Nearest matrix with the reference spectrum: eigenvalues snapped in sorted
/// order, eigenvectors kept.
Mat snap_spectrum(const Mat& X, const Eigen::VectorXd& ref_spectrum_imag);

}  // namespace orbitflow
