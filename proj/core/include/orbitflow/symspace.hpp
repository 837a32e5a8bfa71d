#pragma once

#include "orbitflow/hierarchy.hpp"

namespace orbitflow {

enum class SpaceId { gr_complex, sphere, gr2_real, so2n_un, spn_un };

std::string space_name(SpaceId id);

/// A cataloged symmetric space U/K: ambient algebra, involution, base point,
/// and the identifications between matrix fields and the classical component
/// variables.
struct SymmetricSpaceSpec {
  SpaceId id;
  AlgebraTag tag;
  AlgebraElement a;
  std::function<Mat(const Mat&)> dsigma;
  int n = 0;  // size parameter as cataloged
  int k = 0;  // only for Gr(k, C^n)

  Mat k_project(const Mat& X) const { return 0.5 * (X + dsigma(X)); }
  Mat p_project(const Mat& X) const { return 0.5 * (X - dsigma(X)); }
};

/// Fully populated catalog entry; throws on unsupported sizes.
SymmetricSpaceSpec catalog(SpaceId id, int n, int k = 1);

/// Max violation of the Cartan relations [K,K] in K, [K,P] in P, [P,P] in K
/// over all basis pairs, plus the involution checks; small for every entry.
double cartan_defect(const SymmetricSpaceSpec& spec);

/// (a,2)-flow in closed form on Hermitian entries:
/// u_t = [a, u_xx] - 1/2 [u, [u, [a, u]]].
Field hermitian_a2_rhs(const SymmetricSpaceSpec& spec, const Field& u);

// -- component identifications (per sample) ---------------------------------

/// Gr(k, C^n): u = [[0, q], [-q*, 0]] <-> q (k x (n-k) complex).
Mat gr_q_extract(const SymmetricSpaceSpec& spec, const Mat& u);
Mat gr_q_embed(const SymmetricSpaceSpec& spec, const Mat& q);

/// S^n: u in K cap U_a^perp <-> u in R^{n-1} over the k_i basis.
Eigen::VectorXd sn_k_extract(const SymmetricSpaceSpec& spec, const Mat& u);
Mat sn_k_embed(const SymmetricSpaceSpec& spec, const Eigen::VectorXd& u);

/// S^n: points of P <-> R^n over the {a, p_i} basis (N_a = unit sphere).
Eigen::VectorXd sn_p_extract(const SymmetricSpaceSpec& spec, const Mat& y);
Mat sn_p_embed(const SymmetricSpaceSpec& spec, const Eigen::VectorXd& v);

/// Gr(2, R^{n+2}): u <-> (X, Y) in R^n x R^n.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gr2_extract(const SymmetricSpaceSpec& spec,
                                                        const Mat& u);
Mat gr2_embed(const SymmetricSpaceSpec& spec, const Eigen::VectorXd& X,
              const Eigen::VectorXd& Y);

/// SO(2n)/U(n): u = [[X, Y], [Y, -X]] with X, Y real skew.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> so2n_extract(const SymmetricSpaceSpec& spec,
                                                         const Mat& u);
Mat so2n_embed(const SymmetricSpaceSpec& spec, const Eigen::MatrixXd& X,
               const Eigen::MatrixXd& Y);

/// Sp(n)/U(n): u = i [[X, Y], [Y, -X]] with X, Y real symmetric.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> spn_extract(const SymmetricSpaceSpec& spec,
                                                        const Mat& u);
Mat spn_embed(const SymmetricSpaceSpec& spec, const Eigen::MatrixXd& X,
              const Eigen::MatrixXd& Y);

/// R^3 <-> su(2) carrying the cross product to the bracket; e3 maps to
/// a = diag(i,-i)/2.
Mat r3_to_su2(const Eigen::Vector3d& v);
Eigen::Vector3d su2_to_r3(const Mat& m);

// -- cataloged component systems ----------------------------------------------

/// Matrix NLS. The default convention matches the closed-form (a,2)-flow
/// (q_t = i(q_xx + 2 q q* q)); `literal` selects q_t = q_xx + 2 q q* q.
enum class MnlsConvention { flow_matched, literal };
std::vector<Mat> mnls_rhs(const LineGrid& g, const std::vector<Mat>& q,
                          MnlsConvention conv = MnlsConvention::flow_matched);

/// Gr(2, R^{n+2}) system on (X, Y) vector fields.
std::pair<std::vector<Eigen::VectorXd>, std::vector<Eigen::VectorXd>>
gr2_rhs(const LineGrid& g, const std::vector<Eigen::VectorXd>& X,
        const std::vector<Eigen::VectorXd>& Y);

/// SO(2n)/U(n) system on skew matrix pairs.
std::pair<std::vector<Eigen::MatrixXd>, std::vector<Eigen::MatrixXd>>
so2n_rhs(const LineGrid& g, const std::vector<Eigen::MatrixXd>& X,
         const std::vector<Eigen::MatrixXd>& Y);

/// Sp(n)/U(n) system on symmetric matrix pairs.
std::pair<std::vector<Eigen::MatrixXd>, std::vector<Eigen::MatrixXd>>
spn_rhs(const LineGrid& g, const std::vector<Eigen::MatrixXd>& X,
        const std::vector<Eigen::MatrixXd>& Y);

/// vmKdV: u_t = -(u_xxx + 3/2 |u|^2 u_x) for u: R -> R^{n-1}.
std::vector<Eigen::VectorXd> vmkdv_rhs(const LineGrid& g,
                                       const std::vector<Eigen::VectorXd>& u);

/// Sphere curve flow gamma_t = -(gamma_xxx + 3<gamma_x,gamma_xx> gamma
/// + 3/2 |gamma_x|^2 gamma_x); samples must lie on the unit sphere.
std::vector<Eigen::VectorXd> sphere_curve_rhs(const LineGrid& g,
                                              const std::vector<Eigen::VectorXd>& gamma);

/// Heisenberg ferromagnet gamma_t = gamma x gamma_xx on S^2 in R^3.
std::vector<Eigen::VectorXd> hfm_rhs(const LineGrid& g,
                                     const std::vector<Eigen::VectorXd>& gamma);

/// Integrates the (a,j)-flow from K-valued data and returns the largest
/// P-component that appears (small for odd j, order one for even j).
double odd_flow_invariance(const SymmetricSpaceSpec& spec, const Field& u0, int j, double T,
                           double dt = 0.0, int snapshots = 6);

}  // namespace orbitflow
