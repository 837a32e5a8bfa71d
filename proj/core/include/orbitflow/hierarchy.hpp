#pragma once

#include "orbitflow/grid.hpp"

namespace orbitflow {

/// Relative tolerance for the centralizer component of the recursion terms.
inline constexpr double tau_rec = 1e-6;

/// The data that fixes one flow of the hierarchy: base point a (through its
/// centralizer splitting), a commuting direction b, and the flow order j.
struct HierarchyContext {
  CentralizerData cd;
  AlgebraElement b;
  int j = 1;

  HierarchyContext(const AlgebraElement& a_in, const AlgebraElement& b_in, int j_in);

  const AlgebraElement& a() const { return cd.a(); }
  const AlgebraTag& tag() const { return cd.tag(); }
};

/// Convenience: the (a, j) context.
HierarchyContext make_context(const AlgebraElement& a, int j);

Field constant_field(const LineGrid& g, const AlgebraElement& v);

/// Checks that u is a valid hierarchy phase point: decaying, values in U_a^perp.
void check_phase_point(const HierarchyContext& ctx, const Field& u);

/// Q_0..Q_jmax of the recursion (Q_j)_x + [u, Q_j] = [Q_{j+1}, a], Q_0 = b,
/// with the centralizer component anchored to vanish at -L.
struct QSequence {
  std::vector<Field> q;
  /// sup over levels of |pi0((Q_j)_x + [u,Q_j])| relative to the term size.
  double pi0_residual = 0.0;
};
QSequence q_sequence(const HierarchyContext& ctx, const Field& u, int jmax);

/// Max over powers 1..jmax of sup_x |lambda^-p coefficient of
/// tr((sum_j Q_j lambda^-j)^m)|; small values certify that the series stays
/// conjugate to b.
double check_asymptotic_normalization(const HierarchyContext& ctx, const QSequence& qs, int m);

/// Right-hand side of the (b,j)-flow: u_t = (Q_j)_x + [u, Q_j] = [Q_{j+1}, a].
Field flow_rhs(const HierarchyContext& ctx, const Field& u, double* pi0_residual = nullptr);

struct FlowTrajectory {
  std::vector<double> t;
  std::vector<Field> u;
  double dt = 0.0;         // step actually used
  double pi0_drift = 0.0;  // sup over snapshots of the centralizer component
};

/// Method-of-lines integration with RK4; snapshots at (roughly) uniform times,
/// always including t = 0 and t = T.
FlowTrajectory integrate_flow(const HierarchyContext& ctx, const Field& u0, double T,
                              double dt = 0.0, int snapshots = 11);

/// The Lax connection theta_lambda = (a lambda + u) dx + (b lambda^j + sum Q_i
/// lambda^{j-i}) dt at a fixed time slice. A and B are raw complex matrices
/// (the connection lives in the complexified algebra for complex lambda).
struct LaxConnection {
  Complex lambda;
  LineGrid grid;
  std::vector<Mat> A;
  std::vector<Mat> B;
};
LaxConnection lax_pair(const HierarchyContext& ctx, const Field& u, Complex lambda);

/// sup over interior snapshots and samples of |A_t - B_x - [A, B]|, with A_t
/// by central differences across stored snapshots.
double flatness_residual(const HierarchyContext& ctx, const FlowTrajectory& traj,
                         Complex lambda);

/// F_{b,j}(u) = -1/(j+1) * integral of <Q_{b,j+2}(u), a>.
double conserved_F(const HierarchyContext& ctx, const Field& u, int j);

/// grad F_{b,j}(u) = pi1(Q_{b,j+1}(u)).
Field grad_F(const HierarchyContext& ctx, const Field& u, int j);

/// First Poisson operator J_a(v) = [v, a].
Field poisson_Ja(const HierarchyContext& ctx, const Field& v);

/// Second Poisson operator P_u(v) = v_x + pi1([u,v]) + [u,h],
/// h(x) = -int pi0([u,v]) with the requested anchoring. On hierarchy vector
/// fields (whose centralizer integrals vanish) the conventions coincide;
/// `symmetric` is the skew-adjoint one on arbitrary decaying fields.
Field poisson_P(const HierarchyContext& ctx, const Field& u, const Field& v,
                Anchoring anchor = Anchoring::left);

/// J_k = J_a (J_a^-1 P_u)^k; k = 0 gives J_a.
Field poisson_Jk(const HierarchyContext& ctx, const Field& u, const Field& v, int k,
                 Anchoring anchor = Anchoring::left);

/// Evaluates P_u(v) through an extension v_ext with pi1(v_ext) = v,
/// v_ext(-L) = 0 and (v_ext)_x + [u, v_ext] in U_a^perp; independent oracle
/// for the second Poisson operator.
Field poisson_P_shortcut(const HierarchyContext& ctx, const Field& u, const Field& v,
                         const Field& v_ext);

}  // namespace orbitflow
