#pragma once

#include "orbitflow/hierarchy.hpp"

namespace orbitflow {

/// Cross-check tolerance between the two evaluation routes of the curve flow.
inline constexpr double tau_xcheck = 1e-5;

/// A curve on the orbit together with its developing frame and phase point:
/// gamma = g a g^-1, g(-L) = I, u = g^-1 g_x in U_a^perp.
struct DevelopedPair {
  Curve gamma;
  Frame g;
  Field u;
  /// sup |gamma - g a g^-1| measured when the pair was built.
  double reconstruction_defect = 0.0;
};

/// Phase point -> normalized curve (g = solve_frame(u, I), gamma = g a g^-1).
DevelopedPair undevelop(const HierarchyContext& ctx, const Field& u);

/// Curve -> phase point, by integrating the frame ODE driven by gamma_x.
DevelopedPair develop(const HierarchyContext& ctx, const Curve& gamma);

/// sup norm of the normal component of xi along gamma (tangency defect).
double tangency_defect(const Curve& gamma, const Field& xi);

/// J_gamma(xi) = [xi, gamma] pointwise; xi must be tangent along gamma.
Field geo_J(const Curve& gamma, const Field& xi, bool check_tangent = true);

/// The unique tangent xi with [xi, gamma] = v (per-sample solve on im ad(gamma)).
Field geo_J_inverse(const Curve& gamma, const Field& v, bool check_tangent = true);

/// Lambda_gamma(xi) = g P_u(g^-1 xi g) g^-1 (conjugation form; works for any a).
Field geo_Lambda_conj(const HierarchyContext& ctx, const DevelopedPair& pair, const Field& xi,
                      Anchoring anchor = Anchoring::left);

/// Lambda in submanifold terms: covariant derivative, second fundamental form,
/// shape operators along the parallel normal frame. Requires a regular.
Field geo_Lambda_geom(const HierarchyContext& ctx, const Curve& gamma, const Field& xi,
                      Anchoring anchor = Anchoring::left);

/// Curve flow right-hand side g [Q_{b,j}(u), a] g^-1; when crosschecked, the
/// (Lambda J^-1)^{j-1} applied to (b_hat(gamma))_x route must agree within
/// `xcheck_tol` or a ConsistencyError is thrown.
Field curve_flow_rhs(const HierarchyContext& ctx, const DevelopedPair& pair,
                     bool crosscheck = true, double* xcheck_defect = nullptr,
                     double xcheck_tol = tau_xcheck);

/// The parallel normal field b_hat(gamma) = g b g^-1 as a grid field.
Field parallel_normal(const DevelopedPair& pair, const AlgebraElement& b);

/// Schroedinger flow [gamma, gamma_xx]; requires ad(a)^2 = -Id on U_a^perp.
Field schrodinger_rhs(const Curve& gamma);

/// gamma_t = i^{k-1} (gamma^k)_x for u(n) orbits.
Field invariant_poly_rhs(const Curve& gamma, int k);

/// Renormalized height H_b(gamma) = integral of <gamma(x) - a, b>.
double height_H(const Curve& gamma, const AlgebraElement& b);

/// grad H_b: tangential projection of b along gamma.
Field grad_height(const Curve& gamma, const AlgebraElement& b);

struct CurveTrajectory {
  std::vector<double> t;
  std::vector<Curve> gamma;
  double dt = 0.0;
  /// largest per-step spectrum drift absorbed by the orbit reprojection
  double reprojection_drift = 0.0;
};

/// RK4 on the curve with per-stage orbit reprojection (spectrum snap) and left
/// end re-pinning.
CurveTrajectory integrate_curve_flow(const HierarchyContext& ctx, const Curve& gamma0,
                                     double T, double dt = 0.0, int snapshots = 11);

/// Snap every sample to the orbit of `base` and re-pin the left end; returns
/// the largest correction applied.
double project_curve_to_orbit(Curve& c);

}  // namespace orbitflow
