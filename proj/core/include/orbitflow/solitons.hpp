#pragma once

#include "orbitflow/devmap.hpp"

namespace orbitflow {

/// One dressing datum: a non-real pole z and a proper subspace V of C^n
/// (columns orthonormal).
struct BacklundDatum {
  Complex z;
  Mat V;
};

void check_datum(const AlgebraTag& tag, const BacklundDatum& d);

/// Hermitian projector onto the column span of V.
Mat hermitian_projector(const Mat& V);

/// Simple rational factor f_{z,pi}(lambda) = I + (conj(z)-z)/(lambda-conj(z)) pi_perp.
/// Refuses evaluation within 1e-6 of the pole.
Mat simple_factor(int n, const BacklundDatum& d, Complex lambda);

/// An explicit solution of the (b,j)-flow together with its extended frame,
/// both stored as evaluators over (x, t[, lambda]).
struct SolitonSolution {
  AlgebraTag tag;
  std::function<Mat(double, double)> u;
  std::function<Mat(double, double, Complex)> frame;
};

/// The vacuum u = 0 with frame E(x,t,lambda) = exp(a lambda x + b lambda^j t).
SolitonSolution vacuum_solution(const HierarchyContext& ctx);

/// Frame of the vacuum as a group element (real lambda keeps it in the group).
GroupElement vacuum_frame(const HierarchyContext& ctx, double lambda, double x, double t);
Mat vacuum_frame_m(const HierarchyContext& ctx, Complex lambda, double x, double t);

/// One dressing step: (u, E) -> (u_tilde, E_tilde) with
/// u_tilde = u + (z - conj(z)) [pi_tilde, a] and
/// E_tilde = f_{z,pi} E f_{z,pi_tilde}^-1. When check_frame is set, the input
/// frame is probed against dE E^-1 = (a lambda + u) E-form at a few points.
SolitonSolution backlund(const HierarchyContext& ctx, const SolitonSolution& sol,
                         const BacklundDatum& d, bool check_frame = true);

/// Left fold of backlund over the data, starting from the vacuum.
SolitonSolution n_soliton(const HierarchyContext& ctx, const std::vector<BacklundDatum>& data);

/// Samples u(x, t) onto a grid.
Field sample_solution(const SolitonSolution& sol, const LineGrid& g, double t);

/// Normalized curves from the lambda = 0 frame slices: c = lim_{x->-L} k(x,0),
/// gamma(x,t) = c^-1 k a k^-1 c.
struct SolitonCurveFamily {
  std::vector<double> t;
  std::vector<Curve> gamma;
  Mat c;               // normalization constant from the t = 0 slice
  double c_drift = 0;  // max deviation of per-slice constants from c
};
SolitonCurveFamily soliton_to_curve(const HierarchyContext& ctx,
                                    const std::function<Mat(double, double)>& k_frame,
                                    const LineGrid& g, const std::vector<double>& times);

// -- finite type solutions ------------------------------------------------------

/// State (xi_1, ..., xi_k) at one point; xi_0 = a is implicit.
struct FiniteTypeState {
  std::vector<Mat> xi;
};

struct FiniteTypeRun {
  LineGrid grid;
  std::vector<double> t;
  /// xi[snapshot][level-1][sample] for levels 1..k
  std::vector<std::vector<std::vector<Mat>>> xi;
  double compat_residual = 0.0;
  double flow_residual = 0.0;
};

/// Integrates the polynomial Killing system: coefficient extraction of
/// (xi_i)_x = [a, xi_{i+1}] + [xi_1, xi_i] in x, and the matching t-equation,
/// t first along the sample nearest x = 0, then x sweeps per snapshot.
/// Supported flows: j = 1 (any commuting b) and j = 2 with b = a.
FiniteTypeRun finite_type_solve(const HierarchyContext& ctx, int k,
                                const FiniteTypeState& init, const LineGrid& grid, double T,
                                int snapshots = 6, double dt_t = 1e-3);

/// x-derivative of the state per the lambda-coefficient extraction (exposed for
/// tests of the extraction itself).
FiniteTypeState finite_type_x_rhs(const HierarchyContext& ctx, const FiniteTypeState& s);
FiniteTypeState finite_type_t_rhs(const HierarchyContext& ctx, const FiniteTypeState& s);

}  // namespace orbitflow
