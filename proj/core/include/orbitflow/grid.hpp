#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "orbitflow/algebra.hpp"

namespace orbitflow {

/// Uniform samples x_i = -L + i*h of the truncated line [-L, L].
struct LineGrid {
  double L = 20.0;
  int N = 1024;

  double h() const { return 2.0 * L / (N - 1); }
  double x(int i) const { return -L + i * h(); }
  bool operator==(const LineGrid& o) const { return L == o.L && N == o.N; }
};

void check_grid(const LineGrid& g);

enum class DecayClass { decaying, orbit_valued, free_form };

/// A sampled map from [-L, L] into a matrix Lie algebra.
struct Field {
  LineGrid grid;
  AlgebraTag tag;
  std::vector<Mat> values;
  DecayClass decay = DecayClass::free_form;

  Field() = default;
  Field(LineGrid g, AlgebraTag t, DecayClass d = DecayClass::free_form)
      : grid(g), tag(t), decay(d) {
    values.assign(g.N, Mat::Zero(t.matrix_dim(), t.matrix_dim()));
  }

  int size() const { return static_cast<int>(values.size()); }
  AlgebraElement sample(int i) const { return {tag, values[i]}; }

  /// sup over samples of the algebra norm.
  double sup_norm() const;
  bool all_finite() const;
};

/// Builds a field from a sampling function x -> matrix.
Field make_field(const LineGrid& g, const AlgebraTag& tag,
                 const std::function<Mat(double)>& f,
                 DecayClass decay = DecayClass::decaying);

/// Structural checks: shapes, finiteness, decay class honored.
void check_field(const Field& f, double tau_decay = tol::decay);

/// sup_x |f(x) - g(x)| in the algebra norm.
double sup_distance(const Field& f, const Field& g);

/// Throws unless the two fields share grid and tag.
void require_layout(const Field& a, const Field& b, const char* op = "field op");

// linear-combination helpers (value semantics, matching grids assumed)
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
/// a + s*b
Field axpy(const Field& a, double s, const Field& b);
/// pointwise [a, b]
Field bracket_field(const Field& a, const Field& b);

/// A sampled map into the group (the trivialization of a flat connection).
struct Frame {
  LineGrid grid;
  AlgebraTag tag;
  std::vector<Mat> values;

  Frame() = default;
  Frame(LineGrid g, AlgebraTag t) : grid(g), tag(t) {
    values.assign(g.N, Mat::Identity(t.matrix_dim(), t.matrix_dim()));
  }
  int size() const { return static_cast<int>(values.size()); }
  GroupElement sample(int i) const { return {tag, values[i]}; }
};

/// A field constrained to the adjoint orbit of `base`: every sample shares the
/// spectrum of base, and the left end is pinned at base.
struct Curve {
  Field field;  // decay class orbit_valued
  AlgebraElement base;

  const LineGrid& grid() const { return field.grid; }
};

/// Largest spectrum deviation among samples, plus left-end pin defect.
struct CurveDefect {
  double spectrum = 0.0;
  double left_pin = 0.0;
};
CurveDefect curve_defect(const Curve& c);
void check_curve(const Curve& c, double tau_orbit = tol::orbit,
                 double tau_decay = tol::decay);

// -- finite differences on uniform samples ------------------------------------

/// Finite-difference weights at evaluation offset z (in units of h, relative to
/// node 0) over nodes 0..w-1 for the m-th derivative (Fornberg's algorithm).
std::vector<double> fd_weights(double z, int w, int m);

namespace detail {
/// Window width giving 4th-order accuracy for derivative order m.
inline int stencil_width(int order) { return order == 1 ? 5 : (order == 2 ? 6 : 7); }
}  // namespace detail

/// Order-1|2|3 derivative with 4th-order stencils: central in the interior,
/// one-sided at the boundary rows. M needs +, * by double, Zero-like init via
/// `0.0 * v[0]`.
template <typename M>
std::vector<M> apply_derivative(const LineGrid& g, const std::vector<M>& v, int order) {
  if (order < 1 || order > 3) throw DomainError("derivative: order must be 1, 2 or 3");
  const int N = g.N;
  const int w = detail::stencil_width(order);
  if (N < w + 2) throw DomainError("derivative: grid too small for the stencil");
  const double h = g.h();
  const double scale = 1.0 / std::pow(h, order);

  // one weight row per window offset (uniform grid)
  std::vector<std::vector<double>> rows(w);
  for (int p = 0; p < w; ++p) rows[p] = fd_weights(double(p), w, order);

  std::vector<M> out;
  out.reserve(N);
  for (int i = 0; i < N; ++i) {
    int s = i - w / 2;
    if (s < 0) s = 0;
    if (s > N - w) s = N - w;
    const auto& wt = rows[i - s];
    M acc = wt[0] * v[s];
    for (int k = 1; k < w; ++k) acc += wt[k] * v[s + k];
    out.push_back(scale * acc);
  }
  return out;
}

/// Cumulative integral from -L (zero at the left end), O(h^4): each panel
/// integrates the cubic through its four nearest samples.
template <typename M>
std::vector<M> apply_antiderivative(const LineGrid& g, const std::vector<M>& v) {
  const int N = g.N;
  if (N < 4) throw DomainError("antiderivative: need at least 4 samples");
  const double h = g.h();
  // panel [x_i, x_{i+1}] from nodes s..s+3, s = clamp(i-1, 0, N-4)
  std::vector<M> out;
  out.reserve(N);
  M acc = 0.0 * v[0];
  out.push_back(acc);
  for (int i = 0; i + 1 < N; ++i) {
    int s = i - 1;
    if (s < 0) s = 0;
    if (s > N - 4) s = N - 4;
    static const double w_mid[4] = {-1.0 / 24, 13.0 / 24, 13.0 / 24, -1.0 / 24};
    static const double w_left[4] = {9.0 / 24, 19.0 / 24, -5.0 / 24, 1.0 / 24};
    static const double w_right[4] = {1.0 / 24, -5.0 / 24, 19.0 / 24, 9.0 / 24};
    const double* wt = (i - s == 1) ? w_mid : (i - s == 0 ? w_left : w_right);
    M panel = wt[0] * v[s];
    for (int k = 1; k < 4; ++k) panel += wt[k] * v[s + k];
    acc += h * panel;
    out.push_back(acc);
  }
  return out;
}

Field derivative(const Field& f, int order = 1);
Field antiderivative_from_left(const Field& f);

/// Anchoring convention for the inverse derivative inside nonlocal operators:
/// `left` vanishes at -L (the geometric normalization), `symmetric` subtracts
/// half the total integral (the skew-adjoint choice). The two coincide on
/// fields whose total integral vanishes.
enum class Anchoring { left, symmetric };

/// Quadrature over the whole grid, O(h^4).
double integrate_line(const LineGrid& g, const std::vector<double>& samples);

// -- explicit time stepping ----------------------------------------------------

/// One classical RK4 step. Throws BlowUpError carrying `step_index` when the
/// result is not finite.
Field rk4_step(const std::function<Field(const Field&)>& rhs, const Field& s, double dt,
               long step_index = -1);

/// Generic RK4 over any state with free functions axpy_state(a, s, b).
template <typename State, typename Rhs>
State rk4_step_state(Rhs&& rhs, const State& s, double dt) {
  State k1 = rhs(s);
  State k2 = rhs(axpy_state(s, 0.5 * dt, k1));
  State k3 = rhs(axpy_state(s, 0.5 * dt, k2));
  State k4 = rhs(axpy_state(s, dt, k3));
  State out = axpy_state(s, dt / 6.0, k1);
  out = axpy_state(out, dt / 3.0, k2);
  out = axpy_state(out, dt / 3.0, k3);
  out = axpy_state(out, dt / 6.0, k4);
  return out;
}

/// Spatial-order dependent stable step: dt = c_p h^p with margins
/// c_1 = 0.5, c_2 = 0.2, c_3 = 0.05 (recorded defaults).
double stable_dt(const LineGrid& g, int spatial_order);

// -- group-valued integration ---------------------------------------------------

/// Solves g^-1 g_x = u with g(-L) = g0 by a 4th-order commutator-free
/// exponential scheme with polar reprojection at every sample.
Frame solve_frame(const Field& u, const GroupElement& g0);

/// Discrete log-derivative residual sup_x |g^-1 g_x - u|.
double frame_residual(const Frame& g, const Field& u);

/// Boundary sample plus a flatness report over the trailing 5% of samples.
struct BoundaryLimit {
  Mat value;
  double tail_deviation = 0.0;  // max deviation from the end sample
  bool flat = true;
};
BoundaryLimit limit_at_left(const std::vector<Mat>& values, double tau = tol::decay);
BoundaryLimit limit_at_right(const std::vector<Mat>& values, double tau = tol::decay);

}  // namespace orbitflow
