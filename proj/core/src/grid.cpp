#include "orbitflow/grid.hpp"

#include <cmath>

namespace orbitflow {

void check_grid(const LineGrid& g) {
  if (g.N < 16) throw StructuralError("grid: N must be at least 16");
  if (!(g.L > 0)) throw StructuralError("grid: L must be positive");
}

double Field::sup_norm() const {
  double s = 0.0;
  for (const Mat& v : values) s = std::max(s, norm_alg(v));
  return s;
}

bool Field::all_finite() const {
  for (const Mat& v : values)
    if (!v.allFinite()) return false;
  return true;
}

Field make_field(const LineGrid& g, const AlgebraTag& tag,
                 const std::function<Mat(double)>& f, DecayClass decay) {
  check_grid(g);
  Field out(g, tag, decay);
  for (int i = 0; i < g.N; ++i) out.values[i] = f(g.x(i));
  // only claim decay the samples actually exhibit
  if (decay == DecayClass::decaying &&
      std::max(norm_alg(out.values.front()), norm_alg(out.values.back())) >= tol::decay)
    out.decay = DecayClass::free_form;
  return out;
}

void check_field(const Field& f, double tau_decay) {
  check_grid(f.grid);
  if (f.size() != f.grid.N) throw StructuralError("field: sample count != grid.N");
  const int d = f.tag.matrix_dim();
  for (const Mat& v : f.values)
    if (v.rows() != d || v.cols() != d) throw StructuralError("field: sample shape mismatch");
  if (!f.all_finite()) throw StructuralError("field: non-finite samples");
  if (f.decay == DecayClass::decaying) {
    const double b = std::max(norm_alg(f.values.front()), norm_alg(f.values.back()));
    if (b >= tau_decay)
      throw StructuralError("field: declared decaying but boundary norm is " + std::to_string(b));
  }
}

double sup_distance(const Field& f, const Field& g) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) s = std::max(s, norm_alg(f.values[i] - g.values[i]));
  return s;
}

void require_layout(const Field& a, const Field& b, const char* op) {
  if (!(a.grid == b.grid) || a.tag != b.tag)
    throw StructuralError(std::string(op) + ": grid or tag mismatch");
}

Field operator+(const Field& a, const Field& b) {
  require_layout(a, b, "field +");
  Field out = a;
  for (int i = 0; i < out.size(); ++i) out.values[i] += b.values[i];
  out.decay = DecayClass::free_form;
  return out;
}

Field operator-(const Field& a, const Field& b) {
  require_layout(a, b, "field -");
  Field out = a;
  for (int i = 0; i < out.size(); ++i) out.values[i] -= b.values[i];
  out.decay = DecayClass::free_form;
  return out;
}

Field operator*(double s, const Field& a) {
  Field out = a;
  for (auto& v : out.values) v *= s;
  return out;
}

Field axpy(const Field& a, double s, const Field& b) {
  require_layout(a, b, "field axpy");
  Field out = a;
  for (int i = 0; i < out.size(); ++i) out.values[i] += s * b.values[i];
  return out;
}

Field bracket_field(const Field& a, const Field& b) {
  require_layout(a, b, "bracket_field");
  Field out(a.grid, a.tag, DecayClass::free_form);
  for (int i = 0; i < out.size(); ++i) out.values[i] = bracket_m(a.values[i], b.values[i]);
  return out;
}

CurveDefect curve_defect(const Curve& c) {
  CurveDefect d;
  Eigen::VectorXd ref = spectrum_imag(c.base.m);
  for (const Mat& v : c.field.values) {
    Eigen::VectorXd s = spectrum_imag(v);
    d.spectrum = std::max(d.spectrum, (s - ref).cwiseAbs().maxCoeff());
  }
  d.left_pin = norm_alg(c.field.values.front() - c.base.m);
  return d;
}

void check_curve(const Curve& c, double tau_orbit, double tau_decay) {
  check_field(c.field, tau_decay);
  if (c.field.tag != c.base.tag) throw StructuralError("curve: base tag mismatch");
  CurveDefect d = curve_defect(c);
  if (d.spectrum > tau_orbit)
    throw StructuralError("curve: spectrum drift " + std::to_string(d.spectrum));
  if (d.left_pin > tau_decay)
    throw StructuralError("curve: left end not pinned, " + std::to_string(d.left_pin));
}

// -- stencils -------------------------------------------------------------------

std::vector<double> fd_weights(double z, int w, int m) {
  // Fornberg (1988), nodes 0..w-1, unit spacing, evaluation point z.
  std::vector<std::vector<double>> c(w, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0;
  double c4 = 0.0 - z;
  c[0][0] = 1.0;
  for (int i = 1; i < w; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    double c5 = c4;
    c4 = double(i) - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = double(i - j);
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> out(w);
  for (int i = 0; i < w; ++i) out[i] = c[i][m];
  return out;
}

Field derivative(const Field& f, int order) {
  Field out(f.grid, f.tag, DecayClass::free_form);
  out.values = apply_derivative(f.grid, f.values, order);
  return out;
}

Field antiderivative_from_left(const Field& f) {
  Field out(f.grid, f.tag, DecayClass::free_form);
  out.values = apply_antiderivative(f.grid, f.values);
  return out;
}

double integrate_line(const LineGrid& g, const std::vector<double>& samples) {
  std::vector<double> cum = apply_antiderivative(g, samples);
  return cum.back();
}

Field rk4_step(const std::function<Field(const Field&)>& rhs, const Field& s, double dt,
               long step_index) {
  Field k1 = rhs(s);
  Field k2 = rhs(axpy(s, 0.5 * dt, k1));
  Field k3 = rhs(axpy(s, 0.5 * dt, k2));
  Field k4 = rhs(axpy(s, dt, k3));
  Field out = axpy(s, dt / 6.0, k1);
  out = axpy(out, dt / 3.0, k2);
  out = axpy(out, dt / 3.0, k3);
  out = axpy(out, dt / 6.0, k4);
  if (!out.all_finite()) throw BlowUpError("rk4_step: non-finite state", step_index);
  return out;
}

double stable_dt(const LineGrid& g, int spatial_order) {
  const double h = g.h();
  switch (spatial_order) {
    case 1: return 0.5 * h;
    case 2: return 0.2 * h * h;
    case 3: return 0.05 * h * h * h;
    default: throw DomainError("stable_dt: spatial order must be 1, 2 or 3");
  }
}

// -- frames ----------------------------------------------------------------------

namespace {

// values of u at x_s + z*h from the cubic through samples s..s+3
Mat interpolate4(const std::vector<Mat>& v, int s, const std::vector<double>& w) {
  Mat acc = w[0] * v[s];
  for (int k = 1; k < 4; ++k) acc += w[k] * v[s + k];
  return acc;
}

}  // namespace

Frame solve_frame(const Field& u, const GroupElement& g0) {
  check_field(u);
  if (u.tag != g0.tag) throw StructuralError("solve_frame: tag mismatch");
  const int N = u.grid.N;
  const double h = u.grid.h();
  const double sqrt3 = std::sqrt(3.0);
  const double c1 = 0.5 - sqrt3 / 6.0, c2 = 0.5 + sqrt3 / 6.0;
  const double a1 = 0.25 + sqrt3 / 6.0, a2 = 0.25 - sqrt3 / 6.0;

  Frame g(u.grid, u.tag);
  g.values[0] = project_to_group(u.tag, g0.m);
  for (int i = 0; i + 1 < N; ++i) {
    int s = i - 1;
    if (s < 0) s = 0;
    if (s > N - 4) s = N - 4;
    const double z = double(i - s);
    Mat u1 = interpolate4(u.values, s, fd_weights(z + c1, 4, 0));
    Mat u2 = interpolate4(u.values, s, fd_weights(z + c2, 4, 0));
    Mat e_first = expm_antihermitian(h * (a1 * u1 + a2 * u2));
    Mat e_second = expm_antihermitian(h * (a2 * u1 + a1 * u2));
    g.values[i + 1] = project_to_group(u.tag, g.values[i] * e_first * e_second);
  }
  return g;
}

double frame_residual(const Frame& g, const Field& u) {
  std::vector<Mat> gx = apply_derivative(g.grid, g.values, 1);
  double r = 0.0;
  for (int i = 0; i < g.size(); ++i)
    r = std::max(r, norm_alg(g.values[i].adjoint() * gx[i] - u.values[i]));
  return r;
}

static BoundaryLimit tail_limit(const std::vector<Mat>& values, bool left, double tau) {
  BoundaryLimit out;
  const int N = static_cast<int>(values.size());
  const int tail = std::max(2, N / 20);
  const Mat& end = left ? values.front() : values.back();
  out.value = end;
  for (int k = 0; k < tail; ++k) {
    const Mat& v = left ? values[k] : values[N - 1 - k];
    out.tail_deviation = std::max(out.tail_deviation, (v - end).cwiseAbs().maxCoeff());
  }
  out.flat = out.tail_deviation < tau;
  return out;
}

BoundaryLimit limit_at_left(const std::vector<Mat>& values, double tau) {
  return tail_limit(values, true, tau);
}

BoundaryLimit limit_at_right(const std::vector<Mat>& values, double tau) {
  return tail_limit(values, false, tau);
}

}  // namespace orbitflow
