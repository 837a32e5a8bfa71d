#pragma once

#include <random>

#include "orbitflow/hierarchy.hpp"

namespace orbitflow {

/// Shared deterministic fixtures for tests, verification, and benchmarks.
namespace fixtures {

/// a = diag(i, -i)/2 in su(2).
inline AlgebraElement su2_a() {
  AlgebraTag tag{Family::su, 2};
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = Complex(0, 0.5);
  a(1, 1) = Complex(0, -0.5);
  return {tag, a};
}

/// u = [[0, q], [-conj(q), 0]] from a scalar complex sample.
inline Mat su2_from_q(Complex q) {
  Mat u = Mat::Zero(2, 2);
  u(0, 1) = q;
  u(1, 0) = -std::conj(q);
  return u;
}

inline Complex su2_to_q(const Mat& u) { return u(0, 1); }

/// q(x) = amp * sech(x - x0) as an su(2) phase point.
inline Field su2_sech(const LineGrid& g, double amp = 0.5, double x0 = 0.0) {
  AlgebraTag tag{Family::su, 2};
  return make_field(g, tag, [amp, x0](double x) { return su2_from_q(amp / std::cosh(x - x0)); });
}

/// Regular diagonal base point diag(i*alpha_k) in u(n).
inline AlgebraElement un_diag(const std::vector<double>& alpha) {
  const int n = static_cast<int>(alpha.size());
  AlgebraTag tag{Family::u, n};
  Mat a = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = Complex(0, alpha[i]);
  return {tag, a};
}

/// Decaying off-diagonal u(n) field: Gaussian bumps in every off-diagonal slot.
inline Field un_offdiag_bumps(const LineGrid& g, int n, double amp, unsigned seed) {
  AlgebraTag tag{Family::u, n};
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> center(-4.0, 4.0);
  std::uniform_real_distribution<double> width(1.2, 2.5);
  std::uniform_real_distribution<double> phase(0.0, 6.28318530717958648);
  struct Bump {
    double c, w, ph, amp;
  };
  std::vector<std::vector<Bump>> bumps(n * n);
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c)
      bumps[r * n + c] = {{center(gen), width(gen), phase(gen), amp}};
  return make_field(g, tag, [n, bumps](double x) {
    Mat m = Mat::Zero(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) {
        const auto& b = bumps[r * n + c].front();
        Complex v = b.amp * std::exp(-((x - b.c) * (x - b.c)) / (b.w * b.w)) *
                    std::exp(Complex(0, b.ph));
        m(r, c) = v;
        m(c, r) = -std::conj(v);
      }
    return m;
  });
}

/// Smooth compactly-supported scalar bump profile.
inline double bump(double x, double center, double w) {
  return std::exp(-((x - center) * (x - center)) / (w * w));
}

/// Random decaying field in U_a^perp built from Gaussian bumps along a basis
/// of the orthogonal complement.
inline Field perp_bumps(const CentralizerData& cd, const LineGrid& g, double amp,
                        unsigned seed) {
  const AlgebraTag tag = cd.tag();
  const auto& basis = algebra_basis(tag);
  std::vector<Mat> perp;
  for (const Mat& e : basis) {
    Mat p = cd.pi1(e);
    if (norm_alg(p) > 0.5) perp.push_back(p / norm_alg(p));
  }
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> center(-4.0, 4.0);
  std::uniform_real_distribution<double> width(1.3, 2.6);
  std::uniform_real_distribution<double> scale(0.4, 1.0);
  std::vector<double> cs, ws, ss;
  for (size_t i = 0; i < perp.size(); ++i) {
    cs.push_back(center(gen));
    ws.push_back(width(gen));
    ss.push_back(scale(gen) * amp);
  }
  Field out = make_field(g, tag, [&](double x) {
    Mat m = Mat::Zero(tag.matrix_dim(), tag.matrix_dim());
    for (size_t i = 0; i < perp.size(); ++i) m += ss[i] * bump(x, cs[i], ws[i]) * perp[i];
    return m;
  });
  // clean any centralizer residue from the basis projections
  for (auto& v : out.values) v = cd.pi1(v);
  return out;
}

/// Tangent field [w, gamma] from a bump-profiled w; vanishes at both ends.
inline Field tangent_bumps(const Curve& gamma, double amp, unsigned seed) {
  const AlgebraTag tag = gamma.field.tag;
  const auto& basis = algebra_basis(tag);
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> center(-4.0, 4.0);
  std::uniform_real_distribution<double> width(1.5, 3.0);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(basis.size()) - 1);
  const int terms = 3;
  std::vector<Mat> dirs;
  std::vector<double> cs, ws;
  for (int i = 0; i < terms; ++i) {
    dirs.push_back(basis[pick(gen)]);
    cs.push_back(center(gen));
    ws.push_back(width(gen));
  }
  Field out(gamma.field.grid, tag, DecayClass::free_form);
  for (int i = 0; i < out.size(); ++i) {
    const double x = gamma.field.grid.x(i);
    Mat w = Mat::Zero(tag.matrix_dim(), tag.matrix_dim());
    for (int m = 0; m < terms; ++m) w += amp * bump(x, cs[m], ws[m]) * dirs[m];
    out.values[i] = bracket_m(w, gamma.field.values[i]);
  }
  return out;
}

}  // namespace fixtures
}  // namespace orbitflow
