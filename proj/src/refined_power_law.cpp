#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hbts/correlators.hpp"

namespace hbts {

namespace {

namespace mp = boost::multiprecision;
using Real = mp::number<mp::cpp_bin_float<160>, mp::et_off>;

constexpr int kDigits = 160;
constexpr double kTargetResidual = 1e-145;
constexpr int kMaxIterations = 200;

struct Cx {
  Real re, im;
};

Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
Cx operator*(const Cx& a, const Cx& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
Cx conj(const Cx& a) { return {a.re, -a.im}; }
Real norm2(const Cx& a) { return a.re * a.re + a.im * a.im; }
Cx operator/(const Cx& a, const Cx& b) {
  const Real n = norm2(b);
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
Cx scale(const Cx& a, const Real& s) { return {a.re * s, a.im * s}; }
Cx lift(Complex z) { return {Real(z.real()), Real(z.imag())}; }
Complex lower(const Cx& a) { return {static_cast<double>(a.re), static_cast<double>(a.im)}; }

using Vec = std::vector<Cx>;

struct Dense {
  std::size_t n = 0;
  std::vector<Cx> a;  // row-major
  Cx& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const Cx& operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }
};

Vec multiply(const Dense& m, const Vec& x) {
  Vec y(m.n, Cx{});
  for (std::size_t i = 0; i < m.n; ++i) {
    Cx acc{};
    for (std::size_t j = 0; j < m.n; ++j) acc = acc + m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

Real vnorm(const Vec& x) {
  Real s = 0;
  for (const Cx& v : x) s += norm2(v);
  return mp::sqrt(s);
}

Cx dot(const Vec& x, const Vec& y) {  // <x, y>, conjugate-linear in x
  Cx s{};
  for (std::size_t i = 0; i < x.size(); ++i) s = s + conj(x[i]) * y[i];
  return s;
}

// LU with partial pivoting of A - sigma I.
struct Lu {
  Dense f;
  std::vector<std::size_t> perm;

  Lu(const Dense& a, const Cx& sigma) : f(a), perm(a.n) {
    const std::size_t n = a.n;
    for (std::size_t i = 0; i < n; ++i) {
      perm[i] = i;
      f(i, i) = f(i, i) - sigma;
    }
    const Real floor = mp::pow(Real(10), -(kDigits - 10));
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (norm2(f(i, k)) > norm2(f(p, k))) p = i;
      if (p != k) {
        for (std::size_t j = 0; j < n; ++j) std::swap(f(k, j), f(p, j));
        std::swap(perm[k], perm[p]);
      }
      // An exactly singular pivot means sigma hit the eigenvalue; nudge it.
      if (norm2(f(k, k)) == 0) f(k, k) = Cx{floor, Real(0)};
      for (std::size_t i = k + 1; i < n; ++i) {
        const Cx l = f(i, k) / f(k, k);
        f(i, k) = l;
        for (std::size_t j = k + 1; j < n; ++j) f(i, j) = f(i, j) - l * f(k, j);
      }
    }
  }

  Vec solve(const Vec& b) const {
    const std::size_t n = f.n;
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) {
      Cx s = b[perm[i]];
      for (std::size_t j = 0; j < i; ++j) s = s - f(i, j) * x[j];
      x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
      Cx s = x[i];
      for (std::size_t j = i + 1; j < n; ++j) s = s - f(i, j) * x[j];
      x[i] = s / f(i, i);
    }
    return x;
  }
};

}  // namespace

RefinedPowerLaw refined_power_law(const Channel& ch, const Matrix& delta, Complex kappa, const Matrix& eigenoperator,
                                  int m_max) {
  if (ch.nu_in() != ch.nu_out()) throw ShapeError("power-law test needs a square channel");
  const Eigen::Index side = ch.dim_in();
  if (delta.rows() != side || delta.cols() != side || eigenoperator.rows() != side || eigenoperator.cols() != side)
    throw ShapeError("operators must match the channel's operator space");
  if (m_max < 1) throw ArgumentError("m_max must be at least 1");
  if (std::abs(kappa) == 0.0 || 15.0 - m_max * std::log10(std::abs(kappa)) > kDigits - 20)
    throw UnsupportedRangeError("|kappa|^m_max is below the resolution of the extended format");

  // A = M^dag acts on column-stacked operators.
  const Matrix& m = ch.matrix();
  Dense a;
  a.n = static_cast<std::size_t>(m.rows());
  a.a.resize(a.n * a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j)
      a(i, j) = lift(std::conj(m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i))));

  const Vector yv = vec(eigenoperator);
  Vec y(a.n);
  for (std::size_t i = 0; i < a.n; ++i) y[i] = lift(yv(static_cast<Eigen::Index>(i)));
  {
    const Real ny = vnorm(y);
    if (ny == 0) throw ArgumentError("eigenoperator must be nonzero");
    for (Cx& v : y) v = scale(v, 1 / ny);
  }
  const Vec start = y;

  Cx sigma = lift(kappa);
  Lu lu(a, sigma);
  Cx rho = sigma;
  Real residual = -1;
  RefinedPowerLaw out;
  for (int it = 0; it < kMaxIterations; ++it) {
    Vec z = lu.solve(y);
    const Real nz = vnorm(z);
    for (Cx& v : z) v = scale(v, 1 / nz);
    y = std::move(z);
    const Vec ay = multiply(a, y);
    rho = dot(y, ay);
    Vec r(a.n);
    for (std::size_t i = 0; i < a.n; ++i) r[i] = ay[i] - rho * y[i];
    const Real rn = vnorm(r);
    const bool stalled = residual >= 0 && rn > residual * Real(1e-6);
    residual = rn;
    if (rn < Real(kTargetResidual)) {
      out.converged = true;
      break;
    }
    // Slow progress: another eigenvalue sits close to the shift. Move it to the Rayleigh quotient.
    if (stalled) {
      sigma = rho;
      lu = Lu(a, sigma);
    }
  }
  out.kappa = lower(rho);
  // Inverse iteration loses the phase; restore the one of the input.
  {
    const Cx p = dot(y, start);
    const Real np = mp::sqrt(norm2(p));
    if (np > 0)
      for (Cx& v : y) v = v * scale(p, 1 / np);
  }
  out.refine_residual = static_cast<double>(residual);

  Vec d(a.n);
  const Vector dv = vec(delta);
  for (std::size_t i = 0; i < a.n; ++i) d[i] = lift(dv(static_cast<Eigen::Index>(i)));

  std::vector<Cx> c;
  Vec w = y;
  for (int k = 0; k <= m_max; ++k) {
    if (k > 0) w = multiply(a, w);
    c.push_back(dot(w, d));
    out.values.push_back(lower(c.back()));
  }
  out.overlap = static_cast<double>(mp::sqrt(norm2(c.front())));
  const Cx target = conj(rho);
  Real worst = 0;
  for (int k = 0; k < m_max; ++k) {
    if (norm2(c[static_cast<std::size_t>(k)]) == 0) continue;
    const Cx ratio = c[static_cast<std::size_t>(k) + 1] / c[static_cast<std::size_t>(k)];
    worst = std::max(worst, mp::sqrt(norm2(ratio - target)));
  }
  out.max_ratio_error = static_cast<double>(worst);
  return out;
}

}  // namespace hbts
