#include "hbts/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hbts {

namespace {

void check_two_site(const ChannelSet& cs, const Matrix& x) {
  const Eigen::Index n = dim_of(cs.d, 2);
  if (x.rows() != n || x.cols() != n) throw ShapeError("two-site observable must be d^2 x d^2");
}

Complex log2c(Complex z) {
  if (z == Complex(0.0)) return {-std::numeric_limits<double>::infinity(), 0.0};
  return std::log(z) / std::log(2.0);
}

}  // namespace

Matrix connected_difference(const ThermoLimit& th) { return th.rho2.matrix() - th.eta.matrix(); }

Complex correlator_thermo(const ChannelSet& cs, const ThermoLimit& th, const Matrix& two_site, int m) {
  if (m < 0) throw ArgumentError("m must be non-negative");
  check_two_site(cs, two_site);
  Matrix delta = connected_difference(th);
  for (int i = 0; i < m; ++i) delta = cs.slashed.apply(delta);
  return (two_site * delta).trace();
}

Complex correlator_thermo(const Isometry& lam, const CorrelatorQuery& q, const Tolerances& tol) {
  const ChannelSet cs = build_channel_set(lam, tol.iso);
  if (q.theta.d() != cs.d || q.theta_prime.d() != cs.d) throw ShapeError("observable dimension does not match the isometry");
  const ThermoLimit th = solve_thermo(cs, tol);
  return correlator_thermo(cs, th, kron(q.theta.matrix(), q.theta_prime.matrix()), q.m);
}

Complex correlator_heisenberg(const ChannelSet& cs, const ThermoLimit& th, const Matrix& two_site, int m) {
  if (m < 0) throw ArgumentError("m must be non-negative");
  check_two_site(cs, two_site);
  const AdjointChannel a = adjoint(cs.slashed);
  Matrix y = two_site.adjoint();
  for (int i = 0; i < m; ++i) y = a.apply(y);
  return (y.adjoint() * connected_difference(th)).trace();
}

std::vector<Complex> correlator_values(const ChannelSet& cs, const ThermoLimit& th, const Matrix& two_site, int m_max) {
  if (m_max < 0) throw ArgumentError("m_max must be non-negative");
  check_two_site(cs, two_site);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(m_max + 1));
  Matrix delta = connected_difference(th);
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) delta = cs.slashed.apply(delta);
    out.push_back((two_site * delta).trace());
  }
  return out;
}

std::vector<Complex> correlator_values_heisenberg(const ChannelSet& cs, const ThermoLimit& th, const Matrix& two_site,
                                                 int m_max) {
  if (m_max < 0) throw ArgumentError("m_max must be non-negative");
  check_two_site(cs, two_site);
  const AdjointChannel a = adjoint(cs.slashed);
  const Matrix delta = connected_difference(th);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(m_max + 1));
  Matrix y = two_site.adjoint();
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) y = a.apply(y);
    out.push_back((y.adjoint() * delta).trace());
  }
  return out;
}

SpectrumReport adjoint_spectrum(const Channel& ch, const SpectrumOptions& opt) {
  if (ch.nu_in() != ch.nu_out()) throw ShapeError("spectrum needs a square channel");
  const Matrix a = ch.matrix().adjoint();
  const Eigen::Index n = a.rows();
  Eigen::ComplexEigenSolver<Matrix> es(a, false);
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::stable_sort(ev.begin(), ev.end(), [](Complex x, Complex y) { return std::abs(x) > std::abs(y); });

  std::vector<std::vector<Complex>> clusters;
  for (Complex z : ev) {
    auto it = std::find_if(clusters.begin(), clusters.end(),
                           [&](const std::vector<Complex>& c) { return std::abs(c.front() - z) < opt.cluster; });
    if (it == clusters.end())
      clusters.push_back({z});
    else
      it->push_back(z);
  }

  SpectrumReport rep;
  const Eigen::Index side = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  for (const auto& c : clusters) {
    Complex mean = 0.0;
    for (Complex z : c) mean += z;
    mean /= static_cast<double>(c.size());
    if (std::abs(mean.imag()) < opt.cluster * 1e-3) mean.imag(0.0);
    if (std::abs(mean) < opt.cluster * 1e-3) mean = 0.0;

    const Matrix shifted = a - mean * Matrix::Identity(n, n);
    Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    const double cut = opt.rank * std::max(1.0, sv(0));
    SpectrumEntry e;
    e.kappa = mean;
    e.exponent = log2c(mean);
    e.algebraic = static_cast<int>(c.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      if (sv(i) > cut) continue;
      ++e.geometric;
      e.eigenoperators.push_back(unvec(svd.matrixV().col(i), side));
    }
    if (e.geometric < e.algebraic) rep.diagonalizable = false;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

SpectrumReport exponent_spectrum(const Isometry& lam, const SpectrumOptions& opt) {
  return adjoint_spectrum(build_slashed(lam), opt);
}

CorrelatorSeries analyze_series(std::span<const Complex> values, int m_first, Complex prefactor,
                                const SpectrumReport* spectrum) {
  if (m_first < 0) throw ArgumentError("m must be non-negative");
  CorrelatorSeries s;
  s.prefactor = prefactor;
  s.values.assign(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) s.delta_alpha.push_back(1LL << (m_first + static_cast<int>(i)));

  s.degenerate = std::all_of(values.begin(), values.end(), [](Complex v) { return std::abs(v) < kDegenerateSeries; });
  if (s.degenerate || values.size() < 2) return s;

  bool finite = true;
  std::vector<Complex> ratios;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    if (std::abs(values[i]) < kDegenerateSeries) {
      finite = false;
      break;
    }
    ratios.push_back(values[i + 1] / values[i]);
  }
  if (finite) {
    Complex mean = 0.0;
    for (Complex r : ratios) mean += r;
    mean /= static_cast<double>(ratios.size());
    for (Complex r : ratios) s.max_ratio_error = std::max(s.max_ratio_error, std::abs(r - mean));
    s.kappa = mean;
    s.exponent = log2c(mean);
    s.geometric = s.max_ratio_error <= kRatioTolerance * std::max(1.0, std::abs(mean));
  }

  if (spectrum == nullptr) return s;

  // Basis kappa^m m^j per cluster; a nilpotent cluster contributes only for m < its block size.
  struct Column {
    std::size_t entry;
    int power;
    bool nilpotent;
  };
  std::vector<Column> cols;
  for (std::size_t k = 0; k < spectrum->entries.size(); ++k) {
    const SpectrumEntry& e = spectrum->entries[k];
    const int deg = e.algebraic - e.geometric;
    const bool nil = std::abs(e.kappa) < 1e-12;
    for (int j = 0; j <= deg; ++j) cols.push_back({k, j, nil});
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(values.size());
  Matrix basis = Matrix::Zero(rows, static_cast<Eigen::Index>(cols.size()));
  Vector rhs(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const int m = m_first + static_cast<int>(r);
    rhs(r) = values[static_cast<std::size_t>(r)];
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const Complex kappa = spectrum->entries[cols[c].entry].kappa;
      Complex v;
      if (cols[c].nilpotent)
        v = m == cols[c].power ? 1.0 : 0.0;
      else
        v = std::pow(kappa, m) * std::pow(static_cast<double>(m), cols[c].power);
      basis(r, static_cast<Eigen::Index>(c)) = v;
    }
  }
  const Vector coef = basis.completeOrthogonalDecomposition().solve(rhs);
  s.fit_residual = (basis * coef - rhs).cwiseAbs().maxCoeff();

  double scale = 0.0;
  for (Complex v : values) scale = std::max(scale, std::abs(v));
  const double negligible = 1e-10 * scale;
  for (std::size_t k = 0; k < spectrum->entries.size(); ++k) {
    SpectralTerm t;
    t.kappa = spectrum->entries[k].kappa;
    bool significant = false;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c].entry != k) continue;
      const Complex v = coef(static_cast<Eigen::Index>(c));
      t.coefficients.push_back(v);
      if (std::abs(v) > negligible) {
        significant = true;
        if (cols[c].power > 0 && !cols[c].nilpotent) t.degree = std::max(t.degree, cols[c].power);
      }
    }
    if (!significant) continue;
    if (t.degree > 0) s.log_corrections = true;
    s.terms.push_back(std::move(t));
  }
  return s;
}

CorrelatorSeries powerlaw_check(const Isometry& lam, const Matrix& two_site, int m_min, int m_max,
                                const Tolerances& tol) {
  if (m_min < 0 || m_max < m_min) throw ArgumentError("need 0 <= m_min <= m_max");
  if (m_max > 62) throw UnsupportedRangeError("distance 2^m overflows for m > 62");
  const ChannelSet cs = build_channel_set(lam, tol.iso);
  check_two_site(cs, two_site);
  const ThermoLimit th = solve_thermo(cs, tol);
  const std::vector<Complex> all = correlator_values_heisenberg(cs, th, two_site, m_max);
  const SpectrumReport spec = adjoint_spectrum(cs.slashed);
  CorrelatorSeries s = analyze_series(std::span<const Complex>(all).subspan(static_cast<std::size_t>(m_min)), m_min,
                                      all.front(), &spec);

  // C_m = <A^m(X^dag), delta>, so A(X^dag) = mu X^dag gives C_m = conj(mu)^m C_0.
  const Matrix y = two_site.adjoint();
  const Matrix ay = adjoint(cs.slashed).apply(y);
  const double ny = y.norm();
  if (ny > 0.0) {
    const Complex mu = (y.adjoint() * ay).trace() / (ny * ny);
    s.eigen_residual = (ay - mu * y).norm() / ny;
    s.eigenoperator = s.eigen_residual <= kEigenoperatorTolerance;
    if (s.eigenoperator && !s.geometric && !s.degenerate) {
      s.kappa = std::conj(mu);
      s.exponent = log2c(s.kappa);
    }
  }
  return s;
}

CorrelatorSeries powerlaw_check(const Isometry& lam, const Observable& theta, const Observable& theta_prime,
                                int m_min, int m_max, const Tolerances& tol) {
  if (theta.d() != lam.d() || theta_prime.d() != lam.d())
    throw ShapeError("observable dimension does not match the isometry");
  return powerlaw_check(lam, kron(theta.matrix(), theta_prime.matrix()), m_min, m_max, tol);
}

}  // namespace hbts
