#include "hbts/thermo.hpp"

#include <algorithm>
#include <cmath>

namespace hbts {

FixedPointResult fixed_point(const Channel& ch, const Tolerances& tol) {
  if (ch.nu_in() != ch.nu_out()) throw ShapeError("fixed point needs a square channel");
  Eigen::ComplexEigenSolver<Matrix> es(ch.matrix(), true);
  const auto& ev = es.eigenvalues();

  Eigen::Index unit = 0;
  double best = std::abs(ev(0) - 1.0);
  int multiplicity = 0;
  bool other_peripheral = false;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double dist = std::abs(ev(i) - 1.0);
    if (dist < best) {
      best = dist;
      unit = i;
    }
    if (dist <= tol.spec)
      ++multiplicity;
    else if (std::abs(ev(i)) >= 1.0 - tol.spec)
      other_peripheral = true;
  }
  if (multiplicity != 1)
    throw DegenerateFixedPointError(
        "channel has " + std::to_string(multiplicity) + " eigenvalues within " + std::to_string(tol.spec) + " of 1",
        multiplicity);

  Matrix rho = unvec(es.eigenvectors().col(unit), ch.dim_in());
  rho /= rho.trace();
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();

  FixedPointResult out{DensityOp(ch.d(), ch.nu_in(), rho, "fixed point"), 0.0, multiplicity, !other_peripheral, {}};
  out.residual = max_abs(ch.apply(rho) - rho);
  out.spectrum.assign(ev.data(), ev.data() + ev.size());
  std::stable_sort(out.spectrum.begin(), out.spectrum.end(),
                   [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
  return out;
}

Matrix halved_geometric_series(const Channel& m, const Matrix& rhs) {
  if (m.nu_in() != m.nu_out()) throw ShapeError("series needs a square channel");
  const Eigen::Index n2 = m.matrix().rows();
  const Matrix system = Matrix::Identity(n2, n2) - 0.5 * m.matrix();
  // Spectral radius of m is at most 1, so the system is nonsingular.
  const Vector x = system.partialPivLu().solve(0.5 * vec(rhs));
  return unvec(x, m.dim_in());
}

namespace {

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_mixing(const FixedPointResult& fp, const char* which) {
  if (!fp.mixing)
    throw DegenerateFixedPointError(std::string(which) + " has peripheral eigenvalues besides 1; the limit is not unique",
                                    fp.unit_eigenvalue_multiplicity);
}

}  // namespace

ThermoLimit solve_thermo(const ChannelSet& cs, const Tolerances& tol) {
  FixedPointResult single = fixed_point(cs.descend, tol);
  require_mixing(single, "single-site descending channel");
  FixedPointResult pair = fixed_point(cs.slashed, tol);
  require_mixing(pair, "pair descending channel");

  const Matrix& rho1 = single.state.matrix();
  Matrix rho2 = hermitize(halved_geometric_series(cs.right_left, cs.growth.apply(rho1)));
  Matrix eta = hermitize(halved_geometric_series(cs.right_left, cs.left_right.apply(pair.state.matrix())));

  DensityOp r1(cs.d, 1, rho1, "thermodynamic");
  DensityOp r2(cs.d, 2, std::move(rho2), "thermodynamic");
  DensityOp e(cs.d, 2, std::move(eta), "thermodynamic product of marginals");
  return ThermoLimit{std::move(single), std::move(pair), std::move(r1), std::move(r2), std::move(e)};
}

DensityOp rho2_infinity(const Isometry& lam, const Tolerances& tol) {
  return solve_thermo(build_channel_set(lam, tol.iso), tol).rho2;
}

DensityOp eta_infinity(const Isometry& lam, const Tolerances& tol) {
  return solve_thermo(build_channel_set(lam, tol.iso), tol).eta;
}

DensityOp rho_nu_infinity(const ChannelSet& cs, const ThermoLimit& th, int nu) {
  switch (nu) {
    case 1: return th.rho1;
    case 2: return th.rho2;
    case 3:
    case 4: {
      const ExtensionParts parts = build_extension_parts(cs);
      return DensityOp(cs.d, nu, hermitize(apply_extension(parts, th.rho2.matrix(), nu)), "thermodynamic");
    }
    default: throw UnsupportedRangeError("thermodynamic states are available for nu = 1..4");
  }
}

DensityOp rho_nu_infinity(const Isometry& lam, int nu, const Tolerances& tol) {
  if (nu < 1 || nu > 4) throw UnsupportedRangeError("thermodynamic states are available for nu = 1..4");
  const ChannelSet cs = build_channel_set(lam, tol.iso);
  if (nu == 1) {
    FixedPointResult fp = fixed_point(cs.descend, tol);
    return DensityOp(cs.d, 1, fp.state.matrix(), "thermodynamic");
  }
  return rho_nu_infinity(cs, solve_thermo(cs, tol), nu);
}

double rho2_self_consistency(const ChannelSet& cs, const Matrix& rho2, const Matrix& rho1) {
  return max_abs(rho2 - 0.5 * cs.right_left.apply(rho2) - 0.5 * cs.growth.apply(rho1));
}

double marginal_residual(const DensityOp& rho_nu, const Matrix& rho1) {
  double worst = 0.0;
  for (int s = 0; s < rho_nu.nu(); ++s) {
    const int keep[] = {s};
    worst = std::max(worst, max_abs(partial_trace(rho_nu.matrix(), rho_nu.d(), rho_nu.nu(), keep) - rho1));
  }
  return worst;
}

ThermoReport thermo_report(const Isometry& lam, int nu, const Tolerances& tol) {
  if (nu < 1 || nu > 4) throw UnsupportedRangeError("thermodynamic states are available for nu = 1..4");
  const ChannelSet cs = build_channel_set(lam, tol.iso);
  ThermoReport r{nu, 0, {}, 0.0, false, DensityOp(cs.d, 1, Matrix::Identity(cs.d, cs.d))};
  if (nu == 1) {
    FixedPointResult fp = fixed_point(cs.descend, tol);
    r.residual = fp.residual;
    r.mixing = fp.mixing;
    r.state = DensityOp(cs.d, 1, fp.state.matrix(), "thermodynamic");
  } else {
    const ThermoLimit th = solve_thermo(cs, tol);
    r.mixing = th.single_site.mixing && th.slashed.mixing;
    r.state = rho_nu_infinity(cs, th, nu);
    r.residual = nu == 2 ? rho2_self_consistency(cs, th.rho2.matrix(), th.rho1.matrix())
                         : marginal_residual(r.state, th.rho1.matrix());
  }
  r.rank = numerical_rank(r.state, tol.rank);
  const RealVector ev = hermitian_eigenvalues(r.state.matrix());
  r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  return r;
}

}  // namespace hbts
