#include "hbts/parent_ham.hpp"

#include <algorithm>
#include <cmath>

#include "hbts/lattice.hpp"

namespace hbts {

Matrix kernel_basis(const Matrix& rho, double tau) {
  if (rho.rows() != rho.cols()) throw ShapeError("kernel_basis needs a square matrix");
  if (!is_hermitian(rho)) throw ValidationError("kernel_basis needs a Hermitian operator", max_abs(rho - rho.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
  const RealVector& ev = es.eigenvalues();
  const double cut = tau * std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  Eigen::Index count = 0;
  while (count < ev.size() && ev(count) <= cut) ++count;
  return es.eigenvectors().leftCols(count);
}

Matrix kernel_basis(const DensityOp& rho, double tau) { return kernel_basis(rho.matrix(), tau); }

HamiltonianSpec interaction_from_kernel(int d, int nu, const Matrix& kernel, const KernelWeights& weights) {
  const Eigen::Index dim = dim_of(d, nu);
  if (kernel.rows() != dim) throw ShapeError("kernel vectors must have length d^nu");
  const auto k = static_cast<std::size_t>(kernel.cols());
  std::vector<double> e = weights.values.empty() ? std::vector<double>(k, 1.0) : weights.values;
  if (e.size() != k)
    throw ArgumentError("got " + std::to_string(e.size()) + " weights for " + std::to_string(k) + " kernel vectors");
  for (double w : e)
    if (!(w > 0.0)) throw ArgumentError("kernel weights must be strictly positive");

  RealVector ew(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) ew(static_cast<Eigen::Index>(i)) = e[i];
  Matrix h = kernel * ew.cast<Complex>().asDiagonal() * kernel.adjoint();
  h = 0.5 * (h + h.adjoint());
  return HamiltonianSpec{d, nu, std::move(h), kernel, static_cast<int>(k), std::move(e), true};
}

HamiltonianSpec build_interaction(const Isometry& lam, const KernelWeights& weights, int nu, const Tolerances& tol) {
  if (nu != kAutoRange && (nu < 2 || nu > 4)) throw UnsupportedRangeError("interaction range must be 2, 3 or 4");
  const ChannelSet cs = build_channel_set(lam, tol.iso);
  const ThermoLimit th = solve_thermo(cs, tol);
  const int lo = nu == kAutoRange ? 2 : nu;
  const int hi = nu == kAutoRange ? 4 : nu;
  for (int r = lo; r <= hi; ++r) {
    const DensityOp rho = rho_nu_infinity(cs, th, r);
    Matrix kernel = kernel_basis(rho, tol.rank);
    if (kernel.cols() == 0) {
      if (nu == kAutoRange) continue;
      throw ArgumentError("the " + std::to_string(r) + "-site limit state has full rank; no parent term at this range");
    }
    return interaction_from_kernel(cs.d, r, kernel, weights);
  }
  throw ImpossibleByTheoryError("no limit state up to four sites has a kernel; check the rank tolerance");
}

Matrix assemble(const HamiltonianSpec& hs, int n_sites, std::uint64_t max_dim) {
  const int d = hs.d;
  const int nu = hs.nu;
  if (n_sites < nu) throw ArgumentError("lattice must have at least nu sites");
  const Eigen::Index w = dim_of(d, nu);
  if (hs.h_term.rows() != w || hs.h_term.cols() != w) throw ShapeError("interaction term must be d^nu x d^nu");
  long double need = 1.0L;
  for (int i = 0; i < n_sites; ++i) need *= d;
  if (need > static_cast<long double>(max_dim))
    throw ResourceError("d^N = " + std::to_string(static_cast<unsigned long long>(need)) + " exceeds the ED budget of " +
                            std::to_string(max_dim),
                        need > 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(need));

  const Eigen::Index dim = dim_of(d, n_sites);
  std::vector<Eigen::Index> place(static_cast<std::size_t>(n_sites));
  for (int s = 0; s < n_sites; ++s) place[static_cast<std::size_t>(s)] = dim_of(d, n_sites - 1 - s);

  Matrix h = Matrix::Zero(dim, dim);
  const double scale = hs.normalized ? 1.0 / n_sites : 1.0;
  const Matrix term = scale * hs.h_term;
  std::vector<Eigen::Index> off(static_cast<std::size_t>(w));
  std::vector<Eigen::Index> sites(static_cast<std::size_t>(nu));
  for (int alpha = 0; alpha < n_sites; ++alpha) {
    for (int k = 0; k < nu; ++k) sites[static_cast<std::size_t>(k)] = place[static_cast<std::size_t>((alpha + k) % n_sites)];
    for (Eigen::Index x = 0; x < w; ++x) {
      Eigen::Index rest = x;
      Eigen::Index o = 0;
      for (int k = nu - 1; k >= 0; --k) {
        o += (rest % d) * sites[static_cast<std::size_t>(k)];
        rest /= d;
      }
      off[static_cast<std::size_t>(x)] = o;
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      Eigen::Index local = 0;
      Eigen::Index base = i;
      for (int k = 0; k < nu; ++k) {
        const Eigen::Index digit = (i / sites[static_cast<std::size_t>(k)]) % d;
        local = local * d + digit;
        base -= digit * sites[static_cast<std::size_t>(k)];
      }
      for (Eigen::Index x = 0; x < w; ++x) {
        const Complex v = term(x, local);
        if (v != Complex(0.0)) h(base + off[static_cast<std::size_t>(x)], i) += v;
      }
    }
  }
  return h;
}

Histogram energy_histogram(std::span<const double> values, int bins) {
  if (bins < 1) throw ArgumentError("histogram needs at least one bin");
  Histogram out;
  out.counts.assign(static_cast<std::size_t>(bins), 0);
  for (int i = 0; i <= bins; ++i) out.edges.push_back(static_cast<double>(i) / bins);
  double top = 0.0;
  for (double v : values) top = std::max(top, v);
  for (double v : values) {
    const double x = top > 0.0 ? std::clamp(v / top, 0.0, 1.0) : 0.0;
    const int idx = std::min(bins - 1, static_cast<int>(x * bins));
    ++out.counts[static_cast<std::size_t>(idx)];
  }
  return out;
}

GroundSpaceReport diagonalize(const Matrix& h, double tau_gs, int bins, bool keep_ground_space) {
  if (h.rows() != h.cols()) throw ShapeError("Hamiltonian must be square");
  if (!is_hermitian(h)) throw ValidationError("Hamiltonian is not Hermitian", max_abs(h - h.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, keep_ground_space ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  GroundSpaceReport r;
  r.tau_gs = tau_gs;
  r.spectrum.assign(ev.data(), ev.data() + ev.size());
  r.ground_energy = r.spectrum.front();
  r.degeneracy = static_cast<int>(
      std::count_if(r.spectrum.begin(), r.spectrum.end(), [&](double e) { return e <= r.ground_energy + tau_gs; }));
  r.histogram = energy_histogram(r.spectrum, bins);
  if (keep_ground_space) r.ground_space = es.eigenvectors().leftCols(r.degeneracy);
  return r;
}

namespace {

int column_rank(const Matrix& m, double tau) {
  if (m.cols() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const RealVector& sv = svd.singularValues();
  const double cut = tau * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

}  // namespace

SubspaceReport grown_subspace_check(const Isometry& lam, const HamiltonianSpec& hs, int n_sites, const Tolerances& tol,
                                    std::uint64_t max_dim) {
  if (n_sites < 2 || n_sites % 2 != 0) throw ArgumentError("the grown subspace is defined for even N only");
  if (lam.d() != hs.d) throw ShapeError("isometry and interaction have different site dimension");
  require_isometry(lam, tol.iso);
  const Matrix h = assemble(hs, n_sites, max_dim);
  const int d = hs.d;
  const int half = n_sites / 2;
  const Eigen::Index dim = dim_of(d, n_sites);
  const Eigen::Index count = dim_of(d, half);

  Matrix grown(dim, count);
  Matrix translated(dim, count);
  for (Eigen::Index j = 0; j < count; ++j) {
    lattice::State seed(static_cast<std::size_t>(count), Complex(0.0));
    seed[static_cast<std::size_t>(j)] = 1.0;
    const lattice::State phi = lattice::grow_all(lam.matrix(), seed, d, half);
    const lattice::State tphi = lattice::translate(phi, d, n_sites);
    grown.col(j) = Eigen::Map<const Vector>(phi.data(), dim);
    translated.col(j) = Eigen::Map<const Vector>(tphi.data(), dim);
  }

  SubspaceReport r;
  r.n_sites = n_sites;
  r.dim_grown = column_rank(grown, tol.rank);
  r.dim_translated = column_rank(translated, tol.rank);
  Matrix both(dim, 2 * count);
  both << grown, translated;
  r.dim_sum = column_rank(both, tol.rank);

  for (Eigen::Index j = 0; j < count; ++j) {
    r.max_energy_residual = std::max(r.max_energy_residual, (h * grown.col(j)).norm() / grown.col(j).norm());
    r.max_translated_residual =
        std::max(r.max_translated_residual, (h * translated.col(j)).norm() / translated.col(j).norm());
    const Vector& col = grown.col(j);
    const std::span<const Complex> phi(col.data(), static_cast<std::size_t>(dim));
    for (int alpha = 0; alpha < n_sites; ++alpha) {
      const lattice::State hphi = lattice::apply_window(hs.h_term, hs.nu, alpha, phi, d, n_sites);
      r.max_term_expectation = std::max(r.max_term_expectation, std::abs(lattice::inner(phi, hphi)) / col.squaredNorm());
    }
  }
  return r;
}

NullityReport adjoint_nullity_check(const Isometry& lam, const HamiltonianSpec& hs, const Tolerances& tol) {
  if (hs.nu == 2) throw UnsupportedRangeError("nullity check needs an extension map; nu = 2 has none");
  if (hs.nu != 3 && hs.nu != 4) throw UnsupportedRangeError("nullity check is available for nu = 3 and 4");
  if (lam.d() != hs.d) throw ShapeError("isometry and interaction have different site dimension");
  const ChannelSet cs = build_channel_set(lam, tol.iso);
  const ThermoLimit th = solve_thermo(cs, tol);
  const ExtensionParts parts = build_extension_parts(cs);
  const Matrix& rho2 = th.rho2.matrix();
  const int d = cs.d;

  NullityReport r;
  r.nu = hs.nu;
  r.rho2_rank = numerical_rank(th.rho2, tol.rank);
  r.precondition_met = r.rho2_rank == d * d;
  if (hs.nu == 3) {
    const Matrix pulled = adjoint(parts.to3).apply(hs.h_term);
    r.residual = max_abs(pulled);
    r.trace_value = std::abs((rho2 * pulled).trace());
    return r;
  }
  const DensityOp rho3 = rho_nu_infinity(cs, th, 3);
  r.rho3_rank = numerical_rank(rho3, tol.rank);
  r.precondition_met = r.precondition_met && r.rho3_rank == d * d * d;
  const Matrix gg = adjoint(parts.growth_growth).apply(hs.h_term);
  const Matrix rgl = adjoint(parts.right_grow_left).apply(hs.h_term);
  r.residual = std::max(max_abs(gg), max_abs(rgl));
  const Matrix pulled = 0.5 * gg + 0.5 * adjoint(parts.to3).apply(rgl);
  r.trace_value = std::abs((rho2 * pulled).trace());
  return r;
}

}  // namespace hbts
