#include "hbts/finite_state.hpp"

#include <algorithm>
#include <cmath>

namespace hbts {

namespace {

std::uint64_t required_amplitudes(int d, int depth) {
  // d^(2^depth), saturating instead of overflowing.
  long double count = 1.0L;
  for (int i = 0; i < (1 << depth); ++i) count *= d;
  return count > 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(count);
}

Matrix swap_sites(const Matrix& rho, int d) {
  Matrix out(rho.rows(), rho.cols());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) out(b * d + a, e * d + c) = rho(a * d + b, c * d + e);
  return out;
}

Matrix two_site_top_state(const TopTensor& c) {
  const int d = c.d();
  Vector psi(d * d);
  for (int l1 = 0; l1 < d; ++l1)
    for (int l2 = 0; l2 < d; ++l2) psi(l1 * d + l2) = c.matrix()(l1, l2);
  return psi * psi.adjoint();
}

}  // namespace

PureState build_state(const Isometry& lam, const TopTensor& c, int depth, std::uint64_t max_amplitudes) {
  if (lam.d() != c.d()) throw ShapeError("isometry and top tensor have different site dimension");
  const LatticeSpec spec = LatticeSpec::tree(lam.d(), depth);
  const std::uint64_t required = required_amplitudes(lam.d(), depth);
  if (required > max_amplitudes)
    throw ResourceError("depth " + std::to_string(depth) + " needs " + std::to_string(required) +
                            " amplitudes, budget is " + std::to_string(max_amplitudes),
                        required);
  require_isometry(lam);

  const int d = lam.d();
  lattice::State amp(static_cast<std::size_t>(d * d));
  for (int l1 = 0; l1 < d; ++l1)
    for (int l2 = 0; l2 < d; ++l2) amp[static_cast<std::size_t>(l1 * d + l2)] = c.matrix()(l1, l2);
  int sites = 2;
  for (int level = 2; level <= depth; ++level) {
    amp = lattice::grow_all(lam.matrix(), amp, d, sites);
    sites *= 2;
  }
  return PureState{spec, std::move(amp)};
}

DensityOp reduced_avg(const PureState& psi, int nu) {
  const int d = psi.spec.d;
  const int n = psi.spec.N;
  if (nu < 1 || nu > n) throw ArgumentError("reduced block size must be in 1..N");
  Matrix acc = Matrix::Zero(dim_of(d, nu), dim_of(d, nu));
  lattice::State cur = psi.amplitudes;
  for (int alpha = 0; alpha < n; ++alpha) {
    acc += lattice::leading_reduced(cur, d, n, nu);
    if (alpha + 1 < n) cur = lattice::rotate(cur, d, n, 1);
  }
  acc /= static_cast<double>(n);
  return DensityOp(d, nu, std::move(acc), "finite depth " + std::to_string(psi.spec.depth));
}

std::vector<Matrix> site_marginals(const PureState& psi) {
  const int d = psi.spec.d;
  const int n = psi.spec.N;
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(n));
  lattice::State cur = psi.amplitudes;
  for (int alpha = 0; alpha < n; ++alpha) {
    out.push_back(lattice::leading_reduced(cur, d, n, 1));
    if (alpha + 1 < n) cur = lattice::rotate(cur, d, n, 1);
  }
  return out;
}

DensityOp eta_avg(const PureState& psi) {
  const auto marg = site_marginals(psi);
  const int n = psi.spec.N;
  Matrix acc = Matrix::Zero(dim_of(psi.spec.d, 2), dim_of(psi.spec.d, 2));
  for (int alpha = 0; alpha < n; ++alpha)
    acc += kron(marg[static_cast<std::size_t>(alpha)], marg[static_cast<std::size_t>((alpha + 1) % n)]);
  acc /= static_cast<double>(n);
  return DensityOp(psi.spec.d, 2, std::move(acc), "finite product of marginals");
}

DensityOp rho_hat(const TopTensor& c) {
  const Matrix& cm = c.matrix();
  // (C C^dag)(l, u) = sum_k C_{l,k} conj(C_{u,k});  (C^T conj(C))(l, u) = sum_k C_{k,l} conj(C_{k,u})
  Matrix m = 0.5 * (cm * cm.adjoint() + cm.transpose() * cm.conjugate());
  return DensityOp(c.d(), 1, std::move(m), "depth 1");
}

std::vector<LevelStates> level_states(const ChannelSet& cs, const TopTensor& c, int depth) {
  if (depth < 1) throw ArgumentError("depth must be at least 1");
  if (c.d() != cs.d) throw ShapeError("top tensor does not match the channels' site dimension");
  const int d = c.d();
  const Matrix rho_c = two_site_top_state(c);
  const int first[] = {0};
  const int second[] = {1};
  const Matrix ra = partial_trace(rho_c, d, 2, first);
  const Matrix rb = partial_trace(rho_c, d, 2, second);

  std::vector<LevelStates> out;
  out.push_back(LevelStates{1, rho_hat(c).matrix(), 0.5 * (rho_c + swap_sites(rho_c, d)),
                            0.5 * (kron(ra, rb) + kron(rb, ra)), 0.5 * (kron(ra, ra) + kron(rb, rb))});
  for (int n = 2; n <= depth; ++n) {
    const LevelStates& p = out.back();
    out.push_back(LevelStates{n, cs.descend.apply(p.rho1),
                              0.5 * cs.right_left.apply(p.rho2) + 0.5 * cs.growth.apply(p.rho1),
                              0.5 * cs.right_left.apply(p.eta) + 0.5 * cs.left_right.apply(p.sigma),
                              cs.slashed.apply(p.sigma)});
  }
  return out;
}

double RecursionReport::max_residual() const {
  return std::max({max_single, max_pair, max_triple, max_quad, max_eta, max_levels});
}

RecursionReport recursion_check(const Isometry& lam, const TopTensor& c, int n_max, std::uint64_t max_amplitudes) {
  if (n_max < 2) throw ArgumentError("recursion check needs n_max >= 2");
  const ChannelSet cs = build_channel_set(lam);
  const ExtensionParts ext = build_extension_parts(cs);

  struct Brute {
    Matrix r1, r2, r3, r4, eta, sigma;
  };
  std::vector<Brute> bf(static_cast<std::size_t>(n_max + 1));
  for (int n = 1; n <= n_max; ++n) {
    const PureState psi = build_state(lam, c, n, max_amplitudes);
    Brute& b = bf[static_cast<std::size_t>(n)];
    b.r1 = reduced_avg(psi, 1).matrix();
    b.r2 = reduced_avg(psi, 2).matrix();
    if (psi.spec.N >= 3) b.r3 = reduced_avg(psi, 3).matrix();
    if (psi.spec.N >= 4) b.r4 = reduced_avg(psi, 4).matrix();
    b.eta = eta_avg(psi).matrix();
    const auto marg = site_marginals(psi);
    b.sigma = Matrix::Zero(b.eta.rows(), b.eta.cols());
    for (const Matrix& m : marg) b.sigma += kron(m, m);
    b.sigma /= static_cast<double>(marg.size());
  }

  RecursionReport rep;
  auto record = [&rep](const std::string& name, int depth, double r, double& slot) {
    rep.entries.push_back({name, depth, r});
    slot = std::max(slot, r);
  };
  for (int n = 1; n < n_max; ++n) {
    const Brute& p = bf[static_cast<std::size_t>(n)];
    const Brute& q = bf[static_cast<std::size_t>(n + 1)];
    record("single", n + 1, max_abs(q.r1 - cs.descend.apply(p.r1)), rep.max_single);
    record("pair", n + 1, max_abs(q.r2 - 0.5 * cs.right_left.apply(p.r2) - 0.5 * cs.growth.apply(p.r1)), rep.max_pair);
    record("eta", n + 1,
           max_abs(q.eta - 0.5 * cs.right_left.apply(p.eta) - 0.5 * cs.left_right.apply(p.sigma)), rep.max_eta);
  }
  for (int n = 2; n <= n_max; ++n) {
    const Brute& b = bf[static_cast<std::size_t>(n)];
    record("triple", n, max_abs(b.r3 - apply_extension(ext, bf[static_cast<std::size_t>(n - 1)].r2, 3)),
           rep.max_triple);
  }
  for (int n = 3; n <= n_max; ++n) {
    const Brute& b = bf[static_cast<std::size_t>(n)];
    const Matrix rhs = 0.5 * ext.growth_growth.apply(bf[static_cast<std::size_t>(n - 1)].r2) +
                       0.5 * ext.right_grow_left.apply(ext.to3.apply(bf[static_cast<std::size_t>(n - 2)].r2));
    record("quad", n, max_abs(b.r4 - rhs), rep.max_quad);
  }
  const auto levels = level_states(cs, c, n_max);
  for (const LevelStates& l : levels) {
    const Brute& b = bf[static_cast<std::size_t>(l.depth)];
    const double r = std::max({max_abs(l.rho1 - b.r1), max_abs(l.rho2 - b.r2), max_abs(l.eta - b.eta),
                               max_abs(l.sigma - b.sigma)});
    record("levels", l.depth, r, rep.max_levels);
  }
  return rep;
}

Complex correlator_from_levels(const ChannelSet& cs, const std::vector<LevelStates>& levels, const Matrix& two_site,
                               int depth, int m) {
  if (m < 0 || m >= depth) throw ArgumentError("need 0 <= m < depth");
  if (static_cast<int>(levels.size()) < depth) throw ArgumentError("level states do not reach the requested depth");
  const LevelStates& l = levels[static_cast<std::size_t>(depth - m - 1)];
  Matrix delta = l.rho2 - l.eta;
  for (int i = 0; i < m; ++i) delta = cs.slashed.apply(delta);
  return (two_site * delta).trace();
}

Complex correlator_finite(const PureState& psi, const Observable& theta, const Observable& theta_prime, int delta) {
  const int d = psi.spec.d;
  const int n = psi.spec.N;
  if (theta.d() != d || theta_prime.d() != d) throw ShapeError("observable dimension does not match the lattice");
  if (delta < 1 || delta >= n) throw ArgumentError("distance must be in 1..N-1");
  const auto marg = site_marginals(psi);
  Complex acc = 0.0;
  for (int beta = 0; beta < n; ++beta) {
    const int other = (beta + delta) % n;
    const lattice::State a = lattice::apply_window(theta_prime.matrix(), 1, other, psi.amplitudes, d, n);
    const lattice::State b = lattice::apply_window(theta.matrix(), 1, beta, a, d, n);
    const Complex joint = lattice::inner(psi.amplitudes, b);
    const Complex single = (marg[static_cast<std::size_t>(beta)] * theta.matrix()).trace() *
                           (marg[static_cast<std::size_t>(other)] * theta_prime.matrix()).trace();
    acc += joint - single;
  }
  return acc / static_cast<double>(n);
}

}  // namespace hbts
