#include "hbts/lattice.hpp"

#include <cmath>

#include "hbts/kernels.hpp"

namespace hbts::lattice {

namespace {

void check_size(std::span<const Complex> psi, int d, int n_sites) {
  if (static_cast<Eigen::Index>(psi.size()) != dim_of(d, n_sites))
    throw ShapeError("state length does not match d^N");
}

}  // namespace

State rotate(std::span<const Complex> psi, int d, int n_sites, int shift) {
  check_size(psi, d, n_sites);
  shift %= n_sites;
  if (shift < 0) shift += n_sites;
  if (shift == 0) return State(psi.begin(), psi.end());
  // i = head * tail_dim + tail, with head the digits of sites 0..shift-1;
  // the rotated index moves the tail to the front.
  const std::size_t tail_dim = static_cast<std::size_t>(dim_of(d, n_sites - shift));
  const std::size_t head_dim = static_cast<std::size_t>(dim_of(d, shift));
  State out(psi.size());
  for (std::size_t head = 0; head < head_dim; ++head)
    for (std::size_t tail = 0; tail < tail_dim; ++tail) out[tail * head_dim + head] = psi[head * tail_dim + tail];
  return out;
}

State translate(std::span<const Complex> psi, int d, int n_sites) { return rotate(psi, d, n_sites, n_sites - 1); }

State apply_leading(const Matrix& op, int nu, std::span<const Complex> psi, int d, int n_sites) {
  check_size(psi, d, n_sites);
  const Eigen::Index w = dim_of(d, nu);
  if (op.rows() != w || op.cols() != w) throw ShapeError("local operator dimension does not match d^nu");
  if (nu > n_sites) throw ArgumentError("local operator wider than the lattice");
  const std::size_t rest = static_cast<std::size_t>(dim_of(d, n_sites - nu));
  const auto& k = simd::active();
  State out(psi.size(), Complex(0.0));
  for (Eigen::Index col = 0; col < w; ++col) {
    const Complex* in_row = psi.data() + static_cast<std::size_t>(col) * rest;
    for (Eigen::Index row = 0; row < w; ++row) {
      const Complex a = op(row, col);
      if (a == Complex(0.0)) continue;
      k.zaxpy(rest, a, in_row, out.data() + static_cast<std::size_t>(row) * rest);
    }
  }
  return out;
}

State apply_window(const Matrix& op, int nu, int alpha, std::span<const Complex> psi, int d, int n_sites) {
  if (alpha == 0) return apply_leading(op, nu, psi, d, n_sites);
  const State front = rotate(psi, d, n_sites, alpha);
  const State applied = apply_leading(op, nu, front, d, n_sites);
  return rotate(applied, d, n_sites, n_sites - alpha);
}

Matrix leading_reduced(std::span<const Complex> psi, int d, int n_sites, int nu) {
  check_size(psi, d, n_sites);
  if (nu < 1 || nu > n_sites) throw ArgumentError("reduced block must cover 1..N sites");
  const Eigen::Index w = dim_of(d, nu);
  const std::size_t rest = static_cast<std::size_t>(dim_of(d, n_sites - nu));
  const auto& k = simd::active();
  Matrix rho(w, w);
  for (Eigen::Index a = 0; a < w; ++a) {
    const Complex* row_a = psi.data() + static_cast<std::size_t>(a) * rest;
    for (Eigen::Index b = a; b < w; ++b) {
      const Complex* row_b = psi.data() + static_cast<std::size_t>(b) * rest;
      // rho(a, b) = sum_r psi[a, r] conj(psi[b, r])
      const Complex v = k.zdotc(rest, row_b, row_a);
      rho(a, b) = v;
      rho(b, a) = std::conj(v);
    }
  }
  return rho;
}

State expand_site(const Matrix& v, int site, std::span<const Complex> psi, int d, int n_sites) {
  check_size(psi, d, n_sites);
  if (v.rows() != d * d || v.cols() != d) throw ShapeError("growth map must be d^2 x d");
  if (site < 0 || site >= n_sites) throw ArgumentError("site out of range");
  const std::size_t left = static_cast<std::size_t>(dim_of(d, site));
  const std::size_t right = static_cast<std::size_t>(dim_of(d, n_sites - site - 1));
  const std::size_t dd = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  const auto& k = simd::active();
  State out(left * dd * right, Complex(0.0));
  for (std::size_t l = 0; l < left; ++l)
    for (int u = 0; u < d; ++u) {
      const Complex* in = psi.data() + (l * static_cast<std::size_t>(d) + static_cast<std::size_t>(u)) * right;
      for (std::size_t pair = 0; pair < dd; ++pair) {
        const Complex a = v(static_cast<Eigen::Index>(pair), u);
        if (a == Complex(0.0)) continue;
        k.zaxpy(right, a, in, out.data() + (l * dd + pair) * right);
      }
    }
  return out;
}

State grow_all(const Matrix& v, std::span<const Complex> psi, int d, int n_sites) {
  State cur(psi.begin(), psi.end());
  // Expanding from the last site keeps the positions of the earlier ones.
  for (int s = n_sites - 1; s >= 0; --s) cur = expand_site(v, s, cur, d, n_sites + (n_sites - 1 - s));
  return cur;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("inner product of vectors of different length");
  return simd::zdotc(a, b);
}

double norm(std::span<const Complex> a) { return std::sqrt(simd::dznrm2sq(a)); }

}  // namespace hbts::lattice
