#pragma once

// State-vector operations on a ring of N sites of dimension d, big-endian
// amplitudes. These are the hot loops of the brute-force and exact
// diagonalization paths; they go through the kernels in hbts/kernels.hpp.

#include <span>
#include <vector>

#include "hbts/common.hpp"

namespace hbts::lattice {

using State = std::vector<Complex>;

/// phi with site k of phi equal to site (shift + k) mod N of psi.
State rotate(std::span<const Complex> psi, int d, int n_sites, int shift);

/// One-site cyclic translation T|s_0 ... s_{N-1}> = |s_{N-1} s_0 ... s_{N-2}>.
State translate(std::span<const Complex> psi, int d, int n_sites);

/// (op (x) I) psi with op acting on sites 0..nu-1.
State apply_leading(const Matrix& op, int nu, std::span<const Complex> psi, int d, int n_sites);

/// op acting on the cyclic window alpha, alpha+1, ..., alpha+nu-1.
State apply_window(const Matrix& op, int nu, int alpha, std::span<const Complex> psi, int d, int n_sites);

/// Reduced density matrix of sites 0..nu-1.
Matrix leading_reduced(std::span<const Complex> psi, int d, int n_sites, int nu);

/// Replace site `site` by two sites through the d^2 x d map v.
State expand_site(const Matrix& v, int site, std::span<const Complex> psi, int d, int n_sites);

/// v^{(x) n_sites} psi: every site grows into two.
State grow_all(const Matrix& v, std::span<const Complex> psi, int d, int n_sites);

Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm(std::span<const Complex> a);

}  // namespace hbts::lattice
