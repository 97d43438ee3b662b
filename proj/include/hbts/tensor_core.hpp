#pragma once

// Dense tensor substrate for homogeneous binary-tree states.
//
// Conventions used throughout the library:
//  * Composite indices are big-endian: site 0 is the most significant digit,
//    so |l1 l2> has index l1 * d + l2.
//  * Operators use standard bra-ket indexing, rho(row, col) = <row|rho|col>.
//  * Sites are numbered from 0.

#include <random>
#include <span>
#include <string>
#include <vector>

#include "hbts/common.hpp"

namespace hbts {

struct LatticeSpec {
  int d = 2;
  int N = 2;
  int depth = 1;  // N == 2^depth for tree-built lattices

  /// Lattice of a depth-n tree: N = 2^n sites.
  static LatticeSpec tree(int d, int depth);
};

/// The node tensor of the tree, stored as a d^2 x d matrix V with
/// V((l1, l2), u) = lambda^u_{l1 l2}. Construction checks shape only;
/// isometry is checked by validate_isometry and by every channel builder.
class Isometry {
 public:
  Isometry(int d, Matrix v);

  int d() const noexcept { return d_; }
  const Matrix& matrix() const noexcept { return v_; }
  Complex entry(int l1, int l2, int u) const { return v_(l1 * d_ + l2, u); }

  /// |0> -> |01>, |1> -> (|00> + |11>)/sqrt(2)
  static Isometry reference_qubit();
  /// |u> -> |u 0>
  static Isometry product(int d);

 private:
  int d_;
  Matrix v_;
};

/// Top tensor of the tree; C(l1, l2) is the amplitude of |l1 l2> at depth 1.
class TopTensor {
 public:
  TopTensor(int d, Matrix c);

  int d() const noexcept { return d_; }
  const Matrix& matrix() const noexcept { return c_; }

 private:
  int d_;
  Matrix c_;
};

/// A nu-site operator carrying its site dimension and a provenance label.
/// Density invariants (Hermitian, PSD, unit trace) are checked by validate().
class DensityOp {
 public:
  DensityOp(int d, int nu, Matrix m, std::string label = {});

  int d() const noexcept { return d_; }
  int nu() const noexcept { return nu_; }
  const Matrix& matrix() const noexcept { return m_; }
  const std::string& label() const noexcept { return label_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  int d_;
  int nu_;
  Matrix m_;
  std::string label_;
};

/// Hermitian single-site observable. Throws ValidationError otherwise.
class Observable {
 public:
  Observable(int d, Matrix m, double tol = Tolerances{}.herm);

  int d() const noexcept { return d_; }
  const Matrix& matrix() const noexcept { return m_; }

  /// Named Pauli and projector observables for d = 2: x, y, z, p0, p1, id.
  static Observable named(const std::string& name);

 private:
  int d_;
  Matrix m_;
};

struct ValidationReport {
  bool pass = false;
  double residual = 0.0;
};

/// max |V^dag V - I|.
ValidationReport validate_isometry(const Isometry& lam, double tol = Tolerances{}.iso);

/// |sum |C|^2 - 1|.
ValidationReport validate_top(const TopTensor& c, double tol = Tolerances{}.iso);

struct DensityReport {
  bool pass = false;
  double hermiticity = 0.0;  // max |rho - rho^dag|
  double min_eigenvalue = 0.0;
  double trace_error = 0.0;  // |Tr rho - 1|
};

DensityReport validate_density(const DensityOp& rho, const Tolerances& tol = {});

/// Throws ValidationError when lam is not an isometry within tol.
void require_isometry(const Isometry& lam, double tol = Tolerances{}.iso);

/// Reduced operator on the sites in `keep` (0-based, strictly increasing).
Matrix partial_trace(const Matrix& op, int d, int nu, std::span<const int> keep);
DensityOp partial_trace(const DensityOp& op, std::span<const int> keep);

bool is_hermitian(const Matrix& m, double tol = Tolerances{}.herm);

/// Eigenvalues above tau_rank * (largest eigenvalue). Throws ValidationError
/// for non-Hermitian input.
int numerical_rank(const Matrix& op, double tau_rank = Tolerances{}.rank, double tol_herm = Tolerances{}.herm);
int numerical_rank(const DensityOp& op, double tau_rank = Tolerances{}.rank);

/// Ascending eigenvalues of the Hermitian part.
RealVector hermitian_eigenvalues(const Matrix& op);

/// Kronecker product with the first factor on the most significant sites.
Matrix kron(const Matrix& a, const Matrix& b);

/// Seeded isometry: Gaussian d^2 x d matrix, thin QR, largest-magnitude entry
/// of each column made real positive.
Isometry random_isometry(int d, std::uint64_t seed);

/// Seeded normalized top tensor with Gaussian entries.
TopTensor random_top(int d, std::uint64_t seed);

/// Complex Gaussian matrix, unit-variance real and imaginary parts.
Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng);

/// Random full-rank density matrix G G^dag / Tr.
Matrix random_density(Eigen::Index dim, std::mt19937_64& rng);

/// Random unitary from the QR of a Gaussian matrix.
Matrix random_unitary(Eigen::Index dim, std::mt19937_64& rng);

Matrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng);

}  // namespace hbts
