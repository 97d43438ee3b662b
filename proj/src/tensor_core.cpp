#include "hbts/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hbts {

std::uint64_t ipow(std::uint64_t base, unsigned exponent) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base)
      throw ResourceError("integer power overflows 64 bits", std::numeric_limits<std::uint64_t>::max());
    out *= base;
  }
  return out;
}

LatticeSpec LatticeSpec::tree(int d, int depth) {
  if (d < 2) throw ArgumentError("site dimension must be at least 2");
  if (depth < 1 || depth > 30) throw ArgumentError("tree depth must be in 1..30");
  return LatticeSpec{d, 1 << depth, depth};
}

Isometry::Isometry(int d, Matrix v) : d_(d), v_(std::move(v)) {
  if (d < 2) throw ArgumentError("site dimension must be at least 2");
  if (v_.rows() != d * d || v_.cols() != d)
    throw ShapeError("isometry must be d^2 x d, got " + std::to_string(v_.rows()) + "x" +
                     std::to_string(v_.cols()) + " for d=" + std::to_string(d));
}

Isometry Isometry::reference_qubit() {
  Matrix v = Matrix::Zero(4, 2);
  const double s = 1.0 / std::sqrt(2.0);
  v(0 * 2 + 1, 0) = 1.0;
  v(0 * 2 + 0, 1) = s;
  v(1 * 2 + 1, 1) = s;
  return Isometry(2, std::move(v));
}

Isometry Isometry::product(int d) {
  Matrix v = Matrix::Zero(d * d, d);
  for (int u = 0; u < d; ++u) v(u * d, u) = 1.0;
  return Isometry(d, std::move(v));
}

TopTensor::TopTensor(int d, Matrix c) : d_(d), c_(std::move(c)) {
  if (d < 2) throw ArgumentError("site dimension must be at least 2");
  if (c_.rows() != d || c_.cols() != d) throw ShapeError("top tensor must be d x d");
}

DensityOp::DensityOp(int d, int nu, Matrix m, std::string label)
    : d_(d), nu_(nu), m_(std::move(m)), label_(std::move(label)) {
  if (d < 2) throw ArgumentError("site dimension must be at least 2");
  if (nu < 1) throw ArgumentError("operator must cover at least one site");
  const Eigen::Index n = dim_of(d, nu);
  if (m_.rows() != n || m_.cols() != n)
    throw ShapeError("operator on " + std::to_string(nu) + " sites of dimension " + std::to_string(d) +
                     " must be " + std::to_string(n) + "x" + std::to_string(n));
}

Observable::Observable(int d, Matrix m, double tol) : d_(d), m_(std::move(m)) {
  if (m_.rows() != d || m_.cols() != d) throw ShapeError("observable must be d x d");
  if (!is_hermitian(m_, tol)) throw ValidationError("observable is not Hermitian", max_abs(m_ - m_.adjoint()));
}

Observable Observable::named(const std::string& name) {
  Matrix m = Matrix::Zero(2, 2);
  const Complex i(0.0, 1.0);
  if (name == "x") {
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
  } else if (name == "y") {
    m(0, 1) = -i;
    m(1, 0) = i;
  } else if (name == "z") {
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
  } else if (name == "p0") {
    m(0, 0) = 1.0;
  } else if (name == "p1") {
    m(1, 1) = 1.0;
  } else if (name == "id") {
    m.setIdentity();
  } else {
    throw ArgumentError("unknown observable '" + name + "' (expected x, y, z, p0, p1, id)");
  }
  return Observable(2, std::move(m));
}

ValidationReport validate_isometry(const Isometry& lam, double tol) {
  const Matrix& v = lam.matrix();
  const Matrix gram = v.adjoint() * v;
  const double residual = max_abs(gram - Matrix::Identity(lam.d(), lam.d()));
  return {residual <= tol, residual};
}

ValidationReport validate_top(const TopTensor& c, double tol) {
  const double residual = std::abs(c.matrix().squaredNorm() - 1.0);
  return {residual <= tol, residual};
}

DensityReport validate_density(const DensityOp& rho, const Tolerances& tol) {
  DensityReport r;
  const Matrix& m = rho.matrix();
  r.hermiticity = max_abs(m - m.adjoint());
  r.min_eigenvalue = hermitian_eigenvalues(m).minCoeff();
  r.trace_error = std::abs(m.trace() - 1.0);
  r.pass = r.hermiticity <= tol.herm && r.min_eigenvalue >= -tol.psd && r.trace_error <= tol.trace;
  return r;
}

void require_isometry(const Isometry& lam, double tol) {
  const ValidationReport r = validate_isometry(lam, tol);
  if (!r.pass) throw ValidationError("tensor is not an isometry (max |V^dag V - I| = " + std::to_string(r.residual) + ")", r.residual);
}

namespace {

// Offset contributed by the digits of `value` placed on `sites` (big-endian).
std::vector<Eigen::Index> site_offsets(int d, int nu, const std::vector<int>& sites) {
  const Eigen::Index count = dim_of(d, static_cast<int>(sites.size()));
  std::vector<Eigen::Index> out(static_cast<std::size_t>(count), 0);
  for (Eigen::Index v = 0; v < count; ++v) {
    Eigen::Index rest = v;
    Eigen::Index off = 0;
    for (int k = static_cast<int>(sites.size()) - 1; k >= 0; --k) {
      const Eigen::Index digit = rest % d;
      rest /= d;
      off += digit * dim_of(d, nu - 1 - sites[static_cast<std::size_t>(k)]);
    }
    out[static_cast<std::size_t>(v)] = off;
  }
  return out;
}

}  // namespace

Matrix partial_trace(const Matrix& op, int d, int nu, std::span<const int> keep) {
  const Eigen::Index n = dim_of(d, nu);
  if (op.rows() != n || op.cols() != n) throw ShapeError("operator dimension does not match d^nu");
  if (keep.empty()) throw ArgumentError("partial trace needs a nonempty set of kept sites");
  std::vector<int> kept(keep.begin(), keep.end());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    if (kept[k] < 0 || kept[k] >= nu) throw ArgumentError("kept site out of range");
    if (k > 0 && kept[k] <= kept[k - 1]) throw ArgumentError("kept sites must be strictly increasing");
  }
  std::vector<int> traced;
  for (int s = 0; s < nu; ++s)
    if (!std::binary_search(kept.begin(), kept.end(), s)) traced.push_back(s);

  const auto kept_off = site_offsets(d, nu, kept);
  const auto traced_off = site_offsets(d, nu, traced);
  const auto nk = static_cast<Eigen::Index>(kept_off.size());
  Matrix out = Matrix::Zero(nk, nk);
  for (Eigen::Index b = 0; b < nk; ++b)
    for (Eigen::Index a = 0; a < nk; ++a) {
      Complex acc = 0.0;
      for (Eigen::Index t : traced_off) acc += op(kept_off[a] + t, kept_off[b] + t);
      out(a, b) = acc;
    }
  return out;
}

DensityOp partial_trace(const DensityOp& op, std::span<const int> keep) {
  Matrix m = partial_trace(op.matrix(), op.d(), op.nu(), keep);
  return DensityOp(op.d(), static_cast<int>(keep.size()), std::move(m), op.label());
}

bool is_hermitian(const Matrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

RealVector hermitian_eigenvalues(const Matrix& op) {
  const Matrix h = 0.5 * (op + op.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

int numerical_rank(const Matrix& op, double tau_rank, double tol_herm) {
  if (op.rows() != op.cols()) throw ShapeError("rank needs a square operator");
  if (!is_hermitian(op, tol_herm))
    throw ValidationError("numerical_rank needs a Hermitian operator", max_abs(op - op.adjoint()));
  const RealVector ev = hermitian_eigenvalues(op);
  const double top = ev.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  return static_cast<int>((ev.array() > tau_rank * top).count());
}

int numerical_rank(const DensityOp& op, double tau_rank) { return numerical_rank(op.matrix(), tau_rank); }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  // Column-major fill order, real part drawn before imaginary part.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  return m;
}

namespace {

Matrix thin_q(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
}

}  // namespace

Isometry random_isometry(int d, std::uint64_t seed) {
  if (d < 2) throw ArgumentError("site dimension must be at least 2");
  std::mt19937_64 rng(seed);
  Matrix q = thin_q(gaussian_matrix(d * d, d, rng));
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    Eigen::Index best = 0;
    q.col(j).cwiseAbs().maxCoeff(&best);
    const Complex pivot = q(best, j);
    q.col(j) *= std::conj(pivot) / std::abs(pivot);
    q(best, j) = Complex(std::abs(pivot), 0.0);
  }
  return Isometry(d, std::move(q));
}

TopTensor random_top(int d, std::uint64_t seed) {
  if (d < 2) throw ArgumentError("site dimension must be at least 2");
  std::mt19937_64 rng(seed);
  Matrix c = gaussian_matrix(d, d, rng);
  c /= c.norm();
  return TopTensor(d, std::move(c));
}

Matrix random_density(Eigen::Index dim, std::mt19937_64& rng) {
  const Matrix g = gaussian_matrix(dim, dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

Matrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) { return thin_q(gaussian_matrix(dim, dim, rng)); }

Matrix random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
  const Matrix g = gaussian_matrix(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace hbts
