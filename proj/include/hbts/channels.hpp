#pragma once

// Superoperators between operator spaces of nu_in and nu_out sites.
//
// Channels are stored as dense matrices acting on column-stacked operators:
// vec(X)[r + n * c] = X(r, c). The map X -> A X B^dag then has matrix
// conj(B) (x) A, and the Hilbert-Schmidt adjoint is the conjugate transpose.

#include <functional>

#include "hbts/tensor_core.hpp"

namespace hbts {

Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Eigen::Index n);

class Channel {
 public:
  Channel(int d, int nu_in, int nu_out, Matrix superop);

  int d() const noexcept { return d_; }
  int nu_in() const noexcept { return nu_in_; }
  int nu_out() const noexcept { return nu_out_; }
  Eigen::Index dim_in() const noexcept { return dim_in_; }
  Eigen::Index dim_out() const noexcept { return dim_out_; }
  const Matrix& matrix() const noexcept { return m_; }

  Matrix apply(const Matrix& x) const;
  DensityOp apply(const DensityOp& rho, std::string label = {}) const;

  Channel operator+(const Channel& other) const;
  Channel operator*(double s) const;

 private:
  int d_;
  int nu_in_;
  int nu_out_;
  Eigen::Index dim_in_;
  Eigen::Index dim_out_;
  Matrix m_;
};

inline Channel operator*(double s, const Channel& c) { return c * s; }

/// Heisenberg-picture dual of a channel; maps nu_out-site observables to
/// nu_in-site observables.
class AdjointChannel {
 public:
  explicit AdjointChannel(Channel dual_of);

  int d() const noexcept { return source_.d(); }
  int nu_in() const noexcept { return source_.nu_out(); }
  int nu_out() const noexcept { return source_.nu_in(); }
  /// conj-transpose of the source matrix
  const Matrix& matrix() const noexcept { return m_; }

  Matrix apply(const Matrix& observable) const;

 private:
  Channel source_;
  Matrix m_;
};

AdjointChannel adjoint(const Channel& ch);

/// Materializes an arbitrary linear map by applying it to every matrix unit.
Channel channel_from_action(int d, int nu_in, int nu_out, const std::function<Matrix(const Matrix&)>& action);

Channel identity_channel(int d, int nu);
Channel partial_trace_channel(int d, int nu, std::span<const int> keep);
Channel transpose_channel(int d, int nu);

/// outer after inner
Channel compose(const Channel& outer, const Channel& inner);

/// a acts on the leading sites, b on the trailing ones.
Channel tensor(const Channel& a, const Channel& b);
Channel tensor(const Channel& a, const Channel& b, const Channel& c);

/// S(rho) = V rho V^dag, one site to two.
Channel build_growth(const Isometry& lam, double tol = Tolerances{}.iso);

struct DescendChannels {
  Channel left;   // Tr_2 o S
  Channel right;  // Tr_1 o S
  Channel mixed;  // (left + right) / 2
};

DescendChannels build_descend(const Isometry& lam, double tol = Tolerances{}.iso);

/// (D_L (x) D_L + D_R (x) D_R) / 2 on two-site operators.
Channel build_slashed(const Isometry& lam, double tol = Tolerances{}.iso);

/// D_{2->3} = (D_R (x) S + S (x) D_L) / 2 and
/// D_{2->4} = (S (x) S + (D_R (x) S (x) D_L) o D_{2->3}) / 2.
Channel build_extension(const Isometry& lam, int nu, double tol = Tolerances{}.iso);

/// All channels of one isometry, built once.
struct ChannelSet {
  int d;
  Channel growth;
  Channel left;
  Channel right;
  Channel descend;
  Channel slashed;
  Channel right_left;  // D_R (x) D_L
  Channel left_right;  // D_L (x) D_R
};

ChannelSet build_channel_set(const Isometry& lam, double tol = Tolerances{}.iso);

/// The pieces of the two- to three- and four-site extensions, kept separate
/// so they can be applied without forming the composed four-site map.
struct ExtensionParts {
  Channel to3;              // D_{2->3}
  Channel growth_growth;    // S (x) S
  Channel right_grow_left;  // D_R (x) S (x) D_L
};

ExtensionParts build_extension_parts(const ChannelSet& cs);

/// D_{2->nu}(rho) for nu in {3, 4}, applied piecewise.
Matrix apply_extension(const ExtensionParts& parts, const Matrix& rho2, int nu);

struct ChoiReport {
  bool completely_positive = false;
  bool trace_preserving = false;
  bool hermiticity_preserving = false;
  double min_choi_eigenvalue = 0.0;
  double trace_residual = 0.0;  // max |adjoint(I) - I|
  double hermiticity_residual = 0.0;
};

/// CP iff the Choi matrix sum_ij E_ij (x) ch(E_ij) is PSD; TP iff the adjoint is unital.
ChoiReport choi_check(const Channel& ch, double tol = 1e-10);

/// Eigenvalues of a square channel, sorted by decreasing modulus.
std::vector<Complex> channel_spectrum(const Channel& ch);

}  // namespace hbts
