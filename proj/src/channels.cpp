#include "hbts/channels.hpp"

#include <algorithm>

namespace hbts {

Vector vec(const Matrix& x) { return Eigen::Map<const Vector>(x.data(), x.size()); }

Matrix unvec(const Vector& v, Eigen::Index n) {
  if (v.size() != n * n) throw ShapeError("vector length is not n^2");
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

Channel::Channel(int d, int nu_in, int nu_out, Matrix superop)
    : d_(d), nu_in_(nu_in), nu_out_(nu_out), dim_in_(dim_of(d, nu_in)), dim_out_(dim_of(d, nu_out)), m_(std::move(superop)) {
  if (d < 2 || nu_in < 1 || nu_out < 1) throw ArgumentError("invalid channel dimensions");
  if (m_.rows() != dim_out_ * dim_out_ || m_.cols() != dim_in_ * dim_in_)
    throw ShapeError("superoperator matrix must be d^(2 nu_out) x d^(2 nu_in)");
}

Matrix Channel::apply(const Matrix& x) const {
  if (x.rows() != dim_in_ || x.cols() != dim_in_) throw ShapeError("operator does not match channel input dimension");
  return unvec(m_ * vec(x), dim_out_);
}

DensityOp Channel::apply(const DensityOp& rho, std::string label) const {
  if (rho.d() != d_ || rho.nu() != nu_in_) throw ShapeError("density operator does not match channel input");
  return DensityOp(d_, nu_out_, apply(rho.matrix()), label.empty() ? rho.label() : std::move(label));
}

Channel Channel::operator+(const Channel& other) const {
  if (other.d_ != d_ || other.nu_in_ != nu_in_ || other.nu_out_ != nu_out_)
    throw ShapeError("cannot add channels of different shape");
  return Channel(d_, nu_in_, nu_out_, m_ + other.m_);
}

Channel Channel::operator*(double s) const { return Channel(d_, nu_in_, nu_out_, s * m_); }

AdjointChannel::AdjointChannel(Channel dual_of) : source_(std::move(dual_of)), m_(source_.matrix().adjoint()) {}

Matrix AdjointChannel::apply(const Matrix& observable) const {
  const Eigen::Index n = source_.dim_out();
  if (observable.rows() != n || observable.cols() != n) throw ShapeError("observable does not match adjoint input");
  return unvec(m_ * vec(observable), source_.dim_in());
}

AdjointChannel adjoint(const Channel& ch) { return AdjointChannel(ch); }

Channel channel_from_action(int d, int nu_in, int nu_out, const std::function<Matrix(const Matrix&)>& action) {
  const Eigen::Index n_in = dim_of(d, nu_in);
  const Eigen::Index n_out = dim_of(d, nu_out);
  Matrix m(n_out * n_out, n_in * n_in);
  Matrix unit = Matrix::Zero(n_in, n_in);
  for (Eigen::Index c = 0; c < n_in; ++c)
    for (Eigen::Index r = 0; r < n_in; ++r) {
      unit(r, c) = 1.0;
      const Matrix img = action(unit);
      if (img.rows() != n_out || img.cols() != n_out) throw ShapeError("action returned an operator of the wrong size");
      m.col(r + n_in * c) = vec(img);
      unit(r, c) = 0.0;
    }
  return Channel(d, nu_in, nu_out, std::move(m));
}

Channel identity_channel(int d, int nu) {
  const Eigen::Index n = dim_of(d, nu);
  return Channel(d, nu, nu, Matrix::Identity(n * n, n * n));
}

Channel partial_trace_channel(int d, int nu, std::span<const int> keep) {
  std::vector<int> kept(keep.begin(), keep.end());
  return channel_from_action(d, nu, static_cast<int>(kept.size()),
                             [&](const Matrix& x) { return partial_trace(x, d, nu, kept); });
}

Channel transpose_channel(int d, int nu) {
  return channel_from_action(d, nu, nu, [](const Matrix& x) { return Matrix(x.transpose()); });
}

Channel compose(const Channel& outer, const Channel& inner) {
  if (outer.d() != inner.d() || outer.nu_in() != inner.nu_out())
    throw ShapeError("channel composition: output of inner does not feed outer");
  return Channel(inner.d(), inner.nu_in(), outer.nu_out(), outer.matrix() * inner.matrix());
}

namespace {

// Position of (row, col) of a two-factor operator in the vectorized composite.
std::vector<Eigen::Index> composite_index(Eigen::Index na, Eigen::Index nb) {
  const Eigen::Index n = na * nb;
  std::vector<Eigen::Index> out(static_cast<std::size_t>(na * na * nb * nb));
  for (Eigen::Index ia = 0; ia < na * na; ++ia) {
    const Eigen::Index ra = ia % na;
    const Eigen::Index ca = ia / na;
    for (Eigen::Index ib = 0; ib < nb * nb; ++ib) {
      const Eigen::Index rb = ib % nb;
      const Eigen::Index cb = ib / nb;
      out[static_cast<std::size_t>(ia * nb * nb + ib)] = (ra * nb + rb) + n * (ca * nb + cb);
    }
  }
  return out;
}

}  // namespace

Channel tensor(const Channel& a, const Channel& b) {
  if (a.d() != b.d()) throw ShapeError("tensor product of channels with different site dimension");
  const Eigen::Index nb_in2 = b.dim_in() * b.dim_in();
  const Eigen::Index nb_out2 = b.dim_out() * b.dim_out();
  const auto out_idx = composite_index(a.dim_out(), b.dim_out());
  const auto in_idx = composite_index(a.dim_in(), b.dim_in());
  const Eigen::Index n_out = a.dim_out() * b.dim_out();
  const Eigen::Index n_in = a.dim_in() * b.dim_in();
  Matrix m = Matrix::Zero(n_out * n_out, n_in * n_in);
  const Matrix& ma = a.matrix();
  const Matrix& mb = b.matrix();
  for (Eigen::Index ja = 0; ja < ma.cols(); ++ja)
    for (Eigen::Index ia = 0; ia < ma.rows(); ++ia) {
      const Complex va = ma(ia, ja);
      if (va == Complex(0.0)) continue;
      for (Eigen::Index jb = 0; jb < nb_in2; ++jb) {
        const Eigen::Index col = in_idx[static_cast<std::size_t>(ja * nb_in2 + jb)];
        for (Eigen::Index ib = 0; ib < nb_out2; ++ib) {
          const Complex vb = mb(ib, jb);
          if (vb == Complex(0.0)) continue;
          m(out_idx[static_cast<std::size_t>(ia * nb_out2 + ib)], col) = va * vb;
        }
      }
    }
  return Channel(a.d(), a.nu_in() + b.nu_in(), a.nu_out() + b.nu_out(), std::move(m));
}

Channel tensor(const Channel& a, const Channel& b, const Channel& c) { return tensor(tensor(a, b), c); }

Channel build_growth(const Isometry& lam, double tol) {
  require_isometry(lam, tol);
  const Matrix& v = lam.matrix();
  return Channel(lam.d(), 1, 2, kron(v.conjugate(), v));
}

namespace {

DescendChannels descend_from_growth(const Channel& s) {
  const int d = s.d();
  const int keep_first[] = {0};
  const int keep_second[] = {1};
  Channel left = compose(partial_trace_channel(d, 2, keep_first), s);
  Channel right = compose(partial_trace_channel(d, 2, keep_second), s);
  Channel mixed = 0.5 * (left + right);
  return {std::move(left), std::move(right), std::move(mixed)};
}

}  // namespace

DescendChannels build_descend(const Isometry& lam, double tol) { return descend_from_growth(build_growth(lam, tol)); }

Channel build_slashed(const Isometry& lam, double tol) {
  const DescendChannels dc = build_descend(lam, tol);
  return 0.5 * (tensor(dc.left, dc.left) + tensor(dc.right, dc.right));
}

ChannelSet build_channel_set(const Isometry& lam, double tol) {
  Channel s = build_growth(lam, tol);
  DescendChannels dc = descend_from_growth(s);
  Channel slashed = 0.5 * (tensor(dc.left, dc.left) + tensor(dc.right, dc.right));
  Channel rl = tensor(dc.right, dc.left);
  Channel lr = tensor(dc.left, dc.right);
  return ChannelSet{lam.d(),          std::move(s),     std::move(dc.left), std::move(dc.right),
                    std::move(dc.mixed), std::move(slashed), std::move(rl),      std::move(lr)};
}

ExtensionParts build_extension_parts(const ChannelSet& cs) {
  Channel to3 = 0.5 * (tensor(cs.right, cs.growth) + tensor(cs.growth, cs.left));
  return ExtensionParts{std::move(to3), tensor(cs.growth, cs.growth), tensor(cs.right, cs.growth, cs.left)};
}

Matrix apply_extension(const ExtensionParts& parts, const Matrix& rho2, int nu) {
  if (nu == 3) return parts.to3.apply(rho2);
  if (nu == 4) return 0.5 * (parts.growth_growth.apply(rho2) + parts.right_grow_left.apply(parts.to3.apply(rho2)));
  throw UnsupportedRangeError("two-site extension is implemented for nu = 3 and 4 only");
}

Channel build_extension(const Isometry& lam, int nu, double tol) {
  if (nu != 3 && nu != 4) throw UnsupportedRangeError("two-site extension is implemented for nu = 3 and 4 only");
  const ExtensionParts parts = build_extension_parts(build_channel_set(lam, tol));
  if (nu == 3) return parts.to3;
  return 0.5 * (parts.growth_growth + compose(parts.right_grow_left, parts.to3));
}

ChoiReport choi_check(const Channel& ch, double tol) {
  const Eigen::Index n_in = ch.dim_in();
  const Eigen::Index n_out = ch.dim_out();
  const Matrix& m = ch.matrix();
  // J((i, a), (j, b)) = ch(E_ij)(a, b)
  Matrix choi(n_in * n_out, n_in * n_out);
  for (Eigen::Index j = 0; j < n_in; ++j)
    for (Eigen::Index i = 0; i < n_in; ++i) {
      const Eigen::Index col = i + n_in * j;
      for (Eigen::Index b = 0; b < n_out; ++b)
        for (Eigen::Index a = 0; a < n_out; ++a) choi(i * n_out + a, j * n_out + b) = m(a + n_out * b, col);
    }
  ChoiReport r;
  r.hermiticity_residual = max_abs(choi - choi.adjoint());
  r.hermiticity_preserving = r.hermiticity_residual <= tol;
  r.min_choi_eigenvalue = hermitian_eigenvalues(choi).minCoeff();
  r.completely_positive = r.hermiticity_preserving && r.min_choi_eigenvalue >= -tol;
  const Matrix unit_image = adjoint(ch).apply(Matrix::Identity(n_out, n_out));
  r.trace_residual = max_abs(unit_image - Matrix::Identity(n_in, n_in));
  r.trace_preserving = r.trace_residual <= tol;
  return r;
}

std::vector<Complex> channel_spectrum(const Channel& ch) {
  if (ch.nu_in() != ch.nu_out()) throw ShapeError("spectrum needs a square channel");
  Eigen::ComplexEigenSolver<Matrix> es(ch.matrix(), false);
  std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::stable_sort(ev.begin(), ev.end(), [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
  return ev;
}

}  // namespace hbts
