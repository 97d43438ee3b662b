#include "doctest.h"
#include "hbts/channels.hpp"
#include "oracles.hpp"

using namespace hbts;

namespace {

Matrix projector(int d, int sites, long long i) {
  const Eigen::Index n = dim_of(d, sites);
  Matrix m = Matrix::Zero(n, n);
  m(i, i) = 1.0;
  return m;
}

Matrix bell_projector() {
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

Complex hs(const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace(); }

std::vector<Isometry> sample_isometries() {
  std::vector<Isometry> out{Isometry::reference_qubit(), Isometry::product(2), Isometry::product(3)};
  for (int d : {2, 3})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) out.push_back(random_isometry(d, seed));
  return out;
}

}  // namespace

TEST_CASE("growth channel examples") {
  const Channel s = build_growth(Isometry::reference_qubit());
  CHECK(s.dim_in() == 2);
  CHECK(s.dim_out() == 4);
  CHECK(max_abs(s.apply(projector(2, 1, 0)) - projector(2, 2, 0b01)) <= 1e-15);
  CHECK(max_abs(s.apply(projector(2, 1, 1)) - bell_projector()) <= 1e-15);

  oracle::Rng rng(41);
  for (int d : {2, 3}) {
    const Channel p = build_growth(Isometry::product(d));
    const Matrix rho = rng.density(d);
    CHECK(max_abs(p.apply(rho) - kron(rho, projector(d, 1, 0))) <= 1e-15);
  }
  CHECK_THROWS_AS(build_growth(Isometry(2, Matrix::Ones(4, 2))), ValidationError);
}

TEST_CASE("descend channel examples") {
  const DescendChannels dc = build_descend(Isometry::reference_qubit());
  const Matrix half = 0.5 * Matrix::Identity(2, 2);
  CHECK(max_abs(dc.mixed.apply(projector(2, 1, 0)) - half) <= 1e-15);
  CHECK(max_abs(dc.mixed.apply(half) - half) <= 1e-15);

  oracle::Rng rng(42);
  const DescendChannels pc = build_descend(Isometry::product(3));
  const Matrix x = rng.gaussian(3, 3);
  CHECK(max_abs(pc.left.apply(x) - x) <= 1e-15);
  CHECK(max_abs(pc.right.apply(x) - projector(3, 1, 0) * x.trace()) <= 1e-15);
}

TEST_CASE("D is exactly the average of D_L and D_R") {
  for (const Isometry& lam : sample_isometries()) {
    const DescendChannels dc = build_descend(lam);
    CHECK(max_abs(dc.mixed.matrix() - 0.5 * (dc.left.matrix() + dc.right.matrix())) == 0.0);
  }
}

TEST_CASE("every channel agrees with its operator-level oracle on random inputs") {
  oracle::Rng rng(43);
  for (const Isometry& lam : sample_isometries()) {
    const int d = lam.d();
    const Matrix& v = lam.matrix();
    const ChannelSet cs = build_channel_set(lam);
    const ExtensionParts ext = build_extension_parts(cs);
    for (int trial = 0; trial < 3; ++trial) {
      const Matrix x1 = rng.gaussian(d, d);
      const Matrix x2 = rng.gaussian(d * d, d * d);
      CHECK(max_abs(cs.growth.apply(x1) - oracle::growth(v, x1)) <= 1e-13);
      CHECK(max_abs(cs.left.apply(x1) - oracle::descend_left(v, x1, d)) <= 1e-13);
      CHECK(max_abs(cs.right.apply(x1) - oracle::descend_right(v, x1, d)) <= 1e-13);
      CHECK(max_abs(cs.descend.apply(x1) - oracle::descend(v, x1, d)) <= 1e-13);
      CHECK(max_abs(cs.slashed.apply(x2) - oracle::slashed(v, x2, d)) <= 1e-13);
      CHECK(max_abs(cs.right_left.apply(x2) - oracle::right_left(v, x2, d)) <= 1e-13);
      CHECK(max_abs(cs.left_right.apply(x2) - oracle::left_right(v, x2, d)) <= 1e-13);
      CHECK(max_abs(apply_extension(ext, x2, 3) - oracle::ext3(v, x2, d)) <= 1e-12);
      if (d == 2) CHECK(max_abs(apply_extension(ext, x2, 4) - oracle::ext4(v, x2, d)) <= 1e-12);
    }
  }
}

TEST_CASE("pair channel of the product isometry") {
  // slashed = (Id + |00><00| Tr) / 2: eigenvalue 1 once, 1/2 fifteen times.
  const auto ev = channel_spectrum(build_slashed(Isometry::product(2)));
  REQUIRE(ev.size() == 16);
  CHECK(std::abs(ev[0] - 1.0) <= 1e-12);
  for (std::size_t i = 1; i < ev.size(); ++i) CHECK(std::abs(ev[i] - 0.5) <= 1e-12);
}

TEST_CASE("pair channel preserves the trace of product inputs") {
  oracle::Rng rng(44);
  for (const Isometry& lam : sample_isometries()) {
    const Channel c = build_slashed(lam);
    const int d = lam.d();
    const Matrix in = kron(rng.density(d), rng.density(d));
    CHECK(std::abs(c.apply(in).trace() - 1.0) <= 1e-13);
  }
}

TEST_CASE("iterating the pair channel forgets everything but the trace") {
  const Channel c = build_slashed(Isometry::reference_qubit());
  const Matrix sigma = oracle::power_iterate([&](const Matrix& x) { return c.apply(x); }, Matrix::Identity(4, 4) / 4.0);
  oracle::Rng rng(45);
  for (int trial = 0; trial < 3; ++trial) {
    Matrix x = rng.gaussian(4, 4);
    const Complex tr = x.trace();
    for (int k = 0; k < 200; ++k) x = c.apply(x);
    CHECK(max_abs(x - tr * sigma) <= 1e-10);
  }
}

TEST_CASE("extension channels") {
  CHECK_THROWS_AS(build_extension(Isometry::reference_qubit(), 2), UnsupportedRangeError);
  CHECK_THROWS_AS(build_extension(Isometry::reference_qubit(), 5), UnsupportedRangeError);

  const Channel p3 = build_extension(Isometry::product(2), 3);
  CHECK(max_abs(p3.apply(projector(2, 2, 0)) - projector(2, 3, 0)) <= 1e-15);

  oracle::Rng rng(46);
  for (const Isometry& lam : sample_isometries()) {
    const int d = lam.d();
    const Channel e3 = build_extension(lam, 3);
    const Matrix rho = rng.density(d * d);
    const Matrix out3 = e3.apply(rho);
    CHECK(std::abs(out3.trace() - 1.0) <= 1e-13);
    CHECK(hermitian_eigenvalues(out3).minCoeff() >= -1e-13);
    // Rank of a full-rank input is at most twice the rank of each half.
    CHECK(numerical_rank(0.5 * (out3 + out3.adjoint())) <= 2 * d * d);
    if (d == 2) {
      const Matrix out4 = build_extension(lam, 4).apply(rho);
      CHECK(std::abs(out4.trace() - 1.0) <= 1e-13);
      CHECK(hermitian_eigenvalues(out4).minCoeff() >= -1e-13);
      const ExtensionParts parts = build_extension_parts(build_channel_set(lam));
      CHECK(max_abs(out4 - apply_extension(parts, rho, 4)) <= 1e-13);
    }
  }
}

TEST_CASE("adjoint examples and defining identity") {
  oracle::Rng rng(47);
  const Channel id = identity_channel(2, 2);
  CHECK(max_abs(adjoint(id).matrix() - Matrix::Identity(16, 16)) == 0.0);

  for (const Isometry& lam : sample_isometries()) {
    const int d = lam.d();
    const ChannelSet cs = build_channel_set(lam);
    const Channel e3 = build_extension(lam, 3);
    CHECK(max_abs(adjoint(cs.descend).apply(Matrix::Identity(d, d)) - Matrix::Identity(d, d)) <= 1e-13);

    for (const Channel* ch : {&cs.growth, &cs.left, &cs.right, &cs.descend, &cs.slashed, &e3}) {
      const AdjointChannel a = adjoint(*ch);
      for (int trial = 0; trial < 20; ++trial) {
        const Matrix x = rng.gaussian(ch->dim_out(), ch->dim_out());
        const Matrix y = rng.gaussian(ch->dim_in(), ch->dim_in());
        CHECK(std::abs(hs(x, ch->apply(y)) - hs(a.apply(x), y)) <= 1e-12 * (1.0 + x.norm() * y.norm()));
      }
    }
    // Tr[rho A(H)] = Tr[D_{2->3}(rho) H]
    const Matrix rho = rng.density(d * d);
    const Matrix h = rng.hermitian(d * d * d);
    CHECK(std::abs((rho * adjoint(e3).apply(h)).trace() - (e3.apply(rho) * h).trace()) <= 1e-12);
  }
}

TEST_CASE("Choi diagnostics") {
  SUBCASE("constructed channels are CP and TP") {
    for (const Isometry& lam : sample_isometries()) {
      const ChannelSet cs = build_channel_set(lam);
      std::vector<Channel> chans{cs.growth, cs.left, cs.right, cs.descend, cs.slashed, build_extension(lam, 3)};
      if (lam.d() == 2) chans.push_back(build_extension(lam, 4));
      for (const Channel& ch : chans) {
        const ChoiReport r = choi_check(ch);
        CHECK(r.completely_positive);
        CHECK(r.trace_preserving);
        CHECK(r.hermiticity_preserving);
      }
    }
  }
  SUBCASE("four-site extension at d = 3 is trace preserving and positive on random inputs") {
    // The 6561 x 6561 Choi matrix is too large to diagonalize in a unit test.
    const Isometry lam = random_isometry(3, 3);
    const ExtensionParts parts = build_extension_parts(build_channel_set(lam));
    const Matrix unit = adjoint(parts.growth_growth).apply(Matrix::Identity(81, 81));
    CHECK(max_abs(unit - Matrix::Identity(9, 9)) <= 1e-12);
    const Matrix unit2 = adjoint(parts.right_grow_left).apply(Matrix::Identity(81, 81));
    CHECK(max_abs(unit2 - Matrix::Identity(27, 27)) <= 1e-12);
    oracle::Rng rng(48);
    const Matrix out = apply_extension(parts, rng.density(9), 4);
    CHECK(std::abs(out.trace() - 1.0) <= 1e-12);
    CHECK(hermitian_eigenvalues(out).minCoeff() >= -1e-12);
  }
  SUBCASE("transpose is not CP") {
    const ChoiReport r = choi_check(transpose_channel(2, 1));
    CHECK_FALSE(r.completely_positive);
    CHECK(r.trace_preserving);
    CHECK(r.min_choi_eigenvalue == doctest::Approx(-1.0));
  }
  SUBCASE("half the identity is not TP") {
    const ChoiReport r = choi_check(0.5 * identity_channel(2, 1));
    CHECK(r.completely_positive);
    CHECK_FALSE(r.trace_preserving);
    CHECK(r.trace_residual == doctest::Approx(0.5));
  }
}

TEST_CASE("square channel spectra lie in the unit disc") {
  for (const Isometry& lam : sample_isometries()) {
    const ChannelSet cs = build_channel_set(lam);
    for (const Channel* ch : {&cs.left, &cs.right, &cs.descend, &cs.slashed, &cs.right_left, &cs.left_right}) {
      const auto ev = channel_spectrum(*ch);
      CHECK(std::abs(ev.front()) <= 1.0 + 1e-10);
      CHECK(std::abs(ev.front()) >= 1.0 - 1e-10);  // TP maps always have eigenvalue 1
    }
  }
}

TEST_CASE("growth preserves rank") {
  oracle::Rng rng(49);
  for (const Isometry& lam : sample_isometries()) {
    const int d = lam.d();
    const Channel s = build_growth(lam);
    for (int trial = 0; trial < 20; ++trial) {
      const long long r = rng.integer(1, d);
      const Matrix rho = rng.density_of_rank(d, r);
      const Matrix out = s.apply(rho);
      CHECK(numerical_rank(0.5 * (out + out.adjoint())) == numerical_rank(rho));
    }
  }
}

TEST_CASE("composition is associative and tensor products are bilinear") {
  oracle::Rng rng(50);
  const int d = 2;
  auto random_channel = [&](int nu_in, int nu_out) {
    const Eigen::Index n = dim_of(d, nu_in) * dim_of(d, nu_in);
    const Eigen::Index m = dim_of(d, nu_out) * dim_of(d, nu_out);
    return Channel(d, nu_in, nu_out, rng.gaussian(m, n));
  };
  const Channel a = random_channel(2, 1);
  const Channel b = random_channel(1, 2);
  const Channel c = random_channel(2, 1);
  CHECK(max_abs(compose(compose(a, b), c).matrix() - compose(a, compose(b, c)).matrix()) <= 1e-11);

  const Channel p = random_channel(1, 1);
  const Channel q = random_channel(1, 1);
  const Channel r = random_channel(1, 2);
  CHECK(max_abs(tensor(p + q, r).matrix() - (tensor(p, r) + tensor(q, r)).matrix()) <= 1e-12);
  CHECK(max_abs(tensor(p, 2.5 * r).matrix() - (2.5 * tensor(p, r)).matrix()) <= 1e-12);

  // The tensor product acts factor-wise on product operators.
  const Matrix x = rng.gaussian(2, 2);
  const Matrix y = rng.gaussian(2, 2);
  CHECK(max_abs(tensor(p, r).apply(kron(x, y)) - kron(p.apply(x), r.apply(y))) <= 1e-12);
}

TEST_CASE("apply rejects mismatched operators") {
  const Channel s = build_growth(Isometry::reference_qubit());
  CHECK_THROWS_AS(s.apply(Matrix::Identity(4, 4)), ShapeError);
  CHECK_THROWS_AS(compose(s, s), ShapeError);
  oracle::Rng rng(51);
  const Matrix x = rng.gaussian(4, 4);
  CHECK(max_abs(identity_channel(2, 2).apply(x) - x) == 0.0);
}
