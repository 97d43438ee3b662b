#include "doctest.h"
#include "hbts/lattice.hpp"
#include "oracles.hpp"

using namespace hbts;
namespace lat = hbts::lattice;

namespace {

oracle::Vec as_vec(const lat::State& s) { return Eigen::Map<const oracle::Vec>(s.data(), static_cast<Eigen::Index>(s.size())); }

lat::State as_state(const oracle::Vec& v) { return lat::State(v.data(), v.data() + v.size()); }

double dist(const lat::State& a, const oracle::Vec& b) { return (as_vec(a) - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("translate is the one-site cyclic shift") {
  oracle::Rng rng(31);
  for (int d : {2, 3})
    for (int n : {2, 3, 5}) {
      const oracle::Vec psi = rng.gaussian(oracle::ipow(d, n), 1);
      const oracle::Mat t = oracle::translation(d, n);
      CHECK(dist(lat::translate(as_state(psi), d, n), t * psi) == 0.0);
      // rotate by k undoes k translations.
      oracle::Vec tk = psi;
      for (int k = 1; k < n; ++k) {
        tk = t * tk;
        CHECK(dist(lat::rotate(as_state(tk), d, n, k), psi) == 0.0);
      }
    }
}

TEST_CASE("basis-state translation") {
  // |0 1 1> -> |1 0 1>
  lat::State psi(8, Complex(0.0));
  psi[0b011] = 1.0;
  const lat::State t = lat::translate(psi, 2, 3);
  CHECK(t[0b101] == Complex(1.0));
}

TEST_CASE("apply_window equals the embedded operator") {
  oracle::Rng rng(32);
  for (int d : {2, 3}) {
    const int n = d == 2 ? 5 : 4;
    const oracle::Mat t = oracle::translation(d, n);
    for (int nu : {1, 2, 3}) {
      const oracle::Mat op = rng.gaussian(oracle::ipow(d, nu), oracle::ipow(d, nu));
      const oracle::Mat lead = oracle::kron(op, oracle::Mat::Identity(oracle::ipow(d, n - nu), oracle::ipow(d, n - nu)));
      const oracle::Vec psi = rng.gaussian(oracle::ipow(d, n), 1);
      oracle::Mat tk = oracle::Mat::Identity(lead.rows(), lead.cols());
      for (int alpha = 0; alpha < n; ++alpha) {
        CAPTURE(d);
        CAPTURE(nu);
        CAPTURE(alpha);
        const oracle::Vec expect = tk * lead * tk.adjoint() * psi;
        CHECK(dist(lat::apply_window(op, nu, alpha, as_state(psi), d, n), expect) <= 1e-12);
        tk = t * tk;
      }
    }
  }
}

TEST_CASE("leading_reduced matches the oracle partial trace") {
  oracle::Rng rng(33);
  for (int d : {2, 3}) {
    const int n = 4;
    oracle::Vec psi = rng.gaussian(oracle::ipow(d, n), 1);
    psi /= psi.norm();
    for (int nu = 1; nu <= n; ++nu) {
      std::vector<int> keep;
      for (int k = 0; k < nu; ++k) keep.push_back(k);
      const oracle::Mat expect = oracle::ptrace(psi * psi.adjoint(), d, n, keep);
      CHECK(oracle::max_abs(lat::leading_reduced(as_state(psi), d, n, nu) - expect) <= 1e-14);
    }
  }
}

TEST_CASE("grow_all applies the isometry to every site") {
  oracle::Rng rng(34);
  for (int d : {2, 3}) {
    const oracle::Mat v = rng.isometry(d * d, d);
    for (int n : {1, 2, 3}) {
      if (d == 3 && n == 3) continue;
      const oracle::Vec psi = rng.gaussian(oracle::ipow(d, n), 1);
      oracle::Mat vn = v;
      for (int k = 1; k < n; ++k) vn = oracle::kron(vn, v);
      CHECK(dist(lat::grow_all(v, as_state(psi), d, n), vn * psi) <= 1e-13);
    }
    // expand_site on the middle site of three.
    const oracle::Vec psi = rng.gaussian(oracle::ipow(d, 3), 1);
    const oracle::Mat id = oracle::Mat::Identity(d, d);
    CHECK(dist(lat::expand_site(v, 1, as_state(psi), d, 3), oracle::kron3(id, v, id) * psi) <= 1e-13);
  }
}

TEST_CASE("inner and norm") {
  oracle::Rng rng(35);
  const oracle::Vec a = rng.gaussian(37, 1);
  const oracle::Vec b = rng.gaussian(37, 1);
  CHECK(std::abs(lat::inner(as_state(a), as_state(b)) - a.dot(b)) <= 1e-12);
  CHECK(lat::norm(as_state(a)) == doctest::Approx(a.norm()).epsilon(1e-14));
}

TEST_CASE("shape errors") {
  lat::State psi(7);
  CHECK_THROWS_AS(lat::translate(psi, 2, 3), ShapeError);
  lat::State ok(8);
  CHECK_THROWS_AS(lat::apply_window(Matrix::Identity(3, 3), 1, 0, ok, 2, 3), ShapeError);
}
