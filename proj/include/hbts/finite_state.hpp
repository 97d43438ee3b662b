#pragma once

// Explicit finite-depth tree states on a periodic ring of N = 2^n sites.
// This module is the brute-force reference against which the channel
// recursions are checked.

#include <cstdint>
#include <vector>

#include "hbts/channels.hpp"
#include "hbts/lattice.hpp"

namespace hbts {

struct PureState {
  LatticeSpec spec;
  lattice::State amplitudes;
};

/// Amplitude budget for build_state. 2^20 allows d=2 up to n=4 and d=3 up to n=3.
inline constexpr std::uint64_t kDefaultStateBudget = std::uint64_t{1} << 20;

/// Top tensor at depth 1, then the isometry applied to every site once per level.
PureState build_state(const Isometry& lam, const TopTensor& c, int depth,
                      std::uint64_t max_amplitudes = kDefaultStateBudget);

/// (1/N) sum_alpha of the reduced state of sites alpha..alpha+nu-1 (cyclic).
DensityOp reduced_avg(const PureState& psi, int nu);

/// Reduced single-site states rho_alpha for every site.
std::vector<Matrix> site_marginals(const PureState& psi);

/// (1/N) sum_alpha rho_alpha (x) rho_{alpha+1}.
DensityOp eta_avg(const PureState& psi);

/// <l|rho_hat|u> = sum_k [conj(C_{u,k}) C_{l,k} + conj(C_{k,u}) C_{k,l}] / 2
DensityOp rho_hat(const TopTensor& c);

/// Translation-averaged states at one depth obtained from the channel recursions.
struct LevelStates {
  int depth = 0;
  Matrix rho1;
  Matrix rho2;
  Matrix eta;    // averaged product of neighbouring marginals
  Matrix sigma;  // averaged rho_alpha (x) rho_alpha
};

/// Levels 1..depth from the base case of the top tensor, without building any state vector.
std::vector<LevelStates> level_states(const ChannelSet& cs, const TopTensor& c, int depth);

struct RecursionResidual {
  std::string identity;
  int depth = 0;  // the depth of the left-hand side
  double residual = 0.0;
};

struct RecursionReport {
  std::vector<RecursionResidual> entries;
  double max_single = 0.0;   // rho1(n+1) = D(rho1(n))
  double max_pair = 0.0;     // rho2(n+1) = (D_R x D_L)(rho2(n))/2 + S(rho1(n))/2
  double max_triple = 0.0;   // rho3(n) = D_{2->3}(rho2(n-1))
  double max_quad = 0.0;     // rho4(n) from rho2(n-1) and rho2(n-2)
  double max_eta = 0.0;      // eta(n+1) = (D_R x D_L)(eta(n))/2 + (D_L x D_R)(sigma(n))/2
  double max_levels = 0.0;   // level_states() against brute force, including the depth-1 base case
  double max_residual() const;
};

/// Checks every channel recursion against brute-force reduced states for depths up to n_max.
RecursionReport recursion_check(const Isometry& lam, const TopTensor& c, int n_max,
                                std::uint64_t max_amplitudes = kDefaultStateBudget);

/// Connected correlator at distance 2^m on the depth-n ring from the level states,
/// Tr[X slashed^m(rho2(n-m) - eta(n-m))]. levels[k] must hold depth k + 1; m < n.
Complex correlator_from_levels(const ChannelSet& cs, const std::vector<LevelStates>& levels, const Matrix& two_site,
                               int depth, int m);

/// (1/N) sum_beta [<Th_beta Th'_{beta+delta}> - <Th_beta><Th'_{beta+delta}>], cyclic.
Complex correlator_finite(const PureState& psi, const Observable& theta, const Observable& theta_prime, int delta);

}  // namespace hbts
