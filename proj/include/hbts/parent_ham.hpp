#pragma once

// Parent Hamiltonians built from the kernel of the infinite-depth reduced
// states, dense exact diagonalization on small rings, and the ground-space
// checks that go with them.

#include <cstdint>
#include <vector>

#include "hbts/thermo.hpp"

namespace hbts {

/// Positive energies E_k, one per kernel vector. Empty means all 1.
struct KernelWeights {
  std::vector<double> values;
};

struct HamiltonianSpec {
  int d = 0;
  int nu = 0;
  Matrix h_term;  // d^nu x d^nu, PSD
  Matrix kernel;  // orthonormal columns spanning ker rho_nu
  int kernel_dim = 0;
  std::vector<double> weights;
  bool normalized = true;  // assemble() includes the 1/N prefactor
};

/// Eigenvectors with eigenvalue <= tau * max eigenvalue, as orthonormal columns.
Matrix kernel_basis(const Matrix& rho, double tau = Tolerances{}.rank);
Matrix kernel_basis(const DensityOp& rho, double tau = Tolerances{}.rank);

/// sum_k E_k |phi_k><phi_k| over the columns of kernel.
HamiltonianSpec interaction_from_kernel(int d, int nu, const Matrix& kernel, const KernelWeights& weights = {});

inline constexpr int kAutoRange = 0;

/// nu = kAutoRange picks the smallest nu in {2, 3, 4} whose limit state has a kernel.
HamiltonianSpec build_interaction(const Isometry& lam, const KernelWeights& weights = {}, int nu = kAutoRange,
                                  const Tolerances& tol = {});

/// Default dense-ED budget: 4096 basis states (d = 2, N = 12).
inline constexpr std::uint64_t kDefaultEdBudget = 4096;

/// (1/N) sum_alpha H(alpha) on a periodic ring, H(alpha) acting on sites alpha..alpha+nu-1 mod N.
Matrix assemble(const HamiltonianSpec& hs, int n_sites, std::uint64_t max_dim = kDefaultEdBudget);

struct Histogram {
  std::vector<double> edges;  // bins + 1 entries
  std::vector<long long> counts;
};

struct GroundSpaceReport {
  std::vector<double> spectrum;  // ascending
  double ground_energy = 0.0;
  int degeneracy = 0;  // #{E <= E0 + tau_gs}
  double tau_gs = 0.0;
  Histogram histogram;  // of E / E_max over [0, 1]
  Matrix ground_space;  // orthonormal columns, filled when requested
};

GroundSpaceReport diagonalize(const Matrix& h, double tau_gs = Tolerances{}.gs, int bins = 50,
                              bool keep_ground_space = false);

/// Equal-width histogram of values / max(values) over [0, 1]; the last bin is closed.
Histogram energy_histogram(std::span<const double> values, int bins);

struct SubspaceReport {
  int n_sites = 0;
  int dim_grown = 0;       // dim S
  int dim_translated = 0;  // dim T(S)
  int dim_sum = 0;         // dim (S + T S)
  double max_energy_residual = 0.0;    // max_j ||H phi_j||, phi_j normalized
  double max_term_expectation = 0.0;   // max_{j, alpha} |<phi_j|H(alpha)|phi_j>|
  double max_translated_residual = 0.0;  // the same energy residual over T(S)
};

/// S = V^{(x)N/2} applied to every basis state of N/2 sites. N must be even.
SubspaceReport grown_subspace_check(const Isometry& lam, const HamiltonianSpec& hs, int n_sites,
                                    const Tolerances& tol = {}, std::uint64_t max_dim = kDefaultEdBudget);

struct NullityReport {
  int nu = 0;
  bool precondition_met = false;  // rho2 (and rho3 for nu = 4) of full rank
  int rho2_rank = 0;
  int rho3_rank = 0;  // nu = 4 only
  double residual = 0.0;  // max-norm of the adjoint extension applied to H_nu
  double trace_value = 0.0;  // |Tr[rho2 * adjoint(D_{2->nu})(H_nu)]|
};

/// nu = 3: adjoint(D_{2->3})(H_3). nu = 4: the larger of (S (x) S)^dag(H_4) and
/// (D_R (x) S (x) D_L)^dag(H_4). nu = 2 has no extension map.
NullityReport adjoint_nullity_check(const Isometry& lam, const HamiltonianSpec& hs, const Tolerances& tol = {});

}  // namespace hbts
