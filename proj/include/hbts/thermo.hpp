#pragma once

// Thermodynamic-limit (infinite depth) local states. Nothing here takes a top
// tensor: the limits depend on the isometry alone.

#include <vector>

#include "hbts/channels.hpp"

namespace hbts {

struct FixedPointResult {
  DensityOp state;
  double residual = 0.0;  // max |ch(rho) - rho|
  int unit_eigenvalue_multiplicity = 0;
  bool mixing = false;
  std::vector<Complex> spectrum;  // decreasing modulus
};

/// Unit-eigenvalue eigenvector of a square channel, Hermitized and trace
/// normalized. Throws DegenerateFixedPointError if eigenvalue 1 is not simple.
FixedPointResult fixed_point(const Channel& ch, const Tolerances& tol = {});

/// Solves (Id - M/2) x = rhs / 2, the closed form of sum_m 2^{-m-1} M^m rhs.
Matrix halved_geometric_series(const Channel& m, const Matrix& rhs);

/// Everything the two-site limits need, computed once per isometry.
struct ThermoLimit {
  FixedPointResult single_site;  // fixed point of D
  FixedPointResult slashed;      // fixed point of the pair channel
  DensityOp rho1;
  DensityOp rho2;
  DensityOp eta;  // averaged product of neighbouring marginals
};

/// Throws DegenerateFixedPointError when either channel is not mixing.
ThermoLimit solve_thermo(const ChannelSet& cs, const Tolerances& tol = {});

DensityOp rho2_infinity(const Isometry& lam, const Tolerances& tol = {});
DensityOp eta_infinity(const Isometry& lam, const Tolerances& tol = {});

/// nu in 1..4.
DensityOp rho_nu_infinity(const Isometry& lam, int nu, const Tolerances& tol = {});
DensityOp rho_nu_infinity(const ChannelSet& cs, const ThermoLimit& th, int nu);

/// max |rho2 - (D_R (x) D_L)(rho2)/2 - S(rho1)/2|
double rho2_self_consistency(const ChannelSet& cs, const Matrix& rho2, const Matrix& rho1);

/// Largest deviation of the averaged one-site marginals of a nu-site state from rho1.
double marginal_residual(const DensityOp& rho_nu, const Matrix& rho1);

struct ThermoReport {
  int nu = 0;
  int rank = 0;
  std::vector<double> eigenvalues;  // ascending
  double residual = 0.0;
  bool mixing = false;
  DensityOp state;
};

/// State, rank, spectrum and the residual appropriate for nu (fixed point,
/// self-consistency, or marginal consistency).
ThermoReport thermo_report(const Isometry& lam, int nu, const Tolerances& tol = {});

}  // namespace hbts
