#pragma once

// Two-point connected correlators of the infinite tree state at distances
// 2^m, and the adjoint pair-channel spectrum that sets their power laws.

#include <span>
#include <vector>

#include "hbts/thermo.hpp"

namespace hbts {

struct CorrelatorQuery {
  Observable theta;
  Observable theta_prime;
  int m = 0;  // distance 2^m
};

/// rho2 - eta in the thermodynamic limit; traceless.
Matrix connected_difference(const ThermoLimit& th);

/// Tr[X * slashed^m(rho2 - eta)] for a two-site operator X.
Complex correlator_thermo(const ChannelSet& cs, const ThermoLimit& th, const Matrix& two_site, int m);
Complex correlator_thermo(const Isometry& lam, const CorrelatorQuery& q, const Tolerances& tol = {});

/// Same value through the Heisenberg picture, <A^m(X^dag), rho2 - eta>_HS.
Complex correlator_heisenberg(const ChannelSet& cs, const ThermoLimit& th, const Matrix& two_site, int m);

/// Values for m = 0..m_max, by repeated application of the pair channel.
std::vector<Complex> correlator_values(const ChannelSet& cs, const ThermoLimit& th, const Matrix& two_site, int m_max);

/// The same values with the adjoint applied to X^dag instead. An eigenoperator
/// stays on its own ray here, so successive ratios keep full relative accuracy
/// even after the value has decayed far below the slower modes of rho2 - eta.
std::vector<Complex> correlator_values_heisenberg(const ChannelSet& cs, const ThermoLimit& th, const Matrix& two_site,
                                                 int m_max);

struct SpectrumEntry {
  Complex kappa;
  Complex exponent;  // log2(kappa); real part -inf for kappa == 0
  int algebraic = 0;
  int geometric = 0;
  std::vector<Matrix> eigenoperators;  // basis of the geometric eigenspace, two-site operators
};

struct SpectrumReport {
  std::vector<SpectrumEntry> entries;  // decreasing |kappa|
  bool diagonalizable = true;
};

struct SpectrumOptions {
  double cluster = 1e-6;  // eigenvalues closer than this form one cluster
  double rank = 1e-10;    // relative singular-value cutoff for geometric multiplicity
};

/// Eigen-decomposition of the Hilbert-Schmidt adjoint of a square channel.
SpectrumReport adjoint_spectrum(const Channel& ch, const SpectrumOptions& opt = {});

/// adjoint_spectrum of the pair channel of lam.
SpectrumReport exponent_spectrum(const Isometry& lam, const SpectrumOptions& opt = {});

struct SpectralTerm {
  Complex kappa;
  int degree = 0;                     // polynomial degree in m, alg - geom multiplicity
  std::vector<Complex> coefficients;  // of m^0, m^1, ...
};

struct CorrelatorSeries {
  std::vector<long long> delta_alpha;  // 2^m
  std::vector<Complex> values;
  Complex prefactor;  // value at distance 1
  bool degenerate = false;  // every value below 1e-14; no fit
  bool geometric = false;   // successive ratios agree to 1e-8
  Complex kappa;            // mean successive ratio when geometric
  Complex exponent;         // log2(kappa)
  double max_ratio_error = 0.0;
  bool eigenoperator = false;  // the observable passed the eigenoperator test
  double eigen_residual = 0.0;  // ||A(X) - kappa X||_F / ||X||_F
  std::vector<SpectralTerm> terms;
  double fit_residual = 0.0;
  bool log_corrections = false;  // a fitted term carries a Jordan-block polynomial
};

inline constexpr double kDegenerateSeries = 1e-14;
inline constexpr double kRatioTolerance = 1e-8;
inline constexpr double kEigenoperatorTolerance = 1e-8;

/// Ratio test and, when a spectrum is given, the multi-term power-law fit
/// sum_kappa kappa^m p_kappa(m). values[i] belongs to m = m_first + i.
CorrelatorSeries analyze_series(std::span<const Complex> values, int m_first, Complex prefactor,
                                const SpectrumReport* spectrum = nullptr);

/// Successive-ratio test for one eigenoperator, carried out in extended precision.
struct RefinedPowerLaw {
  Complex kappa;                 // eigenvalue after refinement
  double refine_residual = 0.0;  // ||A(Y) - kappa Y||_F with ||Y||_F = 1
  bool converged = false;
  double overlap = 0.0;          // |C_0|
  std::vector<Complex> values;   // C_m = <A^m(Y), delta>, m = 0..m_max, rounded
  double max_ratio_error = 0.0;  // max_m |C_{m+1} / C_m - conj(kappa)|
};

/// Refines an approximate eigenpair (kappa, Y) of the adjoint of a square
/// channel to about 150 significant digits by shifted inverse iteration, then
/// evaluates C_m and its ratios at that precision. In double precision the
/// rounding of A^m(Y) swamps kappa^m once kappa^m drops below ~1e-8 * eps.
/// Throws UnsupportedRangeError when |kappa|^m_max is too small even for the
/// extended format.
RefinedPowerLaw refined_power_law(const Channel& ch, const Matrix& delta, Complex kappa, const Matrix& eigenoperator,
                                  int m_max);

/// Correlator series of a two-site observable for m = m_min..m_max, Heisenberg form.
CorrelatorSeries powerlaw_check(const Isometry& lam, const Matrix& two_site, int m_min, int m_max,
                                const Tolerances& tol = {});
CorrelatorSeries powerlaw_check(const Isometry& lam, const Observable& theta, const Observable& theta_prime,
                                int m_min, int m_max, const Tolerances& tol = {});

}  // namespace hbts
