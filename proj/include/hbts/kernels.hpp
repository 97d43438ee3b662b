#pragma once

// Complex BLAS-1 style inner loops used by the state-vector code paths
// (tree growth, reduced density matrices, local operator application).
//
// Every kernel has a scalar reference implementation. SIMD variants (AVX2+FMA
// on x86-64, NEON on aarch64) are compiled when the target supports them and
// selected once at runtime from the CPU feature bits. The environment variable
// HBTS_ISA=scalar|avx2|neon forces a particular table when it is available.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace hbts::simd {

using Complex = std::complex<double>;

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  /// y[i] += a * x[i]
  void (*zaxpy)(std::size_t n, Complex a, const Complex* x, Complex* y);
  /// sum_i conj(x[i]) * y[i]
  Complex (*zdotc)(std::size_t n, const Complex* x, const Complex* y);
  /// sum_i |x[i]|^2
  double (*dznrm2sq)(std::size_t n, const Complex* x);
};

namespace scalar {
void zaxpy(std::size_t n, Complex a, const Complex* x, Complex* y);
Complex zdotc(std::size_t n, const Complex* x, const Complex* y);
double dznrm2sq(std::size_t n, const Complex* x);
}  // namespace scalar

/// Table for a specific ISA, or nullptr when it is not compiled in or the CPU lacks it.
const KernelTable* table_for(Isa isa);

/// ISAs usable on this machine, scalar first.
std::vector<Isa> available_isas();

/// The table chosen at first use.
const KernelTable& active();

std::optional<Isa> parse_isa(std::string_view name);

inline void zaxpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  active().zaxpy(x.size(), a, x.data(), y.data());
}

inline Complex zdotc(std::span<const Complex> x, std::span<const Complex> y) {
  return active().zdotc(x.size(), x.data(), y.data());
}

inline double dznrm2sq(std::span<const Complex> x) { return active().dznrm2sq(x.size(), x.data()); }

}  // namespace hbts::simd
