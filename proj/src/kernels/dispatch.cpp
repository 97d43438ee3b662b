#include <cstdlib>

#include "hbts/kernels.hpp"

namespace hbts::simd {

#if defined(HBTS_HAVE_AVX2_KERNELS)
namespace avx2 {
void zaxpy(std::size_t n, Complex a, const Complex* x, Complex* y);
Complex zdotc(std::size_t n, const Complex* x, const Complex* y);
double dznrm2sq(std::size_t n, const Complex* x);
}  // namespace avx2
#endif

#if defined(HBTS_HAVE_NEON_KERNELS)
namespace neon {
void zaxpy(std::size_t n, Complex a, const Complex* x, Complex* y);
Complex zdotc(std::size_t n, const Complex* x, const Complex* y);
double dznrm2sq(std::size_t n, const Complex* x);
}  // namespace neon
#endif

namespace {

constexpr KernelTable kScalar{Isa::scalar, &scalar::zaxpy, &scalar::zdotc, &scalar::dznrm2sq};
#if defined(HBTS_HAVE_AVX2_KERNELS)
constexpr KernelTable kAvx2{Isa::avx2, &avx2::zaxpy, &avx2::zdotc, &avx2::dznrm2sq};
#endif
#if defined(HBTS_HAVE_NEON_KERNELS)
constexpr KernelTable kNeon{Isa::neon, &neon::zaxpy, &neon::zdotc, &neon::dznrm2sq};
#endif

bool cpu_has_avx2() {
#if defined(HBTS_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* env = std::getenv("HBTS_ISA")) {
    if (auto isa = parse_isa(env)) {
      if (const KernelTable* t = table_for(*isa)) return *t;
    }
  }
  if (const KernelTable* t = table_for(Isa::avx2)) return *t;
  if (const KernelTable* t = table_for(Isa::neon)) return *t;
  return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "neon") return Isa::neon;
  return std::nullopt;
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar: return &kScalar;
    case Isa::avx2:
#if defined(HBTS_HAVE_AVX2_KERNELS)
      if (cpu_has_avx2()) return &kAvx2;
#endif
      return nullptr;
    case Isa::neon:
#if defined(HBTS_HAVE_NEON_KERNELS)
      return &kNeon;  // Advanced SIMD is mandatory on aarch64
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::scalar};
  for (Isa isa : {Isa::avx2, Isa::neon})
    if (table_for(isa) != nullptr) out.push_back(isa);
  return out;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace hbts::simd
