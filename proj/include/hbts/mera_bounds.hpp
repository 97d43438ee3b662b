#pragma once

// Rank bounds of the limit reduced states of scale-invariant MERA, and the
// shortest interaction length they guarantee a parent term for.

#include <cstdint>
#include <string_view>

namespace hbts {

enum class MeraTopology { binary, ternary };

/// "binary" or "ternary"; anything else is an ArgumentError.
MeraTopology parse_topology(std::string_view name);
const char* topology_name(MeraTopology t);

struct MeraBound {
  int nu = 0;
  std::uint64_t bound = 0;    // upper bound on rank rho_nu
  std::uint64_t max_rank = 0;  // d^nu
  bool nonmaximal = false;    // bound < d^nu
};

/// binary: nu = 5 with 2 d^4 when that is below d^5, else nu = 6 with d^4 + d^5.
/// ternary: nu = 7 with 3 d^5.
MeraBound mera_rank_bound(MeraTopology topology, int d);

}  // namespace hbts
