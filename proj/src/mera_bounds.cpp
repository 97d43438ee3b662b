#include "hbts/mera_bounds.hpp"

#include <string>

#include "hbts/common.hpp"

namespace hbts {

MeraTopology parse_topology(std::string_view name) {
  if (name == "binary") return MeraTopology::binary;
  if (name == "ternary") return MeraTopology::ternary;
  throw ArgumentError("unknown MERA topology '" + std::string(name) + "' (expected binary or ternary)");
}

const char* topology_name(MeraTopology t) { return t == MeraTopology::binary ? "binary" : "ternary"; }

MeraBound mera_rank_bound(MeraTopology topology, int d) {
  if (d < 2) throw ArgumentError("local dimension must be at least 2");
  const auto D = static_cast<std::uint64_t>(d);
  MeraBound b;
  switch (topology) {
    case MeraTopology::binary:
      if (2 * ipow(D, 4) < ipow(D, 5)) {
        b.nu = 5;
        b.bound = 2 * ipow(D, 4);
      } else {
        b.nu = 6;
        b.bound = ipow(D, 4) + ipow(D, 5);
      }
      break;
    case MeraTopology::ternary:
      b.nu = 7;
      b.bound = 3 * ipow(D, 5);
      break;
    default:
      throw ArgumentError("unknown MERA topology");
  }
  b.max_rank = ipow(D, static_cast<unsigned>(b.nu));
  b.nonmaximal = b.bound < b.max_rank;
  return b;
}

}  // namespace hbts
