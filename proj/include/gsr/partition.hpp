#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsr/constructions.hpp"
#include "gsr/graph.hpp"

namespace gsr {

struct Partition {
  std::vector<NodeSet> groups;
};

struct PartitionCheck {
  bool valid = true;
  /// Index of the first violating group, or -1 for a cover violation.
  int group = -1;
  std::string reason;

  explicit operator bool() const { return valid; }
};

/// Checks that the groups cover V and that each complement V \ N_i is a hub
/// for N_i. Throws InvalidArgument if groups overlap or hold out-of-range ids.
PartitionCheck is_r_partition(const Graph& g, const Partition& p);

/// Concatenated hub-based plans, one per group with its complement as hub.
/// Throws Infeasible if `p` is not an r-partition.
MeasurementPlan construct_from_partition(const Graph& g, const Partition& p, int k,
                                         const FParams& params = {});

struct RandomPartitionResult {
  std::optional<Partition> partition;
  int attempts = 0;
};

/// Tries up to `trials` random equal halves; trial t uses derive_seed(seed, t).
RandomPartitionResult er_random_2partition(const Graph& g, std::uint64_t seed, int trials);

// One group per line, ids separated by whitespace.
void write_partition(std::ostream& out, const Partition& p);
Partition read_partition(std::istream& in);

}  // namespace gsr
