#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "setgap/rng.hpp"
#include "setgap/skeleton.hpp"

namespace setgap {

// Randomized combination of two skeletons over disjoint variable sets. The
// result is not normalized. Throws std::invalid_argument on shared variables.
Skeleton merge_pair(const Skeleton& a, const Skeleton& b, Rng& rng);

struct PoolOptions {
  int max_size = 5000;   // pool cap
  int patience = 200;    // stop after this many attempts add nothing new
  long max_attempts = -1;  // hard cap on attempts; negative means unbounded
};

struct Pool {
  std::vector<Skeleton> members;  // normalized, in order of discovery
  long attempts = 0;
};

// Repeated merge_pair attempts; attempt i uses its own stream derived from
// (seed, i), so the pool does not depend on the thread count.
Pool generate_pool(const Skeleton& a, const Skeleton& b, const PoolOptions& opt, std::uint64_t seed);

// Compatibility used by the merge: same unary function, both sums, both
// products, or both powers.
bool compatible(const Expr& a, const Expr& b);

}  // namespace setgap
