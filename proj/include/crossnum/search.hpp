#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "crossnum/group.hpp"
#include "crossnum/subsums.hpp"

namespace crossnum::search {

// Resource guards. Zeroes mean "unlimited" (or environment default where one
// is set: CROSSNUM_MAX_NODES, CROSSNUM_MAX_SECONDS, CROSSNUM_THREADS).
struct SearchLimits {
  std::uint64_t max_nodes = 0;
  double max_seconds = 0.0;
  std::int64_t max_length = 0;  // avoider searches only
  int threads = 0;              // worker threads for root-branch parallelism
};

SearchLimits resolve_limits(SearchLimits l);

enum class WitnessMode { None, One, All };

// Result of a maximization. Cross-number objectives report the exact value as
// best/scale with scale = exp(G); length objectives use scale = 1. Witnesses
// are sorted element-index multisets. With a resource limit hit, partial is
// set and best/witnesses describe the explored region only.
struct MaxOutcome {
  std::int64_t best = 0;
  std::int64_t scale = 1;
  std::vector<std::vector<Elem>> witnesses;
  bool partial = false;
  std::uint64_t nodes = 0;
};

// max k(S) over zero-sum free S. Branch-and-bound over multisets in candidate
// order (element order ascending, then index); a node is cut when
// k(S) + (|G|-1-|subsums(S)|)/pmin cannot beat the incumbent.
MaxOutcome max_cross_zero_sum_free(const GroupPtr& g, const SearchLimits& lim, WitnessMode mode);

// max k(U) over minimal zero-sum U, enumerated as U = S * (-sigma(S)) with S
// zero-sum free, accepted iff sigma(S) is not a proper subsum of S.
MaxOutcome max_cross_minimal_zero_sum(const GroupPtr& g, const SearchLimits& lim,
                                      WitnessMode mode);

// max |S| over zero-sum free S (Davenport constant minus one).
MaxOutcome max_length_zero_sum_free(const GroupPtr& g, const SearchLimits& lim, WitnessMode mode);

// Longest sequence over `universe` with no forbidden zero-ish pattern: a
// violation is a nonempty subsequence whose sum lies in `target`, restricted
// to lengths <= window (window = 0: any length; exact_window: == window).
struct AvoiderSpec {
  std::vector<Elem> universe;
  Bitset target;
  std::int64_t window = 0;
  bool exact_window = false;
};
MaxOutcome max_length_avoider(const GroupPtr& g, const AvoiderSpec& spec, const SearchLimits& lim,
                              WitnessMode mode);

// Exhaustive enumeration helpers (tests and pipelines). The callback receives
// the multiset as a sorted index list; enumeration order is deterministic.
void for_each_zero_sum_free(const GroupPtr& g, std::int64_t max_len,
                            const std::function<void(const std::vector<Elem>&)>& fn);
void for_each_minimal_zero_sum(const GroupPtr& g, std::int64_t max_len,
                               const std::function<void(const std::vector<Elem>&)>& fn);

}  // namespace crossnum::search
