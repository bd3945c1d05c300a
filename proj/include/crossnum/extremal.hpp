#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crossnum/group.hpp"
#include "crossnum/invariants.hpp"
#include "crossnum/rational.hpp"
#include "crossnum/sequence.hpp"

namespace crossnum {

// Every zero-sum free sequence attaining k(G), respectively every minimal
// zero-sum sequence attaining K(G), in deterministic (term-map) order. Each
// returned witness is re-verified against its defining predicate and value.
std::vector<Sequence> extremal_zero_sum_free(const GroupPtr& g,
                                             const search::SearchLimits& lim = {});
std::vector<Sequence> extremal_minimal_zero_sum(const GroupPtr& g,
                                                const search::SearchLimits& lim = {});

enum class StructureKind { ZeroSumFree, MinimalZeroSum };

// Does the sequence decompose the way the extremal-structure statements
// predict? Zero-sum free: every term has prime-power order, so S splits into
// primary parts. Minimal zero-sum: one designated term g of order exp(G)
// (with several prime divisors, the unique term of composite order; in a
// p-group any term of maximal order, smallest index chosen), the rest
// splitting into primary parts; minimality makes the remainder zero-sum free
// automatically.
struct StructureVerdict {
  bool decomposes = false;
  std::optional<Elem> cross_element;
  bool p_group_convention = false;  // single-prime group: g picked among max-order terms
  std::map<std::int64_t, Sequence> parts;  // prime -> primary part (cross element removed)
  std::vector<Elem> failures;              // offending terms, ascending, distinct
  std::string note;
};
StructureVerdict classify_structure(const Sequence& s, StructureKind kind);

struct StructureReport {
  std::string group;
  Rational k_value, K_value;
  std::int64_t zsf_total = 0, minimal_total = 0;
  std::vector<Sequence> zsf_failures, minimal_failures;
  bool zsf_all_decompose = false, minimal_all_decompose = false;
  bool partial = false;
};
StructureReport verify_structure_conjecture(const GroupPtr& g,
                                            const search::SearchLimits& lim = {});

}  // namespace crossnum
