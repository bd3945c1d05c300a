#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crossnum/group.hpp"
#include "crossnum/invariants.hpp"
#include "crossnum/rational.hpp"
#include "crossnum/sequence.hpp"

namespace crossnum {

// All zero-sum free sequences with maximal cross number and, among those,
// minimal length.
struct DenseResult {
  Rational value;  // k(G)
  std::vector<Sequence> sequences;
  bool partial = false;
};
DenseResult dense_sequences(const GroupPtr& g, const search::SearchLimits& lim = {});

// Count checks on dense sequences. Each validates its hypotheses first and
// throws HypothesisError when they fail; the boolean verdict is reserved for
// the actual count comparison.

// At most p-1 terms of order l, where the p-shape has a_1 > a_2 and
// p^(a_2 + 1) | l.
bool check_amalgamation_bound(const Sequence& s, std::int64_t p, std::int64_t l);
// At most eta(C_p^n) - 1 terms of order l, where a_n > a_{n+1} and
// p^(a_{n+1} + 1) | l. eta is computed by brute force (and cached), so keep n
// small. n = 1 collapses to the p-1 bound; n = 2 gives 3p-3.
bool check_n_amalgamation_bound(const Sequence& s, std::int64_t p, int n, std::int64_t l);
// At least p1-1 terms of order p1^a, for a in [a_{1,2}+1, a_{1,1}], under the
// wide hypothesis p1 wide w.r.t. exp(G)/p1^{a_{1,1}} (p1 = smallest prime).
bool check_1_replacement(const Sequence& s, int a);
// At least 2*p1-2 terms of order p1^a, for a in [a_{1,3}+1, a_{1,2}], under
// the 2-small hypothesis on exp(G)/p1^{a_{1,1}}.
bool check_2_replacement(const Sequence& s, int a);

// The two-generator replacement block: with e1, e2 generating the two largest
// p1-components, S1 = prod_k (p1^k e1)^(p1-1) * prod_l (p1^l e2)^(p1-1) for
// k <= a_{1,1}-a, l <= a_{1,2}-a. Every nonempty subsequence sum has order
// divisible by p1^a, and S1 is zero-sum free.
Sequence build_replacement_S1(const GroupPtr& g, int a);
// Its cross number in closed form:
// sum_{t=a}^{a12} (2p-2)/p^t + sum_{t=a12+1}^{a11} (p-1)/p^t.
Rational replacement_S1_cross_closed_form(const Group& g, int a);

// Per-divisor census of a sequence: for each d with p^a | d | exp(G), the
// count of order-d terms and the "full" tag (p^a || d and 2p-1 <= |S_d| <=
// 3p-3), plus the four-way partition used alongside it.
struct OrderClassLedger {
  std::int64_t p = 0;
  int a = 0;
  int a2 = 0;  // second exponent of p in the canonical shape (0 if rank 1)
  std::int64_t exponent = 0;
  std::vector<std::int64_t> domain;  // all d with p^a | d | exp(G), ascending
  std::map<std::int64_t, std::int64_t> counts;
  std::map<std::int64_t, bool> full;
  bool base_full = false;  // whether d = p^a itself meets the fullness bounds
  // d1: full, excluding p^a (so the five pieces partition the domain);
  // d2: p^a || d, not full, d != p^a;
  // d3: p^(a+1) | d, p^(a2+1) does not divide d;
  // d4: p^(a2+1) | d.
  std::vector<std::int64_t> d1, d2, d3, d4;
  bool partition_ok = false;
};
OrderClassLedger classify_full_orders(const Sequence& s, std::int64_t p, int a);

// Floor-sum chains: s_1 = t_1, s_i = frac(s_{i-1}) + t_i.
//   bound1: sum floor(s_i)/p^i >= sum t_i/p^i + (1/b - 1)/p,
//           tight iff s_i + 1/b integral for every i.
//   bound2 (requires s_n integral):
//           rhs = sum t_i/p^i + (1/p - 1/p^n)(1/b - 1),
//           tight iff s_i + 1/b integral for every i < n.
// Both verify lhs >= rhs and throw ViolationError if it ever failed.
struct FloorSumResult {
  Rational lhs, rhs;
  bool tight = false;
  std::vector<Rational> s_chain;
};
FloorSumResult floor_sum_bound1(const std::vector<Rational>& t, std::int64_t p, std::int64_t b);
FloorSumResult floor_sum_bound2(const std::vector<Rational>& t, std::int64_t p, std::int64_t b);

// Projection-merge pipelines: repeatedly replace subsequences whose
// projection onto a cyclic coordinate is a minimal zero-sum by their sums,
// floor(cross) extractions per stage, until the merged part lies in the
// p-coordinate. The ledger records every stage, every extraction, and the
// resulting inequality sides as exact fractions.
struct MergeExtraction {
  std::vector<Elem> preimage;   // consumed parent elements, ascending index
  std::vector<Elem> projected;  // their projections, a minimal zero-sum
  Elem replacement = 0;         // sum of the preimage in the parent group
  Rational projected_cross;
};

struct MergeStage {
  int stage = 0;
  std::string projection;  // which coordinate was projected ("q" or "r")
  Rational carry_in;       // cross of the projected leftover from the prior stage
  Rational fresh;          // cross of the newly projected classes
  Rational kappa;          // carry_in + fresh
  std::int64_t extracted = 0;
  Rational extracted_cross;
  Rational carry_out;            // kappa - extracted_cross
  bool count_is_floor = false;   // extracted == floor(kappa)
  bool fraction_exact = false;   // carry_out == frac(kappa)
  std::vector<MergeExtraction> extractions;
};

struct InequalityLine {
  std::string name;
  Rational lhs, rhs;
  bool holds = false;       // lhs >= rhs
  bool applicable = true;   // false: hypothesis for this line not met; not a failure
  std::string note;
};

struct MergeLedger {
  explicit MergeLedger(const GroupPtr& g)
      : input(g), output(g), p_part(g), leftover(g) {}

  std::string pipeline;  // "pq" or "pqr"
  bool input_minimal = false;
  Sequence input, output;
  Sequence p_part;    // merged part lying in the p-coordinate
  Sequence leftover;  // unreplaced terms of composite order
  std::int64_t p = 0, q = 0, r = 0;
  std::int64_t q_modulus = 0;  // q^m for the pq pipeline
  std::vector<MergeStage> stages;
  std::vector<InequalityLine> checks;
  std::vector<std::pair<std::string, bool>> assertions;
};

// Group must be H_p + C_{q^m} (two primes, cyclic part for the larger prime
// whose Sylow subgroup is cyclic); input zero-sum free or minimal zero-sum.
MergeLedger projection_merge_pq(const Sequence& s);
// Group must be C_p + C_q + C_r, three distinct primes.
MergeLedger projection_merge_pqr(const Sequence& s);

}  // namespace crossnum
