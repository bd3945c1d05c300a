#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "crossnum/extremal.hpp"
#include "crossnum/group.hpp"
#include "crossnum/invariants.hpp"
#include "crossnum/rational.hpp"
#include "crossnum/sequence.hpp"
#include "crossnum/transforms.hpp"

namespace crossnum {

// Key order is part of the byte-stability contract, so everything serializes
// through ordered_json.
using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);  // {"num": .., "den": ..}, never floats
Json to_json(const Sequence& s);  // the sequence file format
Json to_json(const search::SearchLimits& lim);  // thread count deliberately omitted
Json to_json(const InvariantReport& rep);
Json to_json(const StructureVerdict& v, const Group& g);
Json to_json(const StructureReport& rep);
Json to_json(const MergeLedger& led);

// Sequence file format: {"group": text, "terms": [{"coords": [..], "mult": n}]}.
Sequence sequence_from_json(const Json& j, std::int64_t order_cap = kDefaultOrderCap);
Sequence load_sequence_file(const std::string& path, std::int64_t order_cap = kDefaultOrderCap);

// Certificates: one invariant claim with re-checkable witnesses. Anything a
// verifier cannot recheck from the witnesses alone (maximality) is marked
// "search-asserted".
Json make_certificate(const std::string& invariant, const Rational& value,
                      const std::vector<Sequence>& witnesses, const GroupPtr& g,
                      const search::SearchLimits& lim, bool partial);

struct VerifyOutcome {
  bool ok = true;
  std::vector<std::string> problems;
};
// Re-checks every witness claim in a parsed certificate. Structural problems
// (missing fields, bad types, unknown invariant) throw ParseError; claim
// violations land in the outcome.
VerifyOutcome verify_certificate(const Json& cert, std::int64_t order_cap = kDefaultOrderCap);

// Conjecture sweep over every abelian group of order 2..max_order, one
// InvariantReport JSON line per group. Nondeterministic data (timestamps,
// node counts, elapsed time) lives in a separate "meta" member so the rest of
// each line is byte-stable across runs and worker counts.
struct SweepOptions {
  std::int64_t max_order = 0;
  std::string out_path;
  bool resume = false;
  search::SearchLimits limits{};
};

struct SweepResult {
  int exit_code = 0;  // 0 clean, 1 verdict violation, 3 partial under limits
  std::int64_t groups_done = 0;
  std::int64_t groups_skipped = 0;
  std::vector<std::string> violations;  // canonical texts with a false verdict
  bool partial = false;
};

// Canonical factor lists of every abelian group of order n, in sweep order:
// per prime (ascending, first prime most significant) the exponent partitions
// in largest-first order.
std::vector<std::vector<std::int64_t>> abelian_groups_of_order(std::int64_t n);

SweepResult run_sweep(const SweepOptions& opt);

}  // namespace crossnum
