#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "crossnum/group.hpp"
#include "crossnum/rational.hpp"

namespace crossnum {

// A finite multiset of group elements ("sequence" in the multiplicative
// convention: order never matters, multiplicities do). Immutable value type;
// all mutators return new sequences.
class Sequence {
 public:
  explicit Sequence(GroupPtr group);
  Sequence(GroupPtr group, const std::vector<std::pair<Elem, std::uint32_t>>& terms);
  // From a flat list of element indices (repeats allowed).
  Sequence(GroupPtr group, const std::vector<Elem>& elems);

  const GroupPtr& group() const { return group_; }
  const std::map<Elem, std::uint32_t>& terms() const { return terms_; }
  std::int64_t length() const { return length_; }
  bool empty() const { return length_ == 0; }
  std::uint32_t multiplicity(Elem g) const;

  Elem sum() const { return sum_; }
  // k(S) = sum of v_g(S)/ord(g), exact.
  const Rational& cross_number() const { return cross_; }
  // k(S, f) = sum of v_g(S) * f(ord(g)); throws if f lacks an occurring order.
  Rational weighted_cross_number(const std::map<std::int64_t, Rational>& f) const;

  // Multiset containment T | S.
  bool divides_into(const Sequence& s) const;

  Sequence with(Elem g, std::uint32_t count = 1) const;
  Sequence concat(const Sequence& o) const;
  // Removes one copy of g; throws if absent.
  Sequence remove_one(Elem g) const;
  // Removes T (multiset difference); throws unless T | S.
  Sequence remove_all(const Sequence& t) const;
  // Replaces subsequence T by the single term sigma(T); throws unless T is a
  // nonempty subsequence.
  Sequence amalgamate(const Sequence& t) const;

  // ord -> number of terms of that order (with multiplicity).
  std::map<std::int64_t, std::int64_t> order_histogram() const;
  std::int64_t count_of_order(std::int64_t d) const;

  // Flat sorted list of element indices.
  std::vector<Elem> flat() const;

  // Total order for canonical sorting / dedup (group assumed equal).
  friend bool operator<(const Sequence& a, const Sequence& b) { return a.terms_ < b.terms_; }
  friend bool operator==(const Sequence& a, const Sequence& b) { return a.terms_ == b.terms_; }

 private:
  void recompute();
  GroupPtr group_;
  std::map<Elem, std::uint32_t> terms_;
  std::int64_t length_ = 0;
  Elem sum_ = 0;
  Rational cross_;
};

}  // namespace crossnum
