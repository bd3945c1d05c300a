#pragma once

#include <bit>
#include <cstdint>
#include <memory>
#include <vector>

#include "crossnum/group.hpp"
#include "crossnum/sequence.hpp"

namespace crossnum {

// Fixed-size bitmap over element indices of one group.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::int64_t bits) : bits_(bits), w_((bits + 63) / 64, 0) {}

  std::int64_t size() const { return bits_; }
  bool test(std::int64_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(std::int64_t i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }

  Bitset& operator|=(const Bitset& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }

  bool intersects(const Bitset& o) const {
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }
  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  std::int64_t count() const {
    std::int64_t n = 0;
    for (auto w : w_) n += std::popcount(w);
    return n;
  }

  // Whole-bitmap shifts by a bit distance (overflow bits discarded; shl also
  // discards bits pushed past size()).
  Bitset shl(std::int64_t k) const;
  Bitset shr(std::int64_t k) const;

  friend bool operator==(const Bitset& a, const Bitset& b) {
    return a.bits_ == b.bits_ && a.w_ == b.w_;
  }

  void swap(Bitset& o) {
    std::swap(bits_, o.bits_);
    w_.swap(o.w_);
  }

  const std::vector<std::uint64_t>& words() const { return w_; }

 private:
  friend class BitGeometry;
  void trim();  // clear bits at positions >= bits_
  std::int64_t bits_ = 0;
  std::vector<std::uint64_t> w_;
};

// Precomputed masks turning "add g to every element of a set" into word-level
// operations: per canonical axis, adding c*e_j is a cyclic rotation of the
// coordinate, done as two masked whole-bitmap shifts. A single-component
// (cyclic) group reduces to one rotate of the bitmap.
class BitGeometry {
 public:
  explicit BitGeometry(GroupPtr group);

  const GroupPtr& group() const { return group_; }

  // {s + g : s in x} via per-axis rotations.
  Bitset add_to_all(const Bitset& x, Elem g) const;
  // Allocation-free variant for hot search loops. out receives the result;
  // scratch is a ping-pong buffer for multi-axis rotations. Both must already
  // be sized to |G| and must not alias x.
  void add_to_all_into(const Bitset& x, Elem g, Bitset& out, Bitset& scratch) const;
  // Reference implementation; must produce identical bitmaps.
  Bitset add_to_all_scalar(const Bitset& x, Elem g) const;

 private:
  Bitset rotate_axis(const Bitset& x, int axis, std::int64_t c) const;
  void rotate_axis_into(const Bitset& x, int axis, std::int64_t c, Bitset& out) const;

  GroupPtr group_;
  struct Axis {
    std::int64_t extent;
    std::int64_t stride;
    // low[c]: coord < extent-c (bits that shift up by c*stride);
    // high[c]: the complement within the universe.
    std::vector<Bitset> low, high;
  };
  std::vector<Axis> axes_;
};

using GeometryPtr = std::shared_ptr<const BitGeometry>;

// Incremental subset-sum structure for a sequence S:
//   attainable = { sigma(T) : T | S, T nonempty }
//   proper     = { sigma(T) : T | S, T nonempty, T != S }
// extend(g) updates both in O(|G|/64) words via the recurrences
//   attainable' = attainable | {g} | (attainable + g)
//   proper'     = attainable | {g} | (proper + g)   (S nonempty)
//   proper'     = {}                                (S empty: the child IS (g))
class SubsumTable {
 public:
  static SubsumTable empty(const GroupPtr& group);
  static SubsumTable of(const Sequence& s);

  SubsumTable extend(Elem g) const;

  bool attainable(Elem x) const { return attain_.test(x); }
  std::vector<Elem> subsums() const;
  std::int64_t subsum_count() const { return attain_.count(); }
  bool zero_sum_free() const { return !attain_.test(0); }
  // True iff sigma(S) is not the sum of any proper nonempty subsequence.
  bool full_sum_unique() const { return !proper_.test(total_); }
  bool covers_all_nonzero() const;

  Elem total() const { return total_; }
  std::int64_t length() const { return length_; }
  const Bitset& attain_bits() const { return attain_; }
  const Bitset& proper_bits() const { return proper_; }
  const GeometryPtr& geometry() const { return geom_; }

 private:
  GeometryPtr geom_;
  Bitset attain_, proper_;
  Elem total_ = 0;
  std::int64_t length_ = 0;
};

std::vector<Elem> subsums(const Sequence& s);
bool is_zero_sum_free(const Sequence& s);
// Nonempty, zero-sum, and no proper nonempty zero-sum subsequence. Equivalent
// O(1)-from-table test: U = S*x is minimal iff S is zero-sum free and sigma(S)
// is not a proper subsum of S.
bool is_minimal_zero_sum(const Sequence& u);
bool covers_all_nonzero(const Sequence& s);

}  // namespace crossnum
