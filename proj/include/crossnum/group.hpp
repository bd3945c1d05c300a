#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crossnum {

// Elements are dense indices into the canonical coordinate box; see Group.
using Elem = std::uint32_t;

struct PrimePower {
  std::int64_t prime = 0;
  int exponent = 0;
  std::int64_t modulus = 0;  // prime^exponent

  friend bool operator==(const PrimePower& a, const PrimePower& b) {
    return a.prime == b.prime && a.exponent == b.exponent;
  }
};

inline constexpr std::int64_t kDefaultOrderCap = 512;

std::int64_t smallest_prime_divisor(std::int64_t n);
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

// A finite abelian group in canonical primary decomposition: cyclic factors of
// prime-power order, primes ascending and exponents descending within a prime
// (so C12 x C2 becomes C4 x C2 x C3). Elements are addressed by a dense index
// in mixed radix over the canonical factors, component 0 most significant.
class Group {
 public:
  // Accepts "12", "6,2", "C2xC2xC3" (case-insensitive, whitespace ignored).
  // Factors equal to 1 contribute nothing; an empty list is the trivial group.
  static Group parse(std::string_view text, std::int64_t order_cap = kDefaultOrderCap);
  static Group from_factors(const std::vector<std::int64_t>& factors,
                            std::int64_t order_cap = kDefaultOrderCap);

  const std::vector<std::int64_t>& given_factors() const { return given_; }
  const std::vector<PrimePower>& canonical() const { return canon_; }
  std::int64_t order() const { return order_; }
  std::int64_t exponent() const { return exponent_; }
  bool trivial() const { return order_ == 1; }
  int components() const { return static_cast<int>(canon_.size()); }

  // Distinct primes in ascending order with their exponent lists (descending),
  // i.e. the a_{i,1} >= a_{i,2} >= ... shape data of the canonical form.
  struct PrimeShape {
    std::int64_t prime;
    std::vector<int> exponents;
  };
  const std::vector<PrimeShape>& prime_shapes() const { return shapes_; }

  // Invariant factor form n_1 | n_2 | ... | n_r (all > 1), built by
  // largest-first aggregation of the canonical components.
  std::vector<std::int64_t> invariant_factors() const;

  Elem zero() const { return 0; }
  Elem add(Elem a, Elem b) const;
  Elem neg(Elem a) const { return neg_[a]; }
  std::int64_t element_order(Elem a) const { return order_of_[a]; }

  std::int64_t coordinate(Elem a, int comp) const {
    return (a / strides_[comp]) % canon_[comp].modulus;
  }
  std::vector<std::int64_t> coords(Elem a) const;
  Elem from_coords(const std::vector<std::int64_t>& c) const;

  // All elements, index order.
  std::vector<Elem> elements() const;

  // Projection onto the p-primary coordinates (other coordinates zeroed).
  Elem primary_projection(Elem a, std::int64_t p) const;
  // Projection onto a single canonical component.
  std::int64_t component_projection(Elem a, int comp) const { return coordinate(a, comp); }
  // Membership in G_d = {g : ord(g) | d}.
  bool in_subgroup_of_exponent(Elem a, std::int64_t d) const {
    return d > 0 && d % order_of_[a] == 0;
  }

  // The p-primary component as a group in its own right, together with the
  // embedding of its elements into this group.
  struct Subgroup {
    std::shared_ptr<const Group> group;
    std::vector<Elem> embed;  // subgroup index -> parent index
  };
  Subgroup primary_component(std::int64_t p) const;

  std::string canonical_text() const;  // "C4xC3"; trivial group -> "C1"
  std::string given_text() const;      // the factors as given, "C6" or "C2xC2"
  bool same_presentation(const Group& o) const { return canon_ == o.canon_; }

  // Mixed-radix strides (component 0 most significant).
  const std::vector<std::int64_t>& strides() const { return strides_; }

 private:
  Group() = default;
  void build(std::vector<std::int64_t> given, std::int64_t order_cap);

  std::vector<std::int64_t> given_;
  std::vector<PrimePower> canon_;
  std::vector<PrimeShape> shapes_;
  std::vector<std::int64_t> strides_;
  std::vector<std::int64_t> order_of_;
  std::vector<Elem> neg_;
  std::int64_t order_ = 1;
  std::int64_t exponent_ = 1;
};

using GroupPtr = std::shared_ptr<const Group>;

inline GroupPtr make_group(std::string_view text, std::int64_t cap = kDefaultOrderCap) {
  return std::make_shared<Group>(Group::parse(text, cap));
}

}  // namespace crossnum
