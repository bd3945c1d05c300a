#include "crossnum/subsums.hpp"

#include "crossnum/errors.hpp"

namespace crossnum {

void Bitset::trim() {
  int rem = bits_ & 63;
  if (rem && !w_.empty()) w_.back() &= (std::uint64_t(1) << rem) - 1;
}

Bitset Bitset::shl(std::int64_t k) const {
  Bitset out(bits_);
  if (k >= bits_) return out;
  std::int64_t wordshift = k >> 6;
  int bitshift = k & 63;
  for (std::int64_t i = static_cast<std::int64_t>(w_.size()) - 1; i >= wordshift; --i) {
    std::uint64_t v = w_[i - wordshift] << bitshift;
    if (bitshift && i - wordshift - 1 >= 0) v |= w_[i - wordshift - 1] >> (64 - bitshift);
    out.w_[i] = v;
  }
  out.trim();
  return out;
}

Bitset Bitset::shr(std::int64_t k) const {
  Bitset out(bits_);
  if (k >= bits_) return out;
  std::int64_t wordshift = k >> 6;
  int bitshift = k & 63;
  std::int64_t n = static_cast<std::int64_t>(w_.size());
  for (std::int64_t i = 0; i + wordshift < n; ++i) {
    std::uint64_t v = w_[i + wordshift] >> bitshift;
    if (bitshift && i + wordshift + 1 < n) v |= w_[i + wordshift + 1] << (64 - bitshift);
    out.w_[i] = v;
  }
  return out;
}

BitGeometry::BitGeometry(GroupPtr group) : group_(std::move(group)) {
  const Group& G = *group_;
  std::int64_t n = G.order();
  axes_.resize(G.components());
  for (int j = 0; j < G.components(); ++j) {
    Axis& ax = axes_[j];
    ax.extent = G.canonical()[j].modulus;
    ax.stride = G.strides()[j];
    ax.low.resize(ax.extent);
    ax.high.resize(ax.extent);
    for (std::int64_t c = 1; c < ax.extent; ++c) {
      Bitset low(n), high(n);
      for (std::int64_t i = 0; i < n; ++i) {
        if (G.coordinate(static_cast<Elem>(i), j) < ax.extent - c)
          low.set(i);
        else
          high.set(i);
      }
      ax.low[c] = std::move(low);
      ax.high[c] = std::move(high);
    }
  }
}

Bitset BitGeometry::rotate_axis(const Bitset& x, int axis, std::int64_t c) const {
  const Axis& ax = axes_[axis];
  Bitset lo = x;
  lo &= ax.low[c];
  Bitset hi = x;
  hi &= ax.high[c];
  Bitset out = lo.shl(c * ax.stride);
  out |= hi.shr((ax.extent - c) * ax.stride);
  return out;
}

// Fused (x & mask) >> / << without temporaries: word i of the rotated bitmap
// combines the up-shifted low part and the down-shifted high part. Masked
// bits never cross the size boundary (a rotated coordinate stays in range),
// so no trim is needed.
void BitGeometry::rotate_axis_into(const Bitset& x, int axis, std::int64_t c, Bitset& out) const {
  const Axis& ax = axes_[axis];
  const auto& xw = x.w_;
  const auto& lw = ax.low[c].w_;
  const auto& hw = ax.high[c].w_;
  auto& ow = out.w_;
  const std::int64_t n = static_cast<std::int64_t>(xw.size());
  const std::int64_t kl = c * ax.stride;
  const std::int64_t kr = (ax.extent - c) * ax.stride;
  const std::int64_t wsl = kl >> 6;
  const int bsl = kl & 63;
  const std::int64_t wsr = kr >> 6;
  const int bsr = kr & 63;
  for (std::int64_t i = 0; i < n; ++i) {
    std::uint64_t v = 0;
    std::int64_t j = i - wsl;
    if (j >= 0) {
      v = (xw[j] & lw[j]) << bsl;
      if (bsl && j >= 1) v |= (xw[j - 1] & lw[j - 1]) >> (64 - bsl);
    }
    std::int64_t k = i + wsr;
    if (k < n) {
      std::uint64_t u = (xw[k] & hw[k]) >> bsr;
      if (bsr && k + 1 < n) u |= (xw[k + 1] & hw[k + 1]) << (64 - bsr);
      v |= u;
    }
    ow[i] = v;
  }
}

void BitGeometry::add_to_all_into(const Bitset& x, Elem g, Bitset& out, Bitset& scratch) const {
  const Bitset* src = &x;
  bool rotated = false;
  for (size_t j = 0; j < axes_.size(); ++j) {
    std::int64_t c = group_->coordinate(g, static_cast<int>(j));
    if (!c) continue;
    if (!rotated) {
      rotate_axis_into(*src, static_cast<int>(j), c, out);
      rotated = true;
    } else {
      rotate_axis_into(out, static_cast<int>(j), c, scratch);
      out.swap(scratch);
    }
    src = &out;
  }
  if (!rotated) out = x;
}

Bitset BitGeometry::add_to_all(const Bitset& x, Elem g) const {
  Bitset out = x;
  for (size_t j = 0; j < axes_.size(); ++j) {
    std::int64_t c = group_->coordinate(g, static_cast<int>(j));
    if (c) out = rotate_axis(out, static_cast<int>(j), c);
  }
  return out;
}

Bitset BitGeometry::add_to_all_scalar(const Bitset& x, Elem g) const {
  Bitset out(x.size());
  for (std::int64_t i = 0; i < x.size(); ++i)
    if (x.test(i)) out.set(group_->add(static_cast<Elem>(i), g));
  return out;
}

SubsumTable SubsumTable::empty(const GroupPtr& group) {
  SubsumTable t;
  t.geom_ = std::make_shared<const BitGeometry>(group);
  t.attain_ = Bitset(group->order());
  t.proper_ = Bitset(group->order());
  return t;
}

SubsumTable SubsumTable::of(const Sequence& s) {
  SubsumTable t = empty(s.group());
  for (auto [g, m] : s.terms())
    for (std::uint32_t i = 0; i < m; ++i) t = t.extend(g);
  return t;
}

SubsumTable SubsumTable::extend(Elem g) const {
  SubsumTable t;
  t.geom_ = geom_;
  t.proper_ = geom_->add_to_all(proper_, g);
  t.proper_ |= attain_;
  // The singleton (g) is a proper subsequence of the extension only if the
  // current sequence is nonempty; otherwise the extension IS (g).
  if (length_ > 0) t.proper_.set(g);
  t.attain_ = geom_->add_to_all(attain_, g);
  t.attain_ |= attain_;
  t.attain_.set(g);
  t.total_ = geom_->group()->add(total_, g);
  t.length_ = length_ + 1;
  return t;
}

std::vector<Elem> SubsumTable::subsums() const {
  std::vector<Elem> out;
  for (std::int64_t i = 0; i < attain_.size(); ++i)
    if (attain_.test(i)) out.push_back(static_cast<Elem>(i));
  return out;
}

bool SubsumTable::covers_all_nonzero() const {
  for (std::int64_t i = 1; i < attain_.size(); ++i)
    if (!attain_.test(i)) return false;
  return true;
}

std::vector<Elem> subsums(const Sequence& s) { return SubsumTable::of(s).subsums(); }

bool is_zero_sum_free(const Sequence& s) { return SubsumTable::of(s).zero_sum_free(); }

bool is_minimal_zero_sum(const Sequence& u) {
  if (u.empty()) return false;
  Elem x = u.terms().begin()->first;
  Sequence s = u.remove_one(x);
  if (u.group()->add(s.sum(), x) != u.group()->zero()) return false;
  SubsumTable t = SubsumTable::of(s);
  return t.zero_sum_free() && t.full_sum_unique();
}

bool covers_all_nonzero(const Sequence& s) { return SubsumTable::of(s).covers_all_nonzero(); }

}  // namespace crossnum
