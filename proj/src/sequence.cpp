#include "crossnum/sequence.hpp"

#include "crossnum/errors.hpp"

namespace crossnum {

Sequence::Sequence(GroupPtr group) : group_(std::move(group)) { recompute(); }

Sequence::Sequence(GroupPtr group, const std::vector<std::pair<Elem, std::uint32_t>>& terms)
    : group_(std::move(group)) {
  for (auto [g, m] : terms) {
    if (g >= group_->order()) throw ParseError("sequence term out of range");
    if (m == 0) continue;
    terms_[g] += m;
  }
  recompute();
}

Sequence::Sequence(GroupPtr group, const std::vector<Elem>& elems) : group_(std::move(group)) {
  for (Elem g : elems) {
    if (g >= group_->order()) throw ParseError("sequence term out of range");
    ++terms_[g];
  }
  recompute();
}

void Sequence::recompute() {
  length_ = 0;
  sum_ = group_->zero();
  cross_ = Rational(0);
  for (auto [g, m] : terms_) {
    length_ += m;
    for (std::uint32_t i = 0; i < m; ++i) sum_ = group_->add(sum_, g);
    cross_ += Rational(BigInt(m), BigInt(group_->element_order(g)));
  }
}

std::uint32_t Sequence::multiplicity(Elem g) const {
  auto it = terms_.find(g);
  return it == terms_.end() ? 0 : it->second;
}

Rational Sequence::weighted_cross_number(const std::map<std::int64_t, Rational>& f) const {
  Rational out(0);
  for (auto [g, m] : terms_) {
    auto it = f.find(group_->element_order(g));
    if (it == f.end())
      throw ParseError("weighted_cross_number: weight function lacks order " +
                       std::to_string(group_->element_order(g)));
    out += Rational(BigInt(m)) * it->second;
  }
  return out;
}

bool Sequence::divides_into(const Sequence& s) const {
  if (!group_->same_presentation(*s.group_))
    throw ParseError("divides: sequences over different groups");
  for (auto [g, m] : terms_)
    if (s.multiplicity(g) < m) return false;
  return true;
}

Sequence Sequence::with(Elem g, std::uint32_t count) const {
  if (g >= group_->order()) throw ParseError("sequence term out of range");
  Sequence out = *this;
  if (count) {
    out.terms_[g] += count;
    out.recompute();
  }
  return out;
}

Sequence Sequence::concat(const Sequence& o) const {
  if (!group_->same_presentation(*o.group_))
    throw ParseError("concat: sequences over different groups");
  Sequence out = *this;
  for (auto [g, m] : o.terms_) out.terms_[g] += m;
  out.recompute();
  return out;
}

Sequence Sequence::remove_one(Elem g) const {
  auto it = terms_.find(g);
  if (it == terms_.end()) throw ParseError("remove_one: term not present");
  Sequence out = *this;
  auto jt = out.terms_.find(g);
  if (--jt->second == 0) out.terms_.erase(jt);
  out.recompute();
  return out;
}

Sequence Sequence::remove_all(const Sequence& t) const {
  if (!t.divides_into(*this)) throw ParseError("remove_all: not a subsequence");
  Sequence out = *this;
  for (auto [g, m] : t.terms_) {
    auto jt = out.terms_.find(g);
    jt->second -= m;
    if (jt->second == 0) out.terms_.erase(jt);
  }
  out.recompute();
  return out;
}

Sequence Sequence::amalgamate(const Sequence& t) const {
  if (t.empty()) throw ParseError("amalgamate: empty subsequence");
  Sequence out = remove_all(t);
  ++out.terms_[t.sum()];
  out.recompute();
  return out;
}

std::map<std::int64_t, std::int64_t> Sequence::order_histogram() const {
  std::map<std::int64_t, std::int64_t> h;
  for (auto [g, m] : terms_) h[group_->element_order(g)] += m;
  return h;
}

std::int64_t Sequence::count_of_order(std::int64_t d) const {
  std::int64_t n = 0;
  for (auto [g, m] : terms_)
    if (group_->element_order(g) == d) n += m;
  return n;
}

std::vector<Elem> Sequence::flat() const {
  std::vector<Elem> out;
  out.reserve(length_);
  for (auto [g, m] : terms_)
    for (std::uint32_t i = 0; i < m; ++i) out.push_back(g);
  return out;
}

}  // namespace crossnum
