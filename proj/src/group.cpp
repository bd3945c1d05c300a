#include "crossnum/group.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "crossnum/errors.hpp"

namespace crossnum {

std::int64_t smallest_prime_divisor(std::int64_t n) {
  if (n <= 1) throw ParseError("smallest_prime_divisor: argument must be > 1");
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return d;
  return n;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  if (n < 1) throw ParseError("factorize: argument must be >= 1");
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      int e = 0;
      while (n % d == 0) {
        n /= d;
        ++e;
      }
      out.emplace_back(d, e);
    }
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

namespace {

std::vector<std::int64_t> parse_factor_list(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(c));
  std::vector<std::int64_t> factors;
  if (s.empty()) return factors;

  auto parse_int = [](const std::string& tok) -> std::int64_t {
    if (tok.empty()) throw ParseError("group text: empty factor");
    for (char c : tok)
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw ParseError("group text: bad factor '" + tok + "'");
    if (tok.size() > 10) throw ParseError("group text: factor too large '" + tok + "'");
    return std::stoll(tok);
  };

  if (s.find('c') != std::string::npos) {
    // CnxCm... form
    size_t pos = 0;
    while (pos < s.size()) {
      if (s[pos] != 'c') throw ParseError("group text: expected 'C' in '" + std::string(text) + "'");
      ++pos;
      size_t end = s.find('x', pos);
      std::string tok = s.substr(pos, end == std::string::npos ? end : end - pos);
      factors.push_back(parse_int(tok));
      if (end == std::string::npos) break;
      pos = end + 1;
      if (pos >= s.size()) throw ParseError("group text: trailing separator");
    }
  } else {
    size_t pos = 0;
    while (pos <= s.size()) {
      size_t end = s.find(',', pos);
      std::string tok = s.substr(pos, end == std::string::npos ? end : end - pos);
      factors.push_back(parse_int(tok));
      if (end == std::string::npos) break;
      pos = end + 1;
    }
  }
  return factors;
}

}  // namespace

Group Group::parse(std::string_view text, std::int64_t order_cap) {
  Group g;
  g.build(parse_factor_list(text), order_cap);
  return g;
}

Group Group::from_factors(const std::vector<std::int64_t>& factors, std::int64_t order_cap) {
  Group g;
  g.build(factors, order_cap);
  return g;
}

void Group::build(std::vector<std::int64_t> given, std::int64_t order_cap) {
  for (std::int64_t f : given)
    if (f < 1) throw ParseError("group factor must be a positive integer");

  given_ = given;
  order_ = 1;
  for (std::int64_t f : given) {
    if (f > order_cap) throw LimitError("group order exceeds cap");
    order_ *= f;
    if (order_ > order_cap) throw LimitError("group order exceeds cap");
  }

  // CRT split into prime-power cyclic factors.
  for (std::int64_t f : given)
    for (auto [p, e] : factorize(f)) {
      std::int64_t m = 1;
      for (int i = 0; i < e; ++i) m *= p;
      canon_.push_back(PrimePower{p, e, m});
    }
  std::sort(canon_.begin(), canon_.end(), [](const PrimePower& a, const PrimePower& b) {
    if (a.prime != b.prime) return a.prime < b.prime;
    return a.exponent > b.exponent;
  });

  for (const auto& pp : canon_) {
    if (shapes_.empty() || shapes_.back().prime != pp.prime)
      shapes_.push_back(PrimeShape{pp.prime, {}});
    shapes_.back().exponents.push_back(pp.exponent);
  }

  exponent_ = 1;
  for (const auto& sh : shapes_) {
    std::int64_t m = 1;
    for (int i = 0; i < sh.exponents[0]; ++i) m *= sh.prime;
    exponent_ *= m;
  }

  strides_.assign(canon_.size(), 1);
  for (int j = static_cast<int>(canon_.size()) - 2; j >= 0; --j)
    strides_[j] = strides_[j + 1] * canon_[j + 1].modulus;

  order_of_.resize(order_);
  neg_.resize(order_);
  for (std::int64_t idx = 0; idx < order_; ++idx) {
    std::int64_t ord = 1;
    std::int64_t negidx = 0;
    for (size_t j = 0; j < canon_.size(); ++j) {
      std::int64_t m = canon_[j].modulus;
      std::int64_t c = (idx / strides_[j]) % m;
      ord = std::lcm(ord, m / std::gcd(c, m));
      negidx += ((m - c) % m) * strides_[j];
    }
    order_of_[idx] = ord;
    neg_[idx] = static_cast<Elem>(negidx);
  }
}

Elem Group::add(Elem a, Elem b) const {
  std::int64_t out = 0;
  for (size_t j = 0; j < canon_.size(); ++j) {
    std::int64_t m = canon_[j].modulus;
    std::int64_t s = strides_[j];
    std::int64_t c = ((a / s) % m + (b / s) % m) % m;
    out += c * s;
  }
  return static_cast<Elem>(out);
}

std::vector<std::int64_t> Group::coords(Elem a) const {
  std::vector<std::int64_t> c(canon_.size());
  for (size_t j = 0; j < canon_.size(); ++j) c[j] = coordinate(a, static_cast<int>(j));
  return c;
}

Elem Group::from_coords(const std::vector<std::int64_t>& c) const {
  if (c.size() != canon_.size())
    throw ParseError("element coords: expected " + std::to_string(canon_.size()) +
                     " coordinates, got " + std::to_string(c.size()));
  std::int64_t idx = 0;
  for (size_t j = 0; j < canon_.size(); ++j) {
    std::int64_t m = canon_[j].modulus;
    std::int64_t v = c[j] % m;
    if (v < 0) v += m;
    idx += v * strides_[j];
  }
  return static_cast<Elem>(idx);
}

std::vector<Elem> Group::elements() const {
  std::vector<Elem> out(order_);
  for (std::int64_t i = 0; i < order_; ++i) out[i] = static_cast<Elem>(i);
  return out;
}

Elem Group::primary_projection(Elem a, std::int64_t p) const {
  std::int64_t out = 0;
  for (size_t j = 0; j < canon_.size(); ++j)
    if (canon_[j].prime == p) out += coordinate(a, static_cast<int>(j)) * strides_[j];
  return static_cast<Elem>(out);
}

Group::Subgroup Group::primary_component(std::int64_t p) const {
  std::vector<std::int64_t> factors;
  std::vector<int> comps;
  for (size_t j = 0; j < canon_.size(); ++j)
    if (canon_[j].prime == p) {
      factors.push_back(canon_[j].modulus);
      comps.push_back(static_cast<int>(j));
    }
  Subgroup sub;
  sub.group = std::make_shared<Group>(Group::from_factors(factors, order_));
  sub.embed.resize(sub.group->order());
  for (Elem x = 0; x < sub.group->order(); ++x) {
    std::int64_t parent = 0;
    for (size_t k = 0; k < comps.size(); ++k)
      parent += sub.group->coordinate(x, static_cast<int>(k)) * strides_[comps[k]];
    sub.embed[x] = static_cast<Elem>(parent);
  }
  return sub;
}

std::vector<std::int64_t> Group::invariant_factors() const {
  // n_r collects the largest power of every prime, n_{r-1} the next, ...
  size_t rank = 0;
  for (const auto& sh : shapes_) rank = std::max(rank, sh.exponents.size());
  std::vector<std::int64_t> inv(rank, 1);
  for (const auto& sh : shapes_)
    for (size_t i = 0; i < sh.exponents.size(); ++i) {
      std::int64_t m = 1;
      for (int t = 0; t < sh.exponents[i]; ++t) m *= sh.prime;
      inv[rank - 1 - i] *= m;
    }
  return inv;  // ascending, n_1 | n_2 | ... | n_r
}

std::string Group::canonical_text() const {
  if (canon_.empty()) return "C1";
  std::string out;
  for (size_t j = 0; j < canon_.size(); ++j) {
    if (j) out += "x";
    out += "C" + std::to_string(canon_[j].modulus);
  }
  return out;
}

std::string Group::given_text() const {
  if (given_.empty()) return "C1";
  std::string out;
  for (size_t j = 0; j < given_.size(); ++j) {
    if (j) out += "x";
    out += "C" + std::to_string(given_[j]);
  }
  return out;
}

}  // namespace crossnum
