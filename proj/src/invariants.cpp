#include "crossnum/invariants.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "crossnum/errors.hpp"
#include "crossnum/subsums.hpp"

namespace crossnum {

Rational k_star(const Group& g) {
  Rational sum;
  for (const auto& c : g.canonical()) sum += Rational(1) - Rational::of(1, c.modulus);
  return sum;
}

Rational K_star(const Group& g) { return k_star(g) + Rational::of(1, g.exponent()); }

Rational divisor_harmonic_sum(std::int64_t n) {
  if (n < 1) throw Error("divisor sum needs a positive integer");
  Rational sum;
  for (std::int64_t d = 1; d <= n; ++d)
    if (n % d == 0) sum += Rational::of(1, d);
  return sum;
}

namespace {

bool is_prime(std::int64_t p) { return p >= 2 && smallest_prime_divisor(p) == p; }

}  // namespace

bool is_wide(std::int64_t p, std::int64_t n) {
  if (!is_prime(p)) throw HypothesisError("wide: p must be prime");
  if (n < 1) throw HypothesisError("wide: n must be positive");
  if (n % p == 0) return false;
  return Rational::of(p, p - 1) >= divisor_harmonic_sum(n);
}

bool is_two_small(std::int64_t p, std::int64_t n) {
  if (!is_prime(p)) throw HypothesisError("2-small: p must be prime");
  if (n < 1) throw HypothesisError("2-small: n must be positive");
  if (n % p == 0) return false;
  return Rational::of(2 * p + 2, 2 * p + 1) > divisor_harmonic_sum(n);
}

namespace {

// Complete (non-partial) search outcomes are exact facts about the group, so
// they are shared across calls; eta values in particular get re-queried for
// every dense sequence in the lemma checks.
std::mutex g_cache_mu;
std::map<std::string, search::MaxOutcome>& cache_map() {
  static std::map<std::string, search::MaxOutcome> m;
  return m;
}

std::string cache_key(const char* tag, const Group& g, search::WitnessMode mode,
                      std::int64_t x = 0, std::int64_t y = 0) {
  std::ostringstream os;
  os << tag << '|' << g.canonical_text() << '|' << static_cast<int>(mode) << '|' << x << '|' << y;
  return os.str();
}

template <class Fn>
search::MaxOutcome cached(const std::string& key, Fn&& compute) {
  {
    std::lock_guard<std::mutex> lk(g_cache_mu);
    auto it = cache_map().find(key);
    if (it != cache_map().end()) return it->second;
  }
  search::MaxOutcome out = compute();
  if (!out.partial) {
    std::lock_guard<std::mutex> lk(g_cache_mu);
    cache_map().emplace(key, out);
  }
  return out;
}

std::vector<Sequence> to_sequences(const GroupPtr& g,
                                   const std::vector<std::vector<Elem>>& wits) {
  std::vector<Sequence> out;
  out.reserve(wits.size());
  for (const auto& w : wits) out.emplace_back(g, w);
  std::sort(out.begin(), out.end());
  return out;
}

CrossResult cross_result(const GroupPtr& g, const search::MaxOutcome& o) {
  CrossResult r;
  r.value = Rational::of(o.best, o.scale);
  r.witnesses = to_sequences(g, o.witnesses);
  r.partial = o.partial;
  r.nodes = o.nodes;
  return r;
}

LengthResult length_result(const GroupPtr& g, const search::MaxOutcome& o) {
  LengthResult r;
  r.value = o.best + 1;  // threshold = longest avoider + 1
  r.witnesses = to_sequences(g, o.witnesses);
  r.partial = o.partial;
  r.nodes = o.nodes;
  return r;
}

search::SearchLimits with_window_cap(const GroupPtr& g, search::SearchLimits lim) {
  // Safety net for the windowed searches; never reached for real thresholds.
  if (lim.max_length == 0) lim.max_length = g->order() * g->exponent();
  return lim;
}

Bitset subgroup_mask(const Group& g, std::int64_t d) {
  Bitset m(g.order());
  for (std::int64_t i = 0; i < g.order(); ++i)
    if (d % g.element_order(static_cast<Elem>(i)) == 0) m.set(static_cast<Elem>(i));
  return m;
}

void check_girard_pair(const Group& g, std::int64_t d_prime, std::int64_t d) {
  if (d_prime < 1 || d < 1) throw HypothesisError("d' and d must be positive");
  if (d % d_prime != 0) throw HypothesisError("d' must divide d");
  if (g.exponent() % d != 0) throw HypothesisError("d must divide exp(G)");
}

}  // namespace

CrossResult little_cross_number(const GroupPtr& g, const search::SearchLimits& lim,
                                search::WitnessMode mode) {
  auto o = cached(cache_key("k", *g, mode),
                  [&] { return search::max_cross_zero_sum_free(g, lim, mode); });
  return cross_result(g, o);
}

CrossResult big_cross_number(const GroupPtr& g, const search::SearchLimits& lim,
                             search::WitnessMode mode) {
  auto o = cached(cache_key("K", *g, mode),
                  [&] { return search::max_cross_minimal_zero_sum(g, lim, mode); });
  return cross_result(g, o);
}

LengthResult davenport(const GroupPtr& g, const search::SearchLimits& lim,
                       search::WitnessMode mode) {
  auto o = cached(cache_key("D", *g, mode),
                  [&] { return search::max_length_zero_sum_free(g, lim, mode); });
  return length_result(g, o);
}

LengthResult eta(const GroupPtr& g, const search::SearchLimits& lim, search::WitnessMode mode) {
  auto o = cached(cache_key("eta", *g, mode), [&] {
    search::AvoiderSpec spec;
    for (std::int64_t i = 1; i < g->order(); ++i) spec.universe.push_back(static_cast<Elem>(i));
    spec.target = Bitset(g->order());
    spec.target.set(0);
    spec.window = g->exponent();
    spec.exact_window = false;
    return search::max_length_avoider(g, spec, with_window_cap(g, lim), mode);
  });
  return length_result(g, o);
}

LengthResult s_egz(const GroupPtr& g, const search::SearchLimits& lim, search::WitnessMode mode) {
  if (g->invariant_factors().size() > 2)
    throw LimitError("s is only computed for groups of rank <= 2");
  auto o = cached(cache_key("s", *g, mode), [&] {
    search::AvoiderSpec spec;
    for (std::int64_t i = 0; i < g->order(); ++i) spec.universe.push_back(static_cast<Elem>(i));
    spec.target = Bitset(g->order());
    spec.target.set(0);
    spec.window = g->exponent();
    spec.exact_window = true;
    return search::max_length_avoider(g, spec, with_window_cap(g, lim), mode);
  });
  return length_result(g, o);
}

LengthResult girard_bruteforce_D(const GroupPtr& g, std::int64_t d_prime, std::int64_t d,
                                 const search::SearchLimits& lim, search::WitnessMode mode) {
  check_girard_pair(*g, d_prime, d);
  auto o = cached(cache_key("girD", *g, mode, d_prime, d), [&] {
    search::AvoiderSpec spec;
    for (std::int64_t i = 1; i < g->order(); ++i)
      if (d % g->element_order(static_cast<Elem>(i)) == 0)
        spec.universe.push_back(static_cast<Elem>(i));
    spec.target = subgroup_mask(*g, d / d_prime);
    spec.window = 0;
    return search::max_length_avoider(g, spec, lim, mode);
  });
  return length_result(g, o);
}

LengthResult girard_bruteforce_eta(const GroupPtr& g, std::int64_t d_prime, std::int64_t d,
                                   const search::SearchLimits& lim, search::WitnessMode mode) {
  check_girard_pair(*g, d_prime, d);
  auto o = cached(cache_key("girEta", *g, mode, d_prime, d), [&] {
    search::AvoiderSpec spec;
    for (std::int64_t i = 1; i < g->order(); ++i)
      if (d % g->element_order(static_cast<Elem>(i)) == 0)
        spec.universe.push_back(static_cast<Elem>(i));
    spec.target = subgroup_mask(*g, d / d_prime);
    spec.window = d_prime;
    spec.exact_window = false;
    return search::max_length_avoider(g, spec, with_window_cap(g, lim), mode);
  });
  return length_result(g, o);
}

GirardParams girard_formula(const GroupPtr& g, std::int64_t d_prime, std::int64_t d) {
  check_girard_pair(*g, d_prime, d);
  GirardParams out;
  out.d_prime = d_prime;
  out.d = d;
  out.invariant_factors = g->invariant_factors();
  std::vector<std::int64_t> vs;
  for (std::int64_t n : out.invariant_factors) {
    std::int64_t a = std::gcd(d_prime, n);
    std::int64_t b = std::lcm(d, n) / std::lcm(d_prime, n);
    std::int64_t v = a / std::gcd(a, b);
    out.a.push_back(a);
    out.b.push_back(b);
    out.v.push_back(v);
    if (v > 1) vs.push_back(v);
  }
  out.derived = std::make_shared<Group>(Group::from_factors(vs));
  out.value = davenport(out.derived).value;
  return out;
}

InvariantReport conjecture_verdict(const GroupPtr& g, const ReportOptions& opt) {
  InvariantReport rep;
  rep.input_text = g->given_text();
  rep.canonical = g->canonical_text();
  rep.order = g->order();
  rep.exponent = g->exponent();
  rep.k_star = k_star(*g);
  rep.K_star = K_star(*g);
  rep.all_witnesses = opt.all_witnesses;
  rep.limits = opt.limits;

  auto mode = opt.all_witnesses ? search::WitnessMode::All : search::WitnessMode::One;
  CrossResult little = little_cross_number(g, opt.limits, mode);
  CrossResult big = big_cross_number(g, opt.limits, mode);
  rep.k_little = little.value;
  rep.k_big = big.value;
  rep.witnesses_k = little.witnesses;
  rep.witnesses_K = big.witnesses;
  rep.partial = little.partial || big.partial;
  rep.nodes = little.nodes + big.nodes;

  if (opt.with_davenport) {
    LengthResult d = davenport(g, opt.limits);
    rep.davenport = d.value;
    rep.partial = rep.partial || d.partial;
    rep.nodes += d.nodes;
  }
  if (opt.with_eta) {
    LengthResult e = eta(g, opt.limits);
    rep.eta = e.value;
    rep.partial = rep.partial || e.partial;
    rep.nodes += e.nodes;
  }
  if (opt.with_s) {
    LengthResult s = s_egz(g, opt.limits);
    rep.s_egz = s.value;
    rep.partial = rep.partial || s.partial;
    rep.nodes += s.nodes;
  }

  rep.conjecture_k = (rep.k_little == rep.k_star);
  rep.conjecture_K = (rep.k_big == rep.K_star);
  if (g->trivial()) {
    rep.sandwich_ok = true;  // vacuous: the sandwich is stated for |G| > 1
  } else {
    Rational lo = rep.k_little + Rational::of(1, g->exponent());
    Rational hi = rep.k_little + Rational::of(1, smallest_prime_divisor(g->exponent()));
    rep.sandwich_ok = (lo <= rep.k_big) && (rep.k_big <= hi);
  }
  return rep;
}

}  // namespace crossnum
