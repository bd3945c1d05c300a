#include "crossnum/transforms.hpp"

#include <algorithm>
#include <utility>

#include "crossnum/errors.hpp"
#include "crossnum/subsums.hpp"

namespace crossnum {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw HypothesisError(msg);
}

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

const Group::PrimeShape* find_shape(const Group& g, std::int64_t p) {
  for (const auto& sh : g.prime_shapes())
    if (sh.prime == p) return &sh;
  return nullptr;
}

// a_{i,j} with the convention that exponents beyond the rank are zero.
int shape_exp(const Group::PrimeShape& sh, int j) {
  return j < static_cast<int>(sh.exponents.size()) ? sh.exponents[j] : 0;
}

std::int64_t floor_i64(const Rational& x) { return Rational(x.floor()).num_i64(); }

bool is_prime_i64(std::int64_t n) { return n >= 2 && smallest_prime_divisor(n) == n; }

}  // namespace

DenseResult dense_sequences(const GroupPtr& g, const search::SearchLimits& lim) {
  CrossResult r = little_cross_number(g, lim, search::WitnessMode::All);
  DenseResult out;
  out.value = r.value;
  out.partial = r.partial;
  std::int64_t best_len = -1;
  for (const auto& s : r.witnesses)
    if (best_len < 0 || s.length() < best_len) best_len = s.length();
  for (const auto& s : r.witnesses)
    if (s.length() == best_len) out.sequences.push_back(s);
  return out;
}

bool check_amalgamation_bound(const Sequence& s, std::int64_t p, std::int64_t l) {
  const Group& g = *s.group();
  const Group::PrimeShape* sh = find_shape(g, p);
  require(sh != nullptr, "amalgamation bound: p does not divide the group order");
  int a1 = shape_exp(*sh, 0), a2 = shape_exp(*sh, 1);
  require(a1 > a2, "amalgamation bound: needs a_1 > a_2 for p");
  require(l >= 1, "amalgamation bound: l must be positive");
  require(l % ipow(p, a2 + 1) == 0, "amalgamation bound: p^(a_2+1) must divide l");
  return s.count_of_order(l) <= p - 1;
}

bool check_n_amalgamation_bound(const Sequence& s, std::int64_t p, int n, std::int64_t l) {
  const Group& g = *s.group();
  const Group::PrimeShape* sh = find_shape(g, p);
  require(sh != nullptr, "n-amalgamation bound: p does not divide the group order");
  require(n >= 1, "n-amalgamation bound: n must be >= 1");
  int an = shape_exp(*sh, n - 1), an1 = shape_exp(*sh, n);
  require(an > an1, "n-amalgamation bound: needs a_n > a_{n+1} for p");
  require(l >= 1, "n-amalgamation bound: l must be positive");
  require(l % ipow(p, an1 + 1) == 0, "n-amalgamation bound: p^(a_{n+1}+1) must divide l");
  auto gpn = std::make_shared<Group>(Group::from_factors(std::vector<std::int64_t>(n, p)));
  LengthResult e = eta(gpn);
  if (e.partial) throw LimitError("n-amalgamation bound: eta(C_p^n) search hit a limit");
  return s.count_of_order(l) <= e.value - 1;
}

bool check_1_replacement(const Sequence& s, int a) {
  const Group& g = *s.group();
  require(!g.trivial(), "replacement bound: trivial group");
  const Group::PrimeShape& sh = g.prime_shapes().front();
  std::int64_t p1 = sh.prime;
  int a11 = shape_exp(sh, 0), a12 = shape_exp(sh, 1);
  require(a11 > a12, "replacement bound: needs a_{1,1} > a_{1,2}");
  require(a >= a12 + 1 && a <= a11, "replacement bound: a out of [a_{1,2}+1, a_{1,1}]");
  std::int64_t n = g.exponent() / ipow(p1, a11);
  require(is_wide(p1, n), "replacement bound: p_1 is not wide w.r.t. exp(G)/p_1^{a_{1,1}}");
  return s.count_of_order(ipow(p1, a)) >= p1 - 1;
}

bool check_2_replacement(const Sequence& s, int a) {
  const Group& g = *s.group();
  require(!g.trivial(), "2-replacement bound: trivial group");
  const Group::PrimeShape& sh = g.prime_shapes().front();
  std::int64_t p1 = sh.prime;
  int a11 = shape_exp(sh, 0), a12 = shape_exp(sh, 1), a13 = shape_exp(sh, 2);
  require(a12 > a13, "2-replacement bound: needs a_{1,2} > a_{1,3}");
  require(a >= a13 + 1 && a <= a12, "2-replacement bound: a out of [a_{1,3}+1, a_{1,2}]");
  std::int64_t n = g.exponent() / ipow(p1, a11);
  require(is_two_small(p1, n),
          "2-replacement bound: p_1 is not 2-small w.r.t. exp(G)/p_1^{a_{1,1}}");
  return s.count_of_order(ipow(p1, a)) >= 2 * p1 - 2;
}

Sequence build_replacement_S1(const GroupPtr& g, int a) {
  const Group& G = *g;
  require(!G.trivial(), "replacement block: trivial group");
  const Group::PrimeShape& sh = G.prime_shapes().front();
  std::int64_t p1 = sh.prime;
  require(sh.exponents.size() >= 2, "replacement block: needs two p_1-components");
  int a11 = sh.exponents[0], a12 = sh.exponents[1];
  require(a >= 1 && a <= a12, "replacement block: a out of [1, a_{1,2}]");
  // Canonical order puts the two largest p_1-components first.
  std::vector<std::int64_t> c(G.components(), 0);
  Sequence s1(g);
  for (int k = 0; k + a <= a11; ++k) {
    std::fill(c.begin(), c.end(), 0);
    c[0] = ipow(p1, k);
    s1 = s1.with(G.from_coords(c), static_cast<std::uint32_t>(p1 - 1));
  }
  for (int l = 0; l + a <= a12; ++l) {
    std::fill(c.begin(), c.end(), 0);
    c[1] = ipow(p1, l);
    s1 = s1.with(G.from_coords(c), static_cast<std::uint32_t>(p1 - 1));
  }
  return s1;
}

Rational replacement_S1_cross_closed_form(const Group& g, int a) {
  require(!g.trivial(), "replacement block: trivial group");
  const Group::PrimeShape& sh = g.prime_shapes().front();
  std::int64_t p1 = sh.prime;
  require(sh.exponents.size() >= 2, "replacement block: needs two p_1-components");
  int a11 = sh.exponents[0], a12 = sh.exponents[1];
  require(a >= 1 && a <= a12, "replacement block: a out of [1, a_{1,2}]");
  Rational r;
  for (int t = a; t <= a12; ++t) r += Rational::of(2 * p1 - 2, ipow(p1, t));
  for (int t = a12 + 1; t <= a11; ++t) r += Rational::of(p1 - 1, ipow(p1, t));
  return r;
}

OrderClassLedger classify_full_orders(const Sequence& s, std::int64_t p, int a) {
  const Group& g = *s.group();
  const Group::PrimeShape* sh = find_shape(g, p);
  require(sh != nullptr, "order census: p does not divide the group order");
  require(a >= 1, "order census: a must be >= 1");
  std::int64_t pa = ipow(p, a);
  require(g.exponent() % pa == 0, "order census: p^a does not divide exp(G)");

  OrderClassLedger led;
  led.p = p;
  led.a = a;
  led.a2 = shape_exp(*sh, 1);
  led.exponent = g.exponent();
  std::int64_t pa1 = pa * p;
  std::int64_t pa2_1 = ipow(p, led.a2 + 1);
  for (std::int64_t d = 1; d <= led.exponent; ++d) {
    if (led.exponent % d != 0 || d % pa != 0) continue;
    led.domain.push_back(d);
    std::int64_t cnt = s.count_of_order(d);
    led.counts[d] = cnt;
    bool exact = d % pa1 != 0;  // p^a || d, given p^a | d
    bool f = exact && cnt >= 2 * p - 1 && cnt <= 3 * p - 3;
    led.full[d] = f;
    if (d == pa) {
      led.base_full = f;
      continue;
    }
    if (exact) {
      (f ? led.d1 : led.d2).push_back(d);
    } else {
      (d % pa2_1 == 0 ? led.d4 : led.d3).push_back(d);
    }
  }
  std::vector<std::int64_t> un{pa};
  for (const auto* part : {&led.d1, &led.d2, &led.d3, &led.d4})
    un.insert(un.end(), part->begin(), part->end());
  std::sort(un.begin(), un.end());
  led.partition_ok =
      un == led.domain && std::adjacent_find(un.begin(), un.end()) == un.end();
  return led;
}

namespace {

// Shared chain setup for the floor-sum bounds.
std::vector<Rational> floor_chain(const std::vector<Rational>& t, std::int64_t p,
                                  std::int64_t b, const char* who) {
  require(is_prime_i64(p), std::string(who) + ": p must be prime");
  require(b >= 1, std::string(who) + ": b must be a positive integer");
  require(!t.empty(), std::string(who) + ": empty t-vector");
  for (const auto& ti : t)
    require((ti * Rational(b)).is_integer(), std::string(who) + ": b*t_i must be integral");
  std::vector<Rational> s;
  s.reserve(t.size());
  s.push_back(t[0]);
  for (size_t i = 1; i < t.size(); ++i) s.push_back(s.back().frac() + t[i]);
  return s;
}

}  // namespace

FloorSumResult floor_sum_bound1(const std::vector<Rational>& t, std::int64_t p,
                                std::int64_t b) {
  FloorSumResult res;
  res.s_chain = floor_chain(t, p, b, "floor bound");
  Rational invp = Rational::of(1, p);
  Rational scale = Rational(1);
  bool cond = true;
  for (size_t i = 0; i < t.size(); ++i) {
    scale *= invp;
    res.lhs += Rational(res.s_chain[i].floor()) * scale;
    res.rhs += t[i] * scale;
    if (!(res.s_chain[i] + Rational::of(1, b)).is_integer()) cond = false;
  }
  res.rhs += (Rational::of(1, b) - Rational(1)) * invp;
  if (res.lhs < res.rhs) throw ViolationError("floor bound: sum of floors fell below the bound");
  res.tight = res.lhs == res.rhs;
  if (res.tight != cond)
    throw ViolationError("floor bound: tightness disagrees with its characterization");
  return res;
}

FloorSumResult floor_sum_bound2(const std::vector<Rational>& t, std::int64_t p,
                                std::int64_t b) {
  FloorSumResult res;
  res.s_chain = floor_chain(t, p, b, "integral floor bound");
  require(res.s_chain.back().is_integer(), "integral floor bound: s_n must be integral");
  size_t n = t.size();
  Rational invp = Rational::of(1, p);
  Rational scale = Rational(1);
  bool cond = true;
  for (size_t i = 0; i < n; ++i) {
    scale *= invp;
    res.lhs += Rational(res.s_chain[i].floor()) * scale;
    res.rhs += t[i] * scale;
    if (i + 1 < n && !(res.s_chain[i] + Rational::of(1, b)).is_integer()) cond = false;
  }
  // scale now holds 1/p^n.
  res.rhs += (invp - scale) * (Rational::of(1, b) - Rational(1));
  if (res.lhs < res.rhs)
    throw ViolationError("integral floor bound: sum of floors fell below the bound");
  res.tight = res.lhs == res.rhs;
  if (res.tight != cond)
    throw ViolationError("integral floor bound: tightness disagrees with its characterization");
  return res;
}

namespace {

// Lexicographically-first minimal zero-sum with cross number <= 1 drawn from a
// residue multiset over a cyclic group. Every minimal zero-sum over a cyclic
// group has cross number <= 1, so the cross cap only prunes.
struct LexPick {
  GroupPtr cyc;
  std::vector<std::pair<Elem, std::uint32_t>> avail;  // ascending residues
  std::int64_t scale = 0;                             // group order
  std::vector<Elem> cur, out;

  bool dfs(size_t pos, Elem sum, std::int64_t knum) {
    if (!cur.empty() && sum == 0) {
      // A zero-sum that is not minimal has no minimal extensions either.
      if (!is_minimal_zero_sum(Sequence(cyc, cur))) return false;
      out = cur;
      return true;
    }
    for (size_t i = pos; i < avail.size(); ++i) {
      if (avail[i].second == 0) continue;
      std::int64_t w = scale / cyc->element_order(avail[i].first);
      if (knum + w > scale) continue;
      --avail[i].second;
      cur.push_back(avail[i].first);
      if (dfs(i, cyc->add(sum, avail[i].first), knum + w)) return true;
      cur.pop_back();
      ++avail[i].second;
    }
    return false;
  }

  bool find() {
    cur.clear();
    out.clear();
    return dfs(0, 0, 0);
  }
};

struct StageRun {
  MergeStage st;
  Sequence replacements;
  Sequence leftover;
};

// One merge stage: project carry+fresh onto the cyclic coordinate comp,
// extract floor(kappa) lexicographically-first minimal zero-sums, replace each
// preimage (consumed in ascending element-index order) by its sum.
StageRun run_stage(const GroupPtr& parent, const Sequence& carry, const Sequence& fresh,
                   int comp, const GroupPtr& cyc, int stage_no, const std::string& label) {
  StageRun run{MergeStage{}, Sequence(parent), Sequence(parent)};
  MergeStage& st = run.st;
  st.stage = stage_no;
  st.projection = label;
  auto projected_cross = [&](const Sequence& s) {
    Rational c;
    for (const auto& [e, m] : s.terms()) {
      Elem res = static_cast<Elem>(parent->coordinate(e, comp));
      c += Rational::of(m, cyc->element_order(res));
    }
    return c;
  };
  st.carry_in = projected_cross(carry);
  st.fresh = projected_cross(fresh);
  st.kappa = st.carry_in + st.fresh;

  std::map<Elem, std::uint32_t> remaining = carry.concat(fresh).terms();
  std::int64_t n_extract = floor_i64(st.kappa);
  for (std::int64_t e = 0; e < n_extract; ++e) {
    std::map<Elem, std::uint32_t> avail_map;
    for (const auto& [pe, cnt] : remaining)
      if (cnt) avail_map[static_cast<Elem>(parent->coordinate(pe, comp))] += cnt;
    LexPick pick{cyc,
                 {avail_map.begin(), avail_map.end()},
                 cyc->order(),
                 {},
                 {}};
    if (!pick.find())
      throw ViolationError("projection merge: no minimal zero-sum available mid-stage");
    MergeExtraction ex;
    ex.projected = pick.out;
    Elem repl = parent->zero();
    for (Elem res : pick.out) {
      bool got = false;
      for (auto& [pe, cnt] : remaining) {
        if (cnt && static_cast<Elem>(parent->coordinate(pe, comp)) == res) {
          ex.preimage.push_back(pe);
          --cnt;
          repl = parent->add(repl, pe);
          got = true;
          break;
        }
      }
      if (!got) throw ViolationError("projection merge: preimage bookkeeping out of sync");
    }
    std::sort(ex.preimage.begin(), ex.preimage.end());
    ex.replacement = repl;
    ex.projected_cross = Sequence(cyc, pick.out).cross_number();
    st.extracted_cross += ex.projected_cross;
    run.replacements = run.replacements.with(repl);
    st.extractions.push_back(std::move(ex));
  }
  st.extracted = n_extract;
  st.carry_out = st.kappa - st.extracted_cross;
  st.count_is_floor = st.extracted == floor_i64(st.kappa);
  st.fraction_exact = st.carry_out == st.kappa.frac();
  std::vector<std::pair<Elem, std::uint32_t>> rest;
  for (const auto& [pe, cnt] : remaining)
    if (cnt) rest.emplace_back(pe, cnt);
  run.leftover = Sequence(parent, rest);
  return run;
}

void push_common_assertions(MergeLedger& led, const std::map<std::string, int>& proj_comp) {
  const Group& g = *led.input.group();
  bool kind = led.input_minimal ? is_minimal_zero_sum(led.output) : is_zero_sum_free(led.output);
  led.assertions.emplace_back(
      led.input_minimal ? "output_minimal_zero_sum" : "output_zero_sum_free", kind);
  bool pure = true;
  for (const auto& [e, m] : led.p_part.terms()) {
    (void)m;
    for (const auto& [label, comp] : proj_comp)
      if (g.coordinate(e, comp) != 0) pure = false;
  }
  led.assertions.emplace_back("merged_part_in_p_component", pure);
  bool floors = true, repl_pure = true;
  std::int64_t consumed = 0;
  for (const auto& st : led.stages) {
    if (!st.count_is_floor) floors = false;
    int comp = proj_comp.at(st.projection);
    for (const auto& ex : st.extractions) {
      consumed += static_cast<std::int64_t>(ex.preimage.size()) - 1;
      if (g.coordinate(ex.replacement, comp) != 0) repl_pure = false;
    }
  }
  led.assertions.emplace_back("stage_counts_are_floors", floors);
  led.assertions.emplace_back("replacements_drop_projected_coordinate", repl_pure);
  led.assertions.emplace_back("length_accounting",
                              led.input.length() == led.output.length() + consumed);
}

}  // namespace

MergeLedger projection_merge_pq(const Sequence& s) {
  GroupPtr g = s.group();
  const Group& G = *g;
  require(G.prime_shapes().size() == 2, "pq merge: group must have exactly two prime divisors");
  const Group::PrimeShape* qsh = nullptr;
  for (const auto& sh : G.prime_shapes())
    if (sh.exponents.size() == 1) qsh = &sh;  // ascending scan: largest cyclic prime wins
  require(qsh != nullptr, "pq merge: no prime has a cyclic Sylow component");
  std::int64_t q = qsh->prime;
  int m = qsh->exponents[0];
  const Group::PrimeShape& psh =
      G.prime_shapes()[G.prime_shapes()[0].prime == q ? 1 : 0];
  std::int64_t p = psh.prime;
  int kmax = psh.exponents[0];

  bool minimal = is_minimal_zero_sum(s);
  require(minimal || is_zero_sum_free(s),
          "pq merge: input must be zero-sum free or a minimal zero-sum");

  int comp_q = -1;
  for (int j = 0; j < G.components(); ++j)
    if (G.canonical()[j].prime == q) comp_q = j;
  auto cyc = std::make_shared<Group>(Group::from_factors({ipow(q, m)}));

  // Split by order p^i q^j: j = 0 goes to the p-part, else class i.
  Sequence s_p(g);
  std::vector<Sequence> T(static_cast<size_t>(kmax) + 1, Sequence(g));
  for (const auto& [e, mult] : s.terms()) {
    std::int64_t od = G.element_order(e);
    if (od % q != 0) {
      s_p = s_p.with(e, mult);
    } else {
      int i = 0;
      while (od % p == 0) od /= p, ++i;
      T[i] = T[i].with(e, mult);
    }
  }

  MergeLedger led(g);
  led.pipeline = "pq";
  led.input = s;
  led.input_minimal = minimal;
  led.p = p;
  led.q = q;
  led.q_modulus = ipow(q, m);
  led.p_part = Sequence(g);
  led.output = Sequence(g);
  led.leftover = Sequence(g);

  Sequence carry = T[0];
  Sequence q_all(g);
  for (int i = 1; i <= kmax; ++i) {
    StageRun run = run_stage(g, carry, T[i], comp_q, cyc, i, "q");
    led.stages.push_back(std::move(run.st));
    q_all = q_all.concat(run.replacements);
    carry = run.leftover;
  }
  led.leftover = carry;
  led.p_part = s_p.concat(q_all);
  led.output = led.p_part.concat(led.leftover);
  push_common_assertions(led, {{"q", comp_q}});

  bool use_K = minimal && led.leftover.empty();
  Group::Subgroup hp = G.primary_component(p);
  CrossResult hc = use_K ? big_cross_number(hp.group) : little_cross_number(hp.group);
  InequalityLine master;
  master.name = "master";
  master.lhs = hc.value;
  master.rhs = led.p_part.cross_number();
  master.holds = master.lhs >= master.rhs;
  master.applicable = !hc.partial;
  master.note = use_K ? "K(H_p) bounds the merged part; minimal input, empty leftover"
                      : "k(H_p) bounds the merged part";
  if (hc.partial) master.note += "; H_p search was partial";
  led.checks.push_back(master);

  // Floor-sum side: extracted counts dominate the idealized floor chain with
  // t_1 = kappa_1 and t_i the per-stage fresh cross, b = q^m.
  InequalityLine fc;
  fc.name = "floor_chain";
  Rational invp = Rational::of(1, p);
  Rational scale = Rational(1);
  for (int i = 1; i <= kmax; ++i) {
    scale *= invp;
    fc.lhs += Rational(led.stages[i - 1].extracted) * scale;
    fc.rhs += (i == 1 ? led.stages[0].kappa : led.stages[i - 1].fresh) * scale;
  }
  fc.rhs += (Rational::of(1, led.q_modulus) - Rational(1)) * invp;
  fc.holds = fc.lhs >= fc.rhs;
  fc.note = "extracted counts vs. the floor-sum bound, b = q^m";
  led.checks.push_back(fc);

  bool chain_exact = true;
  for (const auto& st : led.stages)
    if (!st.fraction_exact) chain_exact = false;
  InequalityLine fc2;
  fc2.name = "floor_chain_integral";
  fc2.lhs = fc.lhs;
  scale = Rational(1);
  for (int i = 1; i <= kmax; ++i) {
    scale *= invp;
    fc2.rhs += (i == 1 ? led.stages[0].kappa : led.stages[i - 1].fresh) * scale;
  }
  fc2.rhs += (invp - scale) * (Rational::of(1, led.q_modulus) - Rational(1));
  fc2.holds = fc2.lhs >= fc2.rhs;
  fc2.applicable = minimal && led.leftover.empty() && chain_exact;
  fc2.note = "integral-tail variant; applicable when the input is minimal, the leftover is "
             "empty and every stage carried an exact fraction";
  led.checks.push_back(fc2);

  InequalityLine qp;
  qp.name = "projected_part_bound";
  qp.lhs = Rational::of(led.q_modulus - 1, led.q_modulus);
  qp.rhs = T[0].cross_number();
  qp.holds = qp.lhs >= qp.rhs;
  qp.applicable = !(minimal && T[0].length() == s.length());
  qp.note = "pure q-part vs. k(C_{q^m}); inapplicable when a minimal input is entirely its "
            "q-part";
  led.checks.push_back(qp);

  InequalityLine head;
  head.name = "headline";
  head.lhs = minimal ? K_star(G) : k_star(G);
  head.rhs = s.cross_number();
  head.holds = head.lhs >= head.rhs;
  head.note = minimal ? "k(input) <= K*(G)" : "k(input) <= k*(G)";
  led.checks.push_back(head);
  return led;
}

MergeLedger projection_merge_pqr(const Sequence& s) {
  GroupPtr g = s.group();
  const Group& G = *g;
  const auto& shapes = G.prime_shapes();
  bool shape_ok = shapes.size() == 3;
  for (const auto& sh : shapes)
    if (sh.exponents.size() != 1 || sh.exponents[0] != 1) shape_ok = false;
  require(shape_ok, "pqr merge: group must be C_p x C_q x C_r with distinct primes");
  std::int64_t p = shapes[0].prime, q = shapes[1].prime, r = shapes[2].prime;

  bool minimal = is_minimal_zero_sum(s);
  require(minimal || is_zero_sum_free(s),
          "pqr merge: input must be zero-sum free or a minimal zero-sum");

  auto cyc_q = std::make_shared<Group>(Group::from_factors({q}));
  auto cyc_r = std::make_shared<Group>(Group::from_factors({r}));

  Sequence s_p(g), s_q(g), s_r(g), s_pq(g), s_pr(g), s_qr(g), s_pqr(g);
  for (const auto& [e, mult] : s.terms()) {
    std::int64_t od = G.element_order(e);
    bool dq = od % q == 0, dr = od % r == 0, dp = od % p == 0;
    Sequence* bucket = nullptr;
    if (!dq && !dr)
      bucket = &s_p;  // order p or 1
    else if (dq && !dr)
      bucket = dp ? &s_pq : &s_q;
    else if (!dq && dr)
      bucket = dp ? &s_pr : &s_r;
    else
      bucket = dp ? &s_pqr : &s_qr;
    *bucket = bucket->with(e, mult);
  }

  MergeLedger led(g);
  led.pipeline = "pqr";
  led.input = s;
  led.input_minimal = minimal;
  led.p = p;
  led.q = q;
  led.r = r;
  led.q_modulus = q;
  led.p_part = Sequence(g);
  led.output = Sequence(g);
  led.leftover = Sequence(g);

  StageRun s1 = run_stage(g, s_q, s_pq, 1, cyc_q, 1, "q");
  led.stages.push_back(s1.st);
  StageRun s2 = run_stage(g, s1.leftover, s_qr.concat(s_pqr), 1, cyc_q, 2, "q");
  led.stages.push_back(s2.st);
  StageRun s3 = run_stage(g, s2.replacements, s_r.concat(s_pr), 2, cyc_r, 3, "r");
  led.stages.push_back(s3.st);

  led.p_part = s_p.concat(s1.replacements).concat(s3.replacements);
  led.leftover = s2.leftover.concat(s3.leftover);
  led.output = led.p_part.concat(led.leftover);
  push_common_assertions(led, {{"q", 1}, {"r", 2}});

  bool use_K = minimal && led.leftover.empty();
  InequalityLine master;
  master.name = "master";
  master.lhs = use_K ? Rational(1) : Rational::of(p - 1, p);
  master.rhs = led.p_part.cross_number();
  master.holds = master.lhs >= master.rhs;
  master.note = use_K ? "K(C_p) bounds the merged part; minimal input, empty leftover"
                      : "k(C_p) bounds the merged part";
  led.checks.push_back(master);

  InequalityLine qr;
  qr.name = "projected_part_bound";
  qr.lhs = Rational(2) - Rational::of(1, q) - Rational::of(1, r);
  Sequence qr_part = s_q.concat(s_r).concat(s_qr);
  qr.rhs = qr_part.cross_number();
  qr.holds = qr.lhs >= qr.rhs;
  qr.applicable = !(minimal && qr_part.length() == s.length());
  qr.note = "q/r/qr classes vs. k(C_q x C_r); inapplicable when a minimal input has no other "
            "terms";
  led.checks.push_back(qr);

  InequalityLine head;
  head.name = "headline";
  head.lhs = minimal ? K_star(G) : k_star(G);
  head.rhs = s.cross_number();
  head.holds = head.lhs >= head.rhs;
  head.note = minimal ? "k(input) <= K*(G)" : "k(input) <= k*(G)";
  led.checks.push_back(head);
  return led;
}

}  // namespace crossnum
