#include "crossnum/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <set>
#include <string>
#include <thread>

#include "crossnum/errors.hpp"

namespace crossnum::search {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t env_u64(const char* name, std::uint64_t dflt) {
  const char* v = std::getenv(name);
  if (!v || !*v) return dflt;
  return std::strtoull(v, nullptr, 10);
}

double env_double(const char* name, double dflt) {
  const char* v = std::getenv(name);
  if (!v || !*v) return dflt;
  return std::strtod(v, nullptr);
}

}  // namespace

SearchLimits resolve_limits(SearchLimits l) {
  if (l.max_nodes == 0) l.max_nodes = env_u64("CROSSNUM_MAX_NODES", 0);
  if (l.max_seconds == 0.0) l.max_seconds = env_double("CROSSNUM_MAX_SECONDS", 0.0);
  if (l.threads == 0) l.threads = static_cast<int>(env_u64("CROSSNUM_THREADS", 1));
  if (l.threads < 1) l.threads = 1;
  return l;
}

namespace {

enum class Objective { CrossZsf, CrossMin, LenZsf };

// Reusable per-depth node buffers; bitsets are allocated once per worker.
struct NodeState {
  Bitset attain, proper;
  Elem total = 0;
  std::int64_t knum = 0;
  std::int64_t len = 0;
};

struct Shared {
  const Group* G = nullptr;
  const BitGeometry* geom = nullptr;
  Objective obj = Objective::CrossZsf;
  WitnessMode mode = WitnessMode::None;
  std::vector<Elem> cands;          // nonzero elements, order asc then index asc
  std::vector<std::int64_t> w;      // exp(G)/ord(g), indexed by element
  std::int64_t wmax = 1;            // exp(G)/smallest prime of exp(G)
  std::int64_t order = 0;
  bool needs_proper = false;
  std::uint64_t max_nodes = 0;
  double max_seconds = 0.0;
  Clock::time_point t0;
  std::atomic<std::int64_t> best{0};
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stop{false};
};

struct Local {
  std::vector<NodeState> pool;
  Bitset scratch;
  std::vector<Elem> cur;            // elements of the current branch, in candidate order
  std::int64_t value = -1;          // best value this worker recorded
  std::vector<std::vector<Elem>> wits;
};

std::int64_t atomic_max(std::atomic<std::int64_t>& a, std::int64_t v) {
  std::int64_t prev = a.load(std::memory_order_relaxed);
  while (prev < v && !a.compare_exchange_weak(prev, v, std::memory_order_relaxed)) {
  }
  return prev;
}

Local make_local(const Shared& sh) {
  Local loc;
  loc.pool.resize(static_cast<size_t>(sh.order) + 2);
  for (auto& st : loc.pool) {
    st.attain = Bitset(sh.order);
    if (sh.needs_proper) st.proper = Bitset(sh.order);
  }
  loc.scratch = Bitset(sh.order);
  return loc;
}

// close < 0: witness is cur itself; otherwise cur extended by element `close`.
void record(Shared& sh, Local& loc, std::int64_t v, std::int64_t close) {
  std::int64_t prev = atomic_max(sh.best, v);
  if (sh.mode == WitnessMode::None) return;
  if (v < loc.value) return;
  auto make_wit = [&] {
    std::vector<Elem> w = loc.cur;
    if (close >= 0) w.push_back(static_cast<Elem>(close));
    std::sort(w.begin(), w.end());
    return w;
  };
  if (v > loc.value) {
    loc.value = v;
    loc.wits.clear();
    // Values below the incumbent global maximum can never end up global; skip
    // the storage so losing branches stay cheap.
    if (v >= prev) loc.wits.push_back(make_wit());
    return;
  }
  if (sh.mode == WitnessMode::All && !loc.wits.empty()) loc.wits.push_back(make_wit());
}

void eval_node(Shared& sh, Local& loc, const NodeState& st) {
  switch (sh.obj) {
    case Objective::CrossZsf:
      record(sh, loc, st.knum, -1);
      break;
    case Objective::LenZsf:
      record(sh, loc, st.len, -1);
      break;
    case Objective::CrossMin:
      // Close S with x = -sigma(S); U = S*x is a minimal zero-sum iff the
      // full sum of S is not attained by a proper nonempty subsequence.
      if (!st.proper.test(st.total)) {
        Elem x = sh.G->neg(st.total);
        record(sh, loc, st.knum + sh.w[x], static_cast<std::int64_t>(x));
      }
      break;
  }
}

void build_child(const Shared& sh, Local& loc, const NodeState& st, NodeState& ch, Elem g) {
  sh.geom->add_to_all_into(st.attain, g, ch.attain, loc.scratch);
  ch.attain |= st.attain;
  ch.attain.set(g);
  if (sh.needs_proper) {
    sh.geom->add_to_all_into(st.proper, g, ch.proper, loc.scratch);
    ch.proper |= st.attain;
    // The singleton (g) is a proper subsequence of the child only if the
    // parent is nonempty; at the root the child IS (g).
    if (st.len > 0) ch.proper.set(g);
  }
  ch.total = sh.G->add(st.total, g);
  ch.knum = st.knum + sh.w[g];
  ch.len = st.len + 1;
}

// Upper bound on any value reachable from `ch`: subsums of a zero-sum free
// sequence grow strictly with each term and stay inside G \ {0}, so at most
// order-1-|subsums| more terms fit, each worth at most wmax (plus one closing
// term for the minimal-zero-sum objective).
std::int64_t bound_of(const Shared& sh, const NodeState& ch, std::int64_t acount) {
  std::int64_t slots = sh.order - 1 - acount;
  if (sh.obj == Objective::CrossMin) slots += 1;
  if (sh.obj == Objective::LenZsf) return ch.len + slots;
  return ch.knum + slots * sh.wmax;
}

bool hit_limits(Shared& sh) {
  std::uint64_t n = sh.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
  if (sh.max_nodes && n > sh.max_nodes) {
    sh.stop.store(true, std::memory_order_relaxed);
    return true;
  }
  if (sh.max_seconds > 0.0 && (n & 1023) == 0) {
    double el = std::chrono::duration<double>(Clock::now() - sh.t0).count();
    if (el > sh.max_seconds) {
      sh.stop.store(true, std::memory_order_relaxed);
      return true;
    }
  }
  return sh.stop.load(std::memory_order_relaxed);
}

void dfs(Shared& sh, Local& loc, std::int64_t depth, size_t start) {
  if (hit_limits(sh)) return;
  NodeState& st = loc.pool[depth];
  eval_node(sh, loc, st);
  NodeState& ch = loc.pool[depth + 1];
  for (size_t pos = start; pos < sh.cands.size(); ++pos) {
    Elem g = sh.cands[pos];
    if (st.attain.test(sh.G->neg(g))) continue;  // child would contain a zero-sum
    build_child(sh, loc, st, ch, g);
    std::int64_t bound = bound_of(sh, ch, ch.attain.count());
    std::int64_t b = sh.best.load(std::memory_order_relaxed);
    // With witnesses requested, branches tying the incumbent must be kept.
    bool keep = (sh.mode == WitnessMode::None) ? bound > b : bound >= b;
    if (!keep) continue;
    loc.cur.push_back(g);
    dfs(sh, loc, depth + 1, pos);
    loc.cur.pop_back();
    if (sh.stop.load(std::memory_order_relaxed)) return;
  }
}

std::vector<Elem> sorted_candidates(const Group& G, bool include_zero) {
  std::vector<Elem> cands;
  for (std::int64_t i = include_zero ? 0 : 1; i < G.order(); ++i)
    cands.push_back(static_cast<Elem>(i));
  std::stable_sort(cands.begin(), cands.end(), [&](Elem a, Elem b) {
    return std::make_pair(G.element_order(a), a) < std::make_pair(G.element_order(b), b);
  });
  return cands;
}

MaxOutcome run_engine(const GroupPtr& g, const SearchLimits& lim0, WitnessMode mode,
                      Objective obj) {
  SearchLimits lim = resolve_limits(lim0);
  const Group& G = *g;
  BitGeometry geom(g);

  Shared sh;
  sh.G = &G;
  sh.geom = &geom;
  sh.obj = obj;
  sh.mode = mode;
  sh.cands = sorted_candidates(G, false);
  sh.order = G.order();
  sh.needs_proper = (obj == Objective::CrossMin);
  sh.w.resize(G.order());
  for (std::int64_t i = 0; i < G.order(); ++i)
    sh.w[i] = G.exponent() / G.element_order(static_cast<Elem>(i));
  sh.wmax = G.order() > 1 ? G.exponent() / smallest_prime_divisor(G.exponent()) : 1;
  sh.max_nodes = lim.max_nodes;
  sh.max_seconds = lim.max_seconds;
  sh.t0 = Clock::now();
  sh.best.store(INT64_MIN, std::memory_order_relaxed);

  std::vector<Local> locs;
  if (lim.threads <= 1 || sh.cands.size() <= 1) {
    locs.push_back(make_local(sh));
    dfs(sh, locs[0], 0, 0);
  } else {
    // Root-branch parallelism: the root is evaluated once up front, then each
    // worker claims whole root branches. Results merge in branch order, so
    // reports do not depend on the thread count.
    locs.resize(sh.cands.size() + 1);
    locs[0] = make_local(sh);
    if (!hit_limits(sh)) eval_node(sh, locs[0], locs[0].pool[0]);
    std::atomic<size_t> next{0};
    auto worker = [&] {
      Local loc = make_local(sh);
      for (;;) {
        size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= sh.cands.size()) break;
        if (sh.stop.load(std::memory_order_relaxed)) break;
        Elem e = sh.cands[i];
        loc.value = -1;
        loc.wits.clear();
        loc.cur.assign(1, e);
        build_child(sh, loc, loc.pool[0], loc.pool[1], e);
        std::int64_t bound = bound_of(sh, loc.pool[1], loc.pool[1].attain.count());
        std::int64_t b = sh.best.load(std::memory_order_relaxed);
        bool keep = (sh.mode == WitnessMode::None) ? bound > b : bound >= b;
        if (keep) dfs(sh, loc, 1, i);
        locs[i + 1].value = loc.value;
        locs[i + 1].wits = std::move(loc.wits);
      }
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < lim.threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  MaxOutcome out;
  out.best = sh.best.load(std::memory_order_relaxed);
  out.scale = (obj == Objective::LenZsf) ? 1 : G.exponent();
  out.nodes = sh.nodes.load(std::memory_order_relaxed);
  out.partial = sh.stop.load(std::memory_order_relaxed);
  if (mode != WitnessMode::None) {
    for (auto& loc : locs) {
      if (loc.value != out.best || loc.wits.empty()) continue;
      if (mode == WitnessMode::One) {
        out.witnesses.push_back(loc.wits.front());
        break;
      }
      out.witnesses.insert(out.witnesses.end(), loc.wits.begin(), loc.wits.end());
    }
    std::sort(out.witnesses.begin(), out.witnesses.end());
    out.witnesses.erase(std::unique(out.witnesses.begin(), out.witnesses.end()),
                        out.witnesses.end());
  }
  return out;
}

}  // namespace

MaxOutcome max_cross_zero_sum_free(const GroupPtr& g, const SearchLimits& lim, WitnessMode mode) {
  return run_engine(g, lim, mode, Objective::CrossZsf);
}

MaxOutcome max_cross_minimal_zero_sum(const GroupPtr& g, const SearchLimits& lim,
                                      WitnessMode mode) {
  return run_engine(g, lim, mode, Objective::CrossMin);
}

MaxOutcome max_length_zero_sum_free(const GroupPtr& g, const SearchLimits& lim, WitnessMode mode) {
  return run_engine(g, lim, mode, Objective::LenZsf);
}

namespace {

// Avoider search state: per-length sum bitmaps B[l] = sums of subsequences of
// length exactly l+1 (windowed), or a single any-length bitmap (window 0).
struct AvoidShared {
  const Group* G = nullptr;
  const BitGeometry* geom = nullptr;
  const AvoiderSpec* spec = nullptr;
  std::vector<Elem> cands;
  std::int64_t order = 0;
  WitnessMode mode;
  std::uint64_t max_nodes = 0;
  double max_seconds = 0.0;
  std::int64_t max_length = 0;
  Clock::time_point t0;
  std::uint64_t nodes = 0;
  bool stop = false;
  bool capped = false;
  std::int64_t best = -1;
  std::vector<std::vector<Elem>> wits;
  std::vector<Elem> cur;
  std::vector<std::vector<Bitset>> pool;  // pool[depth][l]
  Bitset scratch;
};

void avoid_record(AvoidShared& sh, std::int64_t v) {
  if (v > sh.best) {
    sh.best = v;
    if (sh.mode != WitnessMode::None) {
      sh.wits.clear();
      auto w = sh.cur;
      std::sort(w.begin(), w.end());
      sh.wits.push_back(std::move(w));
    }
    return;
  }
  if (v == sh.best && sh.mode == WitnessMode::All) {
    auto w = sh.cur;
    std::sort(w.begin(), w.end());
    sh.wits.push_back(std::move(w));
  }
}

bool avoid_limits(AvoidShared& sh) {
  ++sh.nodes;
  if (sh.max_nodes && sh.nodes > sh.max_nodes) sh.stop = true;
  if (sh.max_seconds > 0.0 && (sh.nodes & 1023) == 0) {
    double el = std::chrono::duration<double>(Clock::now() - sh.t0).count();
    if (el > sh.max_seconds) sh.stop = true;
  }
  return sh.stop;
}

void avoid_dfs(AvoidShared& sh, std::int64_t depth, size_t start) {
  if (avoid_limits(sh)) return;
  avoid_record(sh, depth);
  if (sh.max_length && depth >= sh.max_length) {
    sh.capped = true;  // longer avoiders may exist beyond the cap
    return;
  }
  if (sh.pool.size() <= static_cast<size_t>(depth + 1)) {
    size_t window = sh.pool[depth].size();
    sh.pool.emplace_back(window, Bitset(sh.order));
  }
  const std::int64_t L = static_cast<std::int64_t>(sh.pool[depth].size());
  const bool windowed = sh.spec->window > 0;
  for (size_t pos = start; pos < sh.cands.size(); ++pos) {
    // Re-bind each iteration: the recursive call below may grow sh.pool and
    // reallocate its storage, invalidating references held across it.
    auto& st = sh.pool[depth];
    auto& ch = sh.pool[depth + 1];
    Elem g = sh.cands[pos];
    bool violated = false;
    if (windowed) {
      // ch[l] = st[l] | (st[l-1] + g); ch[0] = st[0] | {g}
      for (std::int64_t l = L - 1; l >= 1; --l) {
        sh.geom->add_to_all_into(st[l - 1], g, ch[l], sh.scratch);
        ch[l] |= st[l];
      }
      ch[0] = st[0];
      ch[0].set(g);
      if (sh.spec->exact_window) {
        violated = ch[L - 1].intersects(sh.spec->target);
      } else {
        for (std::int64_t l = 0; l < L && !violated; ++l)
          violated = ch[l].intersects(sh.spec->target);
      }
    } else {
      sh.geom->add_to_all_into(st[0], g, ch[0], sh.scratch);
      ch[0] |= st[0];
      ch[0].set(g);
      violated = ch[0].intersects(sh.spec->target);
      if (!violated) {
        // Avoiders here are zero-sum free (0 is always a forbidden sum), so
        // sums grow strictly: prune when the remaining headroom cannot win.
        std::int64_t bound = depth + 1 + (sh.order - 1 - ch[0].count());
        bool keep = (sh.mode == WitnessMode::None) ? bound > sh.best : bound >= sh.best;
        if (!keep) continue;
      }
    }
    if (violated) continue;
    sh.cur.push_back(g);
    avoid_dfs(sh, depth + 1, pos);
    sh.cur.pop_back();
    if (sh.stop) return;
  }
}

}  // namespace

MaxOutcome max_length_avoider(const GroupPtr& g, const AvoiderSpec& spec, const SearchLimits& lim0,
                              WitnessMode mode) {
  SearchLimits lim = resolve_limits(lim0);
  const Group& G = *g;
  if (spec.window < 0) throw Error("avoider window must be nonnegative");
  if (spec.target.size() != G.order()) throw Error("avoider target bitmap has wrong size");
  BitGeometry geom(g);

  AvoidShared sh;
  sh.G = &G;
  sh.geom = &geom;
  sh.spec = &spec;
  sh.order = G.order();
  sh.mode = mode;
  sh.max_nodes = lim.max_nodes;
  sh.max_seconds = lim.max_seconds;
  sh.max_length = lim.max_length;
  sh.t0 = Clock::now();
  sh.cands = spec.universe;
  std::stable_sort(sh.cands.begin(), sh.cands.end(), [&](Elem a, Elem b) {
    return std::make_pair(G.element_order(a), a) < std::make_pair(G.element_order(b), b);
  });
  sh.cands.erase(std::unique(sh.cands.begin(), sh.cands.end()), sh.cands.end());
  for (Elem e : sh.cands)
    if (static_cast<std::int64_t>(e) >= G.order()) throw Error("avoider universe out of range");

  std::int64_t L = spec.window > 0 ? spec.window : 1;
  sh.pool.emplace_back(static_cast<size_t>(L), Bitset(sh.order));
  sh.scratch = Bitset(sh.order);

  avoid_dfs(sh, 0, 0);

  MaxOutcome out;
  out.best = sh.best;
  out.scale = 1;
  out.nodes = sh.nodes;
  out.partial = sh.stop || sh.capped;
  out.witnesses = std::move(sh.wits);
  std::sort(out.witnesses.begin(), out.witnesses.end());
  out.witnesses.erase(std::unique(out.witnesses.begin(), out.witnesses.end()),
                      out.witnesses.end());
  return out;
}

namespace {

void enum_zsf(const GroupPtr& g, const SubsumTable& t, std::vector<Elem>& cur,
              const std::vector<Elem>& cands, size_t start, std::int64_t max_len,
              const std::function<void(const std::vector<Elem>&, const SubsumTable&)>& fn) {
  std::vector<Elem> sorted = cur;
  std::sort(sorted.begin(), sorted.end());
  fn(sorted, t);
  if (max_len && static_cast<std::int64_t>(cur.size()) >= max_len) return;
  for (size_t pos = start; pos < cands.size(); ++pos) {
    Elem e = cands[pos];
    if (t.attainable((*g).neg(e))) continue;
    cur.push_back(e);
    SubsumTable ext = t.extend(e);
    enum_zsf(g, ext, cur, cands, pos, max_len, fn);
    cur.pop_back();
  }
}

}  // namespace

void for_each_zero_sum_free(const GroupPtr& g, std::int64_t max_len,
                            const std::function<void(const std::vector<Elem>&)>& fn) {
  std::vector<Elem> cands = sorted_candidates(*g, false);
  std::vector<Elem> cur;
  enum_zsf(g, SubsumTable::empty(g), cur, cands, 0, max_len,
           [&](const std::vector<Elem>& s, const SubsumTable&) { fn(s); });
}

void for_each_minimal_zero_sum(const GroupPtr& g, std::int64_t max_len,
                               const std::function<void(const std::vector<Elem>&)>& fn) {
  std::vector<Elem> cands = sorted_candidates(*g, false);
  std::vector<Elem> cur;
  std::set<std::vector<Elem>> seen;
  // Every minimal zero-sum arises (possibly several ways) as S * (-sigma(S))
  // with S zero-sum free and the full sum of S unique; dedupe the closures.
  enum_zsf(g, SubsumTable::empty(g), cur, cands, 0, max_len ? max_len - 1 : 0,
           [&](const std::vector<Elem>& s, const SubsumTable& t) {
             if (!t.full_sum_unique()) return;
             std::vector<Elem> u = s;
             u.push_back((*g).neg(t.total()));
             std::sort(u.begin(), u.end());
             if (seen.insert(u).second) fn(u);
           });
}

}  // namespace crossnum::search
