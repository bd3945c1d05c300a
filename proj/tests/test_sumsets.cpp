#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <vector>

#include "crossnum/group.hpp"
#include "crossnum/sequence.hpp"
#include "crossnum/subsums.hpp"
#include "naive_oracle.hpp"

using namespace crossnum;

namespace {

std::set<Elem> to_set(const std::vector<Elem>& v) { return {v.begin(), v.end()}; }

std::vector<Elem> random_terms(std::mt19937& rng, const GroupPtr& g, int len) {
  std::uniform_int_distribution<std::int64_t> dist(0, g->order() - 1);
  std::vector<Elem> out;
  for (int i = 0; i < len; ++i) out.push_back(static_cast<Elem>(dist(rng)));
  return out;
}

}  // namespace

TEST_CASE("bit-parallel add_to_all agrees with the scalar translation") {
  std::mt19937 rng(12345);
  for (const char* name : {"C2", "C7", "C12", "C2xC2xC2", "C4xC6", "C64", "C8xC8", "C3xC3xC5"}) {
    auto g = make_group(name);
    BitGeometry geom(g);
    std::uniform_int_distribution<std::int64_t> dist(0, g->order() - 1);
    for (int trial = 0; trial < 25; ++trial) {
      Bitset x(g->order());
      for (std::int64_t i = 0; i < g->order(); ++i)
        if (rng() & 1) x.set(i);
      Elem e = static_cast<Elem>(dist(rng));
      Bitset fast = geom.add_to_all(x, e);
      Bitset slow = geom.add_to_all_scalar(x, e);
      CAPTURE(name);
      CHECK(fast == slow);
      Bitset into(g->order()), scratch(g->order());
      geom.add_to_all_into(x, e, into, scratch);
      CHECK(into == slow);
    }
  }
}

TEST_CASE("subsum table equals explicit subset enumeration") {
  std::mt19937 rng(777);
  for (const char* name : {"C5", "C8", "C2xC4", "C3xC9", "C6xC6", "C60"}) {
    auto g = make_group(name);
    for (int trial = 0; trial < 40; ++trial) {
      int len = 1 + static_cast<int>(rng() % 9);
      std::vector<Elem> terms = random_terms(rng, g, len);
      Sequence s(g, terms);
      auto table = SubsumTable::of(s);
      CAPTURE(name);
      CHECK(to_set(table.subsums()) == naive::subsums(g, terms));
      CHECK(table.length() == static_cast<std::int64_t>(terms.size()));
      CHECK(table.total() == s.sum());
    }
  }
}

TEST_CASE("extend matches rebuilding from scratch") {
  std::mt19937 rng(4242);
  auto g = make_group("C4xC9");
  std::uniform_int_distribution<std::int64_t> dist(0, g->order() - 1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Elem> terms;
    SubsumTable t = SubsumTable::empty(g);
    for (int i = 0; i < 7; ++i) {
      Elem e = static_cast<Elem>(dist(rng));
      terms.push_back(e);
      t = t.extend(e);
      SubsumTable fresh = SubsumTable::of(Sequence(g, terms));
      CHECK(to_set(t.subsums()) == to_set(fresh.subsums()));
      CHECK(t.full_sum_unique() == fresh.full_sum_unique());
    }
  }
}

TEST_CASE("proper-subsum tracking: full_sum_unique against brute force") {
  std::mt19937 rng(999);
  for (const char* name : {"C6", "C2xC2", "C9", "C2xC6"}) {
    auto g = make_group(name);
    for (int trial = 0; trial < 120; ++trial) {
      int len = 1 + static_cast<int>(rng() % 7);
      std::vector<Elem> terms = random_terms(rng, g, len);
      SubsumTable t = SubsumTable::of(Sequence(g, terms));
      // brute force: does any proper nonempty subset reach the full sum?
      Elem total = t.total();
      bool proper_hit = false;
      const std::uint32_t n = static_cast<std::uint32_t>(terms.size());
      for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
        Elem s = g->zero();
        for (std::uint32_t i = 0; i < n; ++i)
          if (mask & (1u << i)) s = g->add(s, terms[i]);
        if (s == total) {
          proper_hit = true;
          break;
        }
      }
      CAPTURE(name);
      CHECK(t.full_sum_unique() == !proper_hit);
    }
  }
}

TEST_CASE("zero-sum predicates match the oracle on every short sequence of C6") {
  auto g = make_group("C6");
  // exhaustive over all multisets of length <= 4 drawn from all 6 elements
  std::vector<Elem> elems;
  for (std::int64_t i = 0; i < 6; ++i) elems.push_back(static_cast<Elem>(i));
  std::function<void(std::vector<Elem>&, size_t)> rec = [&](std::vector<Elem>& cur, size_t start) {
    Sequence s(g, cur);
    CHECK(is_zero_sum_free(s) == naive::is_zero_sum_free(g, cur));
    CHECK(is_minimal_zero_sum(s) == naive::is_minimal_zero_sum(g, cur));
    if (cur.size() >= 4) return;
    for (size_t i = start; i < elems.size(); ++i) {
      cur.push_back(elems[i]);
      rec(cur, i);
      cur.pop_back();
    }
  };
  std::vector<Elem> cur;
  rec(cur, 0);
}

TEST_CASE("singleton and doubleton minimality edge cases") {
  auto g = make_group("C4");
  CHECK(is_minimal_zero_sum(Sequence(g, std::vector<Elem>{0})));
  CHECK(!is_minimal_zero_sum(Sequence(g, std::vector<Elem>{0, 0})));
  CHECK(!is_minimal_zero_sum(Sequence(g, std::vector<Elem>{1})));
  CHECK(is_minimal_zero_sum(Sequence(g, std::vector<Elem>{1, 3})));
  CHECK(is_minimal_zero_sum(Sequence(g, std::vector<Elem>{2, 2})));
  CHECK(!is_minimal_zero_sum(Sequence(g, std::vector<Elem>{2, 2, 2, 2})));
  CHECK(!is_minimal_zero_sum(Sequence(g)));
  CHECK(is_zero_sum_free(Sequence(g)));
  CHECK(!is_zero_sum_free(Sequence(g, std::vector<Elem>{0})));
}

TEST_CASE("zero-sum freeness is downward closed") {
  std::mt19937 rng(31337);
  auto g = make_group("C3xC12");
  std::uniform_int_distribution<std::int64_t> dist(1, g->order() - 1);
  int found = 0;
  while (found < 25) {
    std::vector<Elem> terms;
    for (int i = 0; i < 5; ++i) terms.push_back(static_cast<Elem>(dist(rng)));
    Sequence s(g, terms);
    if (!is_zero_sum_free(s)) continue;
    ++found;
    for (Elem e : to_set(terms)) CHECK(is_zero_sum_free(s.remove_one(e)));
  }
}

TEST_CASE("a zero-sum free sequence attains at least |S| distinct subsums") {
  auto g = make_group("C5xC5");
  std::mt19937 rng(5150);
  std::uniform_int_distribution<std::int64_t> dist(1, g->order() - 1);
  int found = 0;
  while (found < 40) {
    int len = 1 + static_cast<int>(rng() % 6);
    std::vector<Elem> terms;
    for (int i = 0; i < len; ++i) terms.push_back(static_cast<Elem>(dist(rng)));
    Sequence s(g, terms);
    if (!is_zero_sum_free(s)) continue;
    ++found;
    CHECK(SubsumTable::of(s).subsum_count() >= s.length());
  }
}

TEST_CASE("covers_all_nonzero detects complete sumsets") {
  auto g = make_group("C4");
  CHECK(covers_all_nonzero(Sequence(g, std::vector<Elem>{1, 1, 1})));
  CHECK(!covers_all_nonzero(Sequence(g, std::vector<Elem>{2})));
  CHECK(!covers_all_nonzero(Sequence(g)));
}
