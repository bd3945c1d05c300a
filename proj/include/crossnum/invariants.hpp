#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crossnum/group.hpp"
#include "crossnum/rational.hpp"
#include "crossnum/search.hpp"
#include "crossnum/sequence.hpp"

namespace crossnum {

// Closed forms: k_star = sum over canonical components of (1 - 1/p^a),
// K_star = k_star + 1/exp(G).
Rational k_star(const Group& g);
Rational K_star(const Group& g);

// Exact divisor-harmonic sum over positive divisors of n.
Rational divisor_harmonic_sum(std::int64_t n);

// p is wide with respect to n: p prime, p does not divide n, and
// p/(p-1) >= sum_{d|n} 1/d (non-strict).
bool is_wide(std::int64_t p, std::int64_t n);
// p is 2-small with respect to n: p prime, p does not divide n, and
// (2p+2)/(2p+1) > sum_{d|n} 1/d (strict).
bool is_two_small(std::int64_t p, std::int64_t n);

struct CrossResult {
  Rational value;
  std::vector<Sequence> witnesses;
  bool partial = false;
  std::uint64_t nodes = 0;
};

// Max cross number over zero-sum free sequences (little cross number).
CrossResult little_cross_number(const GroupPtr& g, const search::SearchLimits& lim = {},
                                search::WitnessMode mode = search::WitnessMode::One);
// Max cross number over minimal zero-sum sequences (cross number).
CrossResult big_cross_number(const GroupPtr& g, const search::SearchLimits& lim = {},
                             search::WitnessMode mode = search::WitnessMode::One);

struct LengthResult {
  std::int64_t value = 0;
  std::vector<Sequence> witnesses;  // longest sequences avoiding the condition
  bool partial = false;
  std::uint64_t nodes = 0;
};

// Davenport constant: least l so every length-l sequence has a nonempty
// zero-sum subsequence.
LengthResult davenport(const GroupPtr& g, const search::SearchLimits& lim = {},
                       search::WitnessMode mode = search::WitnessMode::None);
// eta: least l forcing a zero-sum subsequence of length in [1, exp(G)].
LengthResult eta(const GroupPtr& g, const search::SearchLimits& lim = {},
                 search::WitnessMode mode = search::WitnessMode::None);
// s: least l forcing a zero-sum subsequence of length exactly exp(G).
// Restricted to rank <= 2 (invariant-factor count); larger ranks error.
LengthResult s_egz(const GroupPtr& g, const search::SearchLimits& lim = {},
                   search::WitnessMode mode = search::WitnessMode::None);

// Generalized constants for a pair d' | d | exp(G): the least t such that
// every length-t sequence over G_d has a nonempty subsequence with sum in
// G_{d/d'} (D variant), respectively one of length <= d' (eta variant).
LengthResult girard_bruteforce_D(const GroupPtr& g, std::int64_t d_prime, std::int64_t d,
                                 const search::SearchLimits& lim = {},
                                 search::WitnessMode mode = search::WitnessMode::None);
LengthResult girard_bruteforce_eta(const GroupPtr& g, std::int64_t d_prime, std::int64_t d,
                                   const search::SearchLimits& lim = {},
                                   search::WitnessMode mode = search::WitnessMode::None);

// Closed-form side: with G = C_{n_1} + ... + C_{n_r} in invariant-factor form,
// A_i = gcd(d', n_i), B_i = lcm(d, n_i)/lcm(d', n_i), v_i = A_i/gcd(A_i, B_i),
// the value is D(C_{v_1} + ... + C_{v_r}).
struct GirardParams {
  std::int64_t d_prime = 1, d = 1;
  std::vector<std::int64_t> invariant_factors;  // n_1 | ... | n_r
  std::vector<std::int64_t> a, b, v;
  GroupPtr derived;  // direct sum of the C_{v_i} (trivial if all v_i = 1)
  std::int64_t value = 1;
};
GirardParams girard_formula(const GroupPtr& g, std::int64_t d_prime, std::int64_t d);

struct InvariantReport {
  std::string input_text;
  std::string canonical;
  std::int64_t order = 0;
  std::int64_t exponent = 0;
  Rational k_little, k_big, k_star, K_star;
  std::optional<std::int64_t> davenport;
  std::optional<std::int64_t> eta;
  std::optional<std::int64_t> s_egz;
  std::vector<Sequence> witnesses_k;
  std::vector<Sequence> witnesses_K;
  bool conjecture_k = false;  // k_little == k_star
  bool conjecture_K = false;  // k_big == K_star
  bool sandwich_ok = false;   // k + 1/exp <= K <= k + 1/pmin(exp); vacuous for C1
  bool all_witnesses = false;
  bool partial = false;
  std::uint64_t nodes = 0;
  search::SearchLimits limits;
};

struct ReportOptions {
  bool with_davenport = false;
  bool with_eta = false;
  bool with_s = false;
  bool all_witnesses = false;
  search::SearchLimits limits{};
};

InvariantReport conjecture_verdict(const GroupPtr& g, const ReportOptions& opt = {});

}  // namespace crossnum
