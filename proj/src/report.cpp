#include "crossnum/report.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "crossnum/errors.hpp"
#include "crossnum/subsums.hpp"

namespace crossnum {

namespace {

std::string iso_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json coords_json(const Group& g, Elem e) { return Json(g.coords(e)); }

}  // namespace

Json to_json(const Rational& r) {
  Json j;
  j["num"] = r.num_i64();
  j["den"] = r.den_i64();
  return j;
}

Json to_json(const Sequence& s) {
  const Group& g = *s.group();
  Json terms = Json::array();
  for (const auto& [e, m] : s.terms()) {
    Json t;
    t["coords"] = g.coords(e);
    t["mult"] = m;
    terms.push_back(std::move(t));
  }
  Json j;
  j["group"] = g.canonical_text();
  j["terms"] = std::move(terms);
  return j;
}

Json to_json(const search::SearchLimits& lim) {
  Json j;
  j["max_nodes"] = lim.max_nodes ? Json(lim.max_nodes) : Json(nullptr);
  j["max_seconds"] = lim.max_seconds > 0 ? Json(lim.max_seconds) : Json(nullptr);
  j["max_length"] = lim.max_length ? Json(lim.max_length) : Json(nullptr);
  return j;
}

Json to_json(const InvariantReport& rep) {
  Json j;
  j["group"] = rep.input_text;
  j["canonical"] = rep.canonical;
  j["order"] = rep.order;
  j["exponent"] = rep.exponent;
  j["k_little"] = to_json(rep.k_little);
  j["k_big"] = to_json(rep.k_big);
  j["k_star"] = to_json(rep.k_star);
  j["K_star"] = to_json(rep.K_star);
  if (rep.davenport) j["davenport"] = *rep.davenport;
  if (rep.eta) j["eta"] = *rep.eta;
  if (rep.s_egz) j["s_egz"] = *rep.s_egz;
  Json w;
  w["k"] = Json::array();
  for (const auto& s : rep.witnesses_k) w["k"].push_back(to_json(s));
  w["K"] = Json::array();
  for (const auto& s : rep.witnesses_K) w["K"].push_back(to_json(s));
  j["witnesses"] = std::move(w);
  Json v;
  v["conjecture_k"] = rep.conjecture_k;
  v["conjecture_K"] = rep.conjecture_K;
  v["sandwich_ok"] = rep.sandwich_ok;
  j["verdicts"] = std::move(v);
  j["all_witnesses"] = rep.all_witnesses;
  j["partial"] = rep.partial;
  j["limits"] = to_json(rep.limits);
  return j;
}

Json to_json(const StructureVerdict& v, const Group& g) {
  Json j;
  j["decomposes"] = v.decomposes;
  j["cross_element"] = v.cross_element ? coords_json(g, *v.cross_element) : Json(nullptr);
  j["p_group_convention"] = v.p_group_convention;
  Json parts;
  for (const auto& [p, part] : v.parts) parts[std::to_string(p)] = to_json(part);
  j["parts"] = std::move(parts);
  Json fails = Json::array();
  for (Elem e : v.failures) fails.push_back(coords_json(g, e));
  j["failures"] = std::move(fails);
  j["note"] = v.note;
  return j;
}

Json to_json(const StructureReport& rep) {
  Json j;
  j["group"] = rep.group;
  j["k"] = to_json(rep.k_value);
  j["K"] = to_json(rep.K_value);
  j["zsf_total"] = rep.zsf_total;
  j["minimal_total"] = rep.minimal_total;
  Json zf = Json::array();
  for (const auto& s : rep.zsf_failures) zf.push_back(to_json(s));
  j["zsf_failures"] = std::move(zf);
  Json mf = Json::array();
  for (const auto& s : rep.minimal_failures) mf.push_back(to_json(s));
  j["minimal_failures"] = std::move(mf);
  j["zsf_all_decompose"] = rep.zsf_all_decompose;
  j["minimal_all_decompose"] = rep.minimal_all_decompose;
  j["partial"] = rep.partial;
  return j;
}

Json to_json(const MergeLedger& led) {
  const Group& g = *led.input.group();
  Json j;
  j["pipeline"] = led.pipeline;
  j["group"] = g.canonical_text();
  j["input_minimal"] = led.input_minimal;
  j["p"] = led.p;
  j["q"] = led.q;
  if (led.pipeline == "pqr")
    j["r"] = led.r;
  else
    j["q_modulus"] = led.q_modulus;
  j["input"] = to_json(led.input);
  j["merged_part"] = to_json(led.p_part);
  j["leftover"] = to_json(led.leftover);
  j["output"] = to_json(led.output);
  Json stages = Json::array();
  for (const auto& st : led.stages) {
    Json s;
    s["stage"] = st.stage;
    s["projection"] = st.projection;
    s["carry_in"] = to_json(st.carry_in);
    s["fresh"] = to_json(st.fresh);
    s["kappa"] = to_json(st.kappa);
    s["extracted"] = st.extracted;
    s["extracted_cross"] = to_json(st.extracted_cross);
    s["carry_out"] = to_json(st.carry_out);
    s["count_is_floor"] = st.count_is_floor;
    s["fraction_exact"] = st.fraction_exact;
    Json exs = Json::array();
    for (const auto& ex : st.extractions) {
      Json e;
      Json pre = Json::array();
      for (Elem el : ex.preimage) pre.push_back(coords_json(g, el));
      e["preimage"] = std::move(pre);
      e["projected"] = Json(std::vector<std::int64_t>(ex.projected.begin(), ex.projected.end()));
      e["replacement"] = coords_json(g, ex.replacement);
      e["projected_cross"] = to_json(ex.projected_cross);
      exs.push_back(std::move(e));
    }
    s["extractions"] = std::move(exs);
    stages.push_back(std::move(s));
  }
  j["stages"] = std::move(stages);
  Json checks = Json::array();
  for (const auto& c : led.checks) {
    Json e;
    e["name"] = c.name;
    e["lhs"] = to_json(c.lhs);
    e["rhs"] = to_json(c.rhs);
    e["holds"] = c.holds;
    e["applicable"] = c.applicable;
    e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  Json asserts = Json::array();
  for (const auto& [name, ok] : led.assertions) {
    Json a;
    a["name"] = name;
    a["ok"] = ok;
    asserts.push_back(std::move(a));
  }
  j["assertions"] = std::move(asserts);
  return j;
}

Sequence sequence_from_json(const Json& j, std::int64_t order_cap) {
  if (!j.is_object() || !j.contains("group") || !j.contains("terms") ||
      !j["group"].is_string() || !j["terms"].is_array())
    throw ParseError("sequence file: expected an object with 'group' and 'terms'");
  GroupPtr g = make_group(j["group"].get<std::string>(), order_cap);
  std::vector<std::pair<Elem, std::uint32_t>> terms;
  for (const auto& t : j["terms"]) {
    if (!t.is_object() || !t.contains("coords") || !t.contains("mult") ||
        !t["coords"].is_array() || !t["mult"].is_number_integer())
      throw ParseError("sequence file: each term needs 'coords' and integer 'mult'");
    std::int64_t mult = t["mult"].get<std::int64_t>();
    if (mult < 1 || mult > 0xffffffffLL)
      throw ParseError("sequence file: 'mult' out of range");
    const auto& cj = t["coords"];
    if (static_cast<int>(cj.size()) != g->components())
      throw ParseError("sequence file: wrong coordinate count for " + g->canonical_text());
    std::vector<std::int64_t> c;
    for (const auto& x : cj) {
      if (!x.is_number_integer()) throw ParseError("sequence file: non-integer coordinate");
      c.push_back(x.get<std::int64_t>());
    }
    for (int i = 0; i < g->components(); ++i)
      if (c[i] < 0 || c[i] >= g->canonical()[i].modulus)
        throw ParseError("sequence file: coordinate out of range");
    terms.emplace_back(g->from_coords(c), static_cast<std::uint32_t>(mult));
  }
  return Sequence(g, terms);
}

Sequence load_sequence_file(const std::string& path, std::int64_t order_cap) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sequence file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("sequence file: ") + e.what());
  }
  return sequence_from_json(j, order_cap);
}

Json make_certificate(const std::string& invariant, const Rational& value,
                      const std::vector<Sequence>& witnesses, const GroupPtr& g,
                      const search::SearchLimits& lim, bool partial) {
  Json j;
  j["schema_version"] = 1;
  j["group"] = g->canonical_text();
  j["invariant"] = invariant;
  j["value"] = to_json(value);
  Json w = Json::array();
  for (const auto& s : witnesses) w.push_back(to_json(s));
  j["witnesses"] = std::move(w);
  j["maximality"] = "search-asserted";
  j["limits"] = to_json(lim);
  j["partial"] = partial;
  j["timestamp"] = iso_now();
  return j;
}

VerifyOutcome verify_certificate(const Json& cert, std::int64_t order_cap) {
  auto need = [&](const char* field) -> const Json& {
    if (!cert.is_object() || !cert.contains(field))
      throw ParseError(std::string("certificate: missing field '") + field + "'");
    return cert[field];
  };
  if (!need("schema_version").is_number_integer() ||
      cert["schema_version"].get<std::int64_t>() != 1)
    throw ParseError("certificate: unsupported schema_version");
  if (!need("group").is_string()) throw ParseError("certificate: 'group' must be a string");
  const Json& inv = need("invariant");
  if (!inv.is_string()) throw ParseError("certificate: 'invariant' must be a string");
  std::string name = inv.get<std::string>();
  if (name != "k" && name != "K") throw ParseError("certificate: unknown invariant " + name);
  const Json& vj = need("value");
  if (!vj.is_object() || !vj.contains("num") || !vj.contains("den") ||
      !vj["num"].is_number_integer() || !vj["den"].is_number_integer())
    throw ParseError("certificate: 'value' must be {num, den}");
  if (!need("witnesses").is_array()) throw ParseError("certificate: 'witnesses' must be a list");
  need("maximality");
  need("partial");

  GroupPtr g = make_group(cert["group"].get<std::string>(), order_cap);
  Rational value;
  try {
    value = Rational::of(vj["num"].get<std::int64_t>(), vj["den"].get<std::int64_t>());
  } catch (const std::domain_error&) {
    throw ParseError("certificate: zero denominator");
  }

  VerifyOutcome out;
  int idx = 0;
  for (const auto& wj : cert["witnesses"]) {
    Sequence s = sequence_from_json(wj, order_cap);
    std::string tag = "witness " + std::to_string(idx++);
    if (!s.group()->same_presentation(*g)) {
      out.problems.push_back(tag + ": group mismatch");
      continue;
    }
    if (name == "k" && !is_zero_sum_free(s))
      out.problems.push_back(tag + ": not zero-sum free");
    if (name == "K" && !is_minimal_zero_sum(s))
      out.problems.push_back(tag + ": not a minimal zero-sum");
    if (s.cross_number() != value)
      out.problems.push_back(tag + ": cross number " + s.cross_number().str() +
                             " differs from claimed " + value.str());
  }
  out.ok = out.problems.empty();
  return out;
}

namespace {

void partitions_desc(int e, int maxpart, std::vector<int>& cur,
                     std::vector<std::vector<int>>& out) {
  if (e == 0) {
    out.push_back(cur);
    return;
  }
  for (int k = std::min(e, maxpart); k >= 1; --k) {
    cur.push_back(k);
    partitions_desc(e - k, k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<std::vector<std::int64_t>> abelian_groups_of_order(std::int64_t n) {
  if (n < 1) throw ParseError("group order must be positive");
  if (n == 1) return {{}};
  auto fact = factorize(n);
  std::vector<std::vector<std::vector<int>>> parts(fact.size());
  for (size_t i = 0; i < fact.size(); ++i) {
    std::vector<int> cur;
    partitions_desc(fact[i].second, fact[i].second, cur, parts[i]);
  }
  std::vector<std::vector<std::int64_t>> out;
  std::vector<size_t> idx(fact.size(), 0);
  // Odometer with the first prime most significant.
  while (true) {
    std::vector<std::int64_t> factors;
    for (size_t i = 0; i < fact.size(); ++i)
      for (int e : parts[i][idx[i]]) {
        std::int64_t m = 1;
        for (int t = 0; t < e; ++t) m *= fact[i].first;
        factors.push_back(m);
      }
    out.push_back(std::move(factors));
    size_t i = fact.size();
    bool carry = true;
    while (i > 0 && carry) {
      --i;
      if (++idx[i] < parts[i].size())
        carry = false;
      else
        idx[i] = 0;
    }
    if (carry) return out;
  }
}

SweepResult run_sweep(const SweepOptions& opt) {
  if (opt.max_order < 1) throw ParseError("sweep: max order must be >= 1");
  if (opt.max_order > kDefaultOrderCap)
    throw ParseError("sweep: max order exceeds the group order cap");
  if (opt.out_path.empty()) throw ParseError("sweep: output path required");

  std::set<std::string> done;
  if (opt.resume) {
    std::ifstream in(opt.out_path);
    if (in) {
      std::vector<std::string> good;
      std::string line;
      bool bad_tail = false;
      while (std::getline(in, line)) {
        if (bad_tail)
          throw ParseError("sweep: corrupt line in the middle of " + opt.out_path);
        if (line.empty()) continue;
        try {
          Json j = Json::parse(line);
          done.insert(j.at("canonical").get<std::string>());
          good.push_back(line);
        } catch (const Json::exception&) {
          bad_tail = true;  // only acceptable on the final line
        }
      }
      in.close();
      if (bad_tail) {
        std::ofstream rw(opt.out_path, std::ios::trunc);
        for (const auto& l : good) rw << l << "\n";
      }
    }
  } else {
    std::ofstream fresh(opt.out_path, std::ios::trunc);
    if (!fresh) throw ParseError("sweep: cannot write " + opt.out_path);
  }

  std::ofstream out(opt.out_path, std::ios::app);
  if (!out) throw ParseError("sweep: cannot write " + opt.out_path);

  SweepResult res;
  int threads = search::resolve_limits(opt.limits).threads;
  for (std::int64_t n = 2; n <= opt.max_order; ++n) {
    for (const auto& factors : abelian_groups_of_order(n)) {
      auto g = std::make_shared<Group>(Group::from_factors(factors));
      std::string canon = g->canonical_text();
      if (done.count(canon)) {
        ++res.groups_skipped;
        continue;
      }
      auto t0 = std::chrono::steady_clock::now();
      ReportOptions ro;
      ro.limits = opt.limits;
      InvariantReport rep = conjecture_verdict(g, ro);
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      Json line = to_json(rep);
      Json meta;
      meta["timestamp"] = iso_now();
      meta["threads"] = threads;
      meta["elapsed_ms"] = ms;
      meta["nodes"] = rep.nodes;
      line["meta"] = std::move(meta);
      out << line.dump() << "\n";
      out.flush();
      ++res.groups_done;
      if (!rep.conjecture_k || !rep.conjecture_K || !rep.sandwich_ok)
        res.violations.push_back(canon);
      if (rep.partial) res.partial = true;
    }
  }
  res.exit_code = !res.violations.empty() ? 1 : (res.partial ? 3 : 0);
  return res;
}

}  // namespace crossnum
