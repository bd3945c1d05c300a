#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "crossnum/errors.hpp"
#include "crossnum/extremal.hpp"
#include "crossnum/group.hpp"
#include "crossnum/invariants.hpp"
#include "crossnum/report.hpp"
#include "crossnum/sequence.hpp"

using namespace crossnum;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) { std::remove(path.c_str()); }
  ~TempFile() { std::remove(path.c_str()); }
  void write(const std::string& content) const {
    std::ofstream out(path, std::ios::trunc);
    out << content;
  }
  std::string read() const {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
};

// Every sweep line minus its quarantined nondeterministic member.
std::vector<std::string> stable_lines(const std::string& text) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    Json j = Json::parse(line);
    j.erase("meta");
    out.push_back(j.dump());
  }
  return out;
}

}  // namespace

TEST_CASE("rationals serialize as exact integer pairs in fixed key order") {
  CHECK(to_json(Rational::of(22, 7)).dump() == R"({"num":22,"den":7})");
  CHECK(to_json(Rational::of(-3, 6)).dump() == R"({"num":-1,"den":2})");
  CHECK(to_json(Rational(0)).dump() == R"({"num":0,"den":1})");
}

TEST_CASE("sequence json round-trips through the file format") {
  auto g = make_group("C4xC6");
  Sequence s(g, std::vector<Elem>{g->from_coords({1, 0, 2}), g->from_coords({1, 0, 2}),
                                  g->from_coords({0, 1, 1})});
  Json j = to_json(s);
  CHECK(j["group"] == g->canonical_text());
  Sequence back = sequence_from_json(j);
  CHECK(back == s);
  CHECK(back.group()->same_presentation(*g));
}

TEST_CASE("sequence json validation throws ParseError with specifics") {
  CHECK_THROWS_AS(sequence_from_json(Json::parse(R"({"terms": []})")), ParseError);
  CHECK_THROWS_AS(sequence_from_json(Json::parse(R"({"group": "C6"})")), ParseError);
  CHECK_THROWS_AS(sequence_from_json(Json::parse(R"("C6")")), ParseError);
  // term problems: missing mult, zero mult, wrong coordinate count,
  // non-integer coordinate, out-of-range coordinate
  CHECK_THROWS_AS(
      sequence_from_json(Json::parse(R"({"group":"C6","terms":[{"coords":[1,1]}]})")),
      ParseError);
  CHECK_THROWS_AS(
      sequence_from_json(
          Json::parse(R"({"group":"C6","terms":[{"coords":[1,1],"mult":0}]})")),
      ParseError);
  CHECK_THROWS_AS(
      sequence_from_json(Json::parse(R"({"group":"C6","terms":[{"coords":[1],"mult":1}]})")),
      ParseError);
  CHECK_THROWS_AS(
      sequence_from_json(
          Json::parse(R"({"group":"C6","terms":[{"coords":[1,"x"],"mult":1}]})")),
      ParseError);
  CHECK_THROWS_AS(
      sequence_from_json(
          Json::parse(R"({"group":"C6","terms":[{"coords":[1,3],"mult":1}]})")),
      ParseError);
  // valid: C6 is canonically C2xC3, so coords are a pair
  Sequence ok = sequence_from_json(
      Json::parse(R"({"group":"C6","terms":[{"coords":[1,2],"mult":3}]})"));
  CHECK(ok.length() == 3);
}

TEST_CASE("sequence files load and reject malformed content") {
  TempFile f("report_test_seq.json");
  f.write(R"({"group":"C4","terms":[{"coords":[2],"mult":1},{"coords":[1],"mult":2}]})");
  Sequence s = load_sequence_file(f.path);
  CHECK(s.length() == 3);
  CHECK(s.cross_number() == Rational::of(1, 2) + Rational::of(2, 4));
  f.write("{not json");
  CHECK_THROWS_AS(load_sequence_file(f.path), ParseError);
  CHECK_THROWS_AS(load_sequence_file("no_such_file_anywhere.json"), ParseError);
}

TEST_CASE("search limits serialize with nulls for unlimited, no thread count") {
  Json empty = to_json(search::SearchLimits{});
  CHECK(empty["max_nodes"].is_null());
  CHECK(empty["max_seconds"].is_null());
  CHECK(empty["max_length"].is_null());
  CHECK(!empty.contains("threads"));
  search::SearchLimits lim;
  lim.max_nodes = 500;
  lim.max_length = 7;
  lim.threads = 4;
  Json j = to_json(lim);
  CHECK(j["max_nodes"] == 500);
  CHECK(j["max_seconds"].is_null());
  CHECK(j["max_length"] == 7);
  CHECK(!j.contains("threads"));
}

TEST_CASE("invariant reports carry exact values, verdicts and witnesses") {
  ReportOptions opt;
  opt.with_davenport = true;
  opt.with_eta = true;
  opt.with_s = true;
  InvariantReport rep = conjecture_verdict(make_group("C6"), opt);
  Json j = to_json(rep);
  CHECK(j["canonical"] == "C2xC3");
  CHECK(j["order"] == 6);
  CHECK(j["exponent"] == 6);
  CHECK(j["k_little"].dump() == R"({"num":7,"den":6})");
  CHECK(j["k_big"].dump() == R"({"num":4,"den":3})");
  CHECK(j["davenport"] == 6);
  CHECK(j["eta"] == 6);
  CHECK(j["s_egz"] == 11);
  CHECK(j["verdicts"]["conjecture_k"] == true);
  CHECK(j["verdicts"]["conjecture_K"] == true);
  CHECK(j["verdicts"]["sandwich_ok"] == true);
  CHECK(j["witnesses"]["k"].size() > 0);
  CHECK(j["witnesses"]["K"].size() > 0);
  CHECK(j["partial"] == false);
  // optional invariants stay absent when not requested
  Json bare = to_json(conjecture_verdict(make_group("C6")));
  CHECK(!bare.contains("davenport"));
  CHECK(!bare.contains("eta"));
  CHECK(!bare.contains("s_egz"));
}

TEST_CASE("certificates verify, and tampering surfaces as problems") {
  auto g = make_group("C6");
  CrossResult r = big_cross_number(g, {}, search::WitnessMode::All);
  Json cert = make_certificate("K", r.value, r.witnesses, g, {}, false);
  CHECK(verify_certificate(cert).ok);

  Json wrong_value = cert;
  wrong_value["value"] = to_json(r.value + Rational::of(1, 6));
  VerifyOutcome bad = verify_certificate(wrong_value);
  CHECK(!bad.ok);
  CHECK(bad.problems.size() == cert["witnesses"].size());

  Json wrong_witness = cert;
  wrong_witness["witnesses"][0]["terms"][0]["mult"] =
      wrong_witness["witnesses"][0]["terms"][0]["mult"].get<std::int64_t>() + 1;
  CHECK(!verify_certificate(wrong_witness).ok);

  Json mismatched = cert;
  mismatched["witnesses"][0]["group"] = "C4";
  mismatched["witnesses"][0]["terms"] = Json::array();
  mismatched["witnesses"][0]["terms"].push_back(
      Json::parse(R"({"coords":[1],"mult":1})"));
  VerifyOutcome mm = verify_certificate(mismatched);
  CHECK(!mm.ok);
  CHECK(mm.problems[0].find("group mismatch") != std::string::npos);
}

TEST_CASE("certificate structural problems throw ParseError") {
  auto g = make_group("C4");
  CrossResult r = little_cross_number(g, {}, search::WitnessMode::All);
  Json cert = make_certificate("k", r.value, r.witnesses, g, {}, false);
  CHECK(verify_certificate(cert).ok);

  Json missing = cert;
  missing.erase("witnesses");
  CHECK_THROWS_AS(verify_certificate(missing), ParseError);

  Json unknown = cert;
  unknown["invariant"] = "eta";
  CHECK_THROWS_AS(verify_certificate(unknown), ParseError);

  Json badschema = cert;
  badschema["schema_version"] = 2;
  CHECK_THROWS_AS(verify_certificate(badschema), ParseError);

  Json zeroden = cert;
  zeroden["value"] = Json::parse(R"({"num":1,"den":0})");
  CHECK_THROWS_AS(verify_certificate(zeroden), ParseError);

  CHECK_THROWS_AS(verify_certificate(Json::parse("[]")), ParseError);
}

TEST_CASE("abelian group enumeration: counts and canonical sweep order") {
  CHECK(abelian_groups_of_order(1) == std::vector<std::vector<std::int64_t>>{{}});
  CHECK(abelian_groups_of_order(2) == std::vector<std::vector<std::int64_t>>{{2}});
  // order 16: exponent partitions of 4, largest part first
  std::vector<std::vector<std::int64_t>> p16 = {
      {16}, {8, 2}, {4, 4}, {4, 2, 2}, {2, 2, 2, 2}};
  CHECK(abelian_groups_of_order(16) == p16);
  // order 12: first prime most significant
  std::vector<std::vector<std::int64_t>> p12 = {{4, 3}, {2, 2, 3}};
  CHECK(abelian_groups_of_order(12) == p12);
  // order 36: both primes sweep their partitions
  std::vector<std::vector<std::int64_t>> p36 = {
      {4, 9}, {4, 3, 3}, {2, 2, 9}, {2, 2, 3, 3}};
  CHECK(abelian_groups_of_order(36) == p36);
  std::int64_t upto16 = 0, upto36 = 0;
  for (std::int64_t n = 2; n <= 36; ++n) {
    std::int64_t c = static_cast<std::int64_t>(abelian_groups_of_order(n).size());
    if (n <= 16) upto16 += c;
    upto36 += c;
  }
  CHECK(upto16 == 24);
  CHECK(upto36 == 61);
  CHECK_THROWS_AS(abelian_groups_of_order(0), ParseError);
}

TEST_CASE("sweep writes one verdict line per group and resumes cleanly") {
  TempFile f("report_test_sweep.jsonl");
  SweepOptions opt;
  opt.max_order = 6;
  opt.out_path = f.path;
  SweepResult r1 = run_sweep(opt);
  CHECK(r1.exit_code == 0);
  CHECK(r1.groups_done == 6);  // orders 2,3,4(x2),5,6
  CHECK(r1.groups_skipped == 0);
  CHECK(r1.violations.empty());
  std::string first = f.read();
  CHECK(stable_lines(first).size() == 6);

  // resume: nothing to redo
  opt.resume = true;
  SweepResult r2 = run_sweep(opt);
  CHECK(r2.groups_done == 0);
  CHECK(r2.groups_skipped == 6);
  CHECK(stable_lines(f.read()) == stable_lines(first));

  // a corrupt final line is truncated and its group redone
  std::string trimmed = first;
  size_t cut = trimmed.find_last_of('\n', trimmed.size() - 2);
  trimmed.erase(cut + 1);
  f.write(trimmed + "{broken");
  SweepResult r3 = run_sweep(opt);
  CHECK(r3.groups_done == 1);
  CHECK(r3.groups_skipped == 5);
  CHECK(stable_lines(f.read()) == stable_lines(first));

  // a corrupt line in the middle aborts instead of silently dropping data
  f.write("{broken\n" + first);
  CHECK_THROWS_AS(run_sweep(opt), ParseError);
}

TEST_CASE("sweep output is byte-stable across fresh runs and thread counts") {
  TempFile a("report_test_sweep_a.jsonl"), b("report_test_sweep_b.jsonl");
  SweepOptions oa;
  oa.max_order = 8;
  oa.out_path = a.path;
  run_sweep(oa);
  SweepOptions ob = oa;
  ob.out_path = b.path;
  ob.limits.threads = 2;
  run_sweep(ob);
  CHECK(stable_lines(a.read()) == stable_lines(b.read()));
  CHECK(stable_lines(a.read()).size() == 10);  // 1+1+2+1+1+1+3 groups of orders 2..8
}

TEST_CASE("sweep option validation") {
  SweepOptions bad;
  bad.max_order = 0;
  bad.out_path = "x.jsonl";
  CHECK_THROWS_AS(run_sweep(bad), ParseError);
  bad.max_order = kDefaultOrderCap + 1;
  CHECK_THROWS_AS(run_sweep(bad), ParseError);
  bad.max_order = 6;
  bad.out_path = "";
  CHECK_THROWS_AS(run_sweep(bad), ParseError);
}

TEST_CASE("merge ledger and structure reports serialize completely") {
  auto g = make_group("C2xC3");
  Sequence s(g, std::vector<Elem>{g->from_coords({1, 1}), g->from_coords({1, 1}),
                                  g->from_coords({1, 1})});
  Json mj = to_json(projection_merge_pq(s));
  CHECK(mj["pipeline"] == "pq");
  CHECK(mj["q_modulus"] == 3);
  CHECK(!mj.contains("r"));
  CHECK(mj["stages"].size() == 1);
  CHECK(mj["stages"][0]["extracted"] == 1);
  CHECK(mj["stages"][0]["extractions"][0]["projected"] == Json::parse("[1,1,1]"));
  CHECK(mj["checks"].size() > 0);
  CHECK(mj["assertions"].size() > 0);

  Json sj = to_json(verify_structure_conjecture(make_group("C6")));
  CHECK(sj["group"] == "C2xC3");
  CHECK(sj["K"].dump() == R"({"num":4,"den":3})");
  CHECK(sj["zsf_all_decompose"] == true);

  StructureVerdict v = classify_structure(
      Sequence(make_group("C6"), {3, 2, 2, 5}), StructureKind::MinimalZeroSum);
  Json vj = to_json(v, *make_group("C6"));
  CHECK(vj["decomposes"] == true);
  CHECK(vj["cross_element"] == Json::parse("[1,2]"));
  CHECK(vj["parts"].contains("2"));
  CHECK(vj["parts"].contains("3"));
}
