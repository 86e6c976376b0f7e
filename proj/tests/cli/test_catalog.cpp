#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include <json.hpp>

#include "catalog.hpp"

using namespace qtverify;
using qtorus::Report;
using qtorus::Status;

TEST_CASE("catalog contents") {
  std::set<std::string> names;
  for (const auto& e : catalog()) {
    CHECK(names.insert(e.name).second);
    CHECK(!e.anchor.empty());
    CHECK(e.defaults.indices.size() == e.index_names.size());
  }
  for (const char* n : {"kp.canonical", "kp.additional_commute", "kp.quantum_commute", "kp.qt_relation", "qt.combina",
                        "bkp.btype", "bkp.mb_lemma", "kdv.canonical"}) {
    CHECK(names.count(n) == 1);
  }
  CHECK(find_check("nope") == nullptr);
}

TEST_CASE("parameter resolution") {
  const CheckEntry* e = find_check("kp.lax");
  REQUIRE(e != nullptr);
  Params p = resolve(*e, {});
  CHECK(p.T == 3);
  CHECK(p.O == 8);
  CHECK(p.D == 2);
  CHECK(p.P == 4);
  CHECK(p.indices == std::vector<int>{2});
  Overrides o;
  o.O = 6;
  o.indices = std::vector<int>{3};
  p = resolve(*e, o);
  CHECK(p.O == 6);
  CHECK(p.indices == std::vector<int>{3});
}

TEST_CASE("running checks") {
  Overrides o;
  o.T = 3;
  o.O = 6;
  o.D = 1;
  Report r = run_check("kp.canonical", o);
  CHECK(r.status == Status::kPass);
  CHECK(r.params["O"] == 6);

  Overrides c;
  c.D = 1;
  Report comb = run_check("qt.combina", c);
  CHECK(comb.status == Status::kPass);
  REQUIRE(!comb.details.empty());
  CHECK(comb.details.front() == "m*l*eps - n*k*eps on both sides");

  Report bad = run_check("nope", {});
  CHECK(bad.status == Status::kError);
  CHECK(exit_code({bad}) != 0);

  Overrides wrong;
  wrong.indices = std::vector<int>{1};
  CHECK(run_check("kp.w_structure", wrong).status == Status::kError);

  Overrides even;
  even.T = 2;
  Report e = run_check("kdv.canonical", even);
  CHECK(e.status == Status::kError);
  CHECK(exit_code({r, comb}) == 0);
}

TEST_CASE("rendering") {
  CHECK(render_json({}) == "[]\n");
  Report r;
  r.check = "kp.canonical";
  r.params = {{"T", 3}};
  r.status = Status::kPass;
  r.elapsed_ms = 1.5;
  std::string text = render_text({r});
  CHECK(text.find("PASS") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(render_text({r}) == text);
  CHECK(render_json({r}) == render_json({r}));

  Report f;
  f.check = "a.first";
  f.params = {{"n", 1}};
  f.fail("degree 0: residual 1");
  f.certified_range = nlohmann::ordered_json{{"degrees", {-2, 1}}};
  auto parsed = nlohmann::ordered_json::parse(render_json({r, f}));
  REQUIRE(parsed.size() == 2);
  // Sorted by check name.
  CHECK(Report::from_json(parsed[0]) == f);
  CHECK(Report::from_json(parsed[1]) == r);
  CHECK(exit_code({r, f}) == 1);
  Report rec = r;
  rec.status = Status::kRecorded;
  CHECK(exit_code({rec}) == 0);
}

TEST_CASE("config files") {
  Overrides o = parse_config("# defaults\nT = 5\nO=10 # deeper\n\nindices = 1, 2,3\nformat = json\n");
  CHECK(o.T == 5);
  CHECK(o.O == 10);
  CHECK(!o.D.has_value());
  CHECK(o.indices == std::vector<int>{1, 2, 3});
  CHECK(o.format == "json");
  Overrides flags;
  flags.O = 7;
  o.merge(flags);
  CHECK(o.O == 7);
  CHECK(o.T == 5);
  CHECK_THROWS(parse_config("T = x\n"));
  CHECK_THROWS(parse_config("Q = 1\n"));
  CHECK_THROWS(parse_config("T 3\n"));
  CHECK(parse_indices("").empty());
  CHECK(parse_indices("-1,2") == std::vector<int>{-1, 2});
}

TEST_CASE("suites") {
  auto all = suite("all");
  REQUIRE(all.has_value());
  CHECK(all->size() == catalog().size());
  CHECK(suite("smoke").has_value());
  CHECK(!suite("unknown").has_value());
}
