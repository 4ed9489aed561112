#include "doctest.h"
#include "rsn/error.hpp"
#include "rsn/records.hpp"
#include "rsn/verify.hpp"

using namespace rsn;

TEST_SUITE("records") {
  TEST_CASE("tableau records round trip") {
    ProcessSpec spec;
    spec.shape = Shape::staircase(2, 5);
    spec.rate = 5.0;
    Stream rng(7, 1);
    const auto f = run_process(spec, rng);
    const auto rec = tableau_record(f, 7, 1, true);
    const auto line = to_jsonl(rec);
    CHECK(line.find("\"schema\":\"rsn.tableau/1\"") != std::string::npos);
    const auto back = parse_tableau(line);
    CHECK(back.filling == rec.filling);
    CHECK(back.times == rec.times);
    CHECK(back.seed == 7);
    CHECK(back.replica == 1);
    CHECK(to_jsonl(back) == line);
  }

  TEST_CASE("loaders reject unknown versions and bad fillings") {
    CHECK_THROWS_AS(parse_tableau(R"({"schema":"rsn.tableau/2","n":2,"c":0,"cells":[{"x":0,"y":1,"rank":1}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_tableau(R"({"n":2,"c":0,"cells":[]})"), ValidationError);
    CHECK_THROWS_AS(parse_tableau("not json"), ValidationError);
    // (0,2) ranked before a cell below it.
    CHECK_THROWS_AS(parse_tableau(R"({"schema":"rsn.tableau/1","n":3,"c":0,"cells":[)"
                                  R"({"x":-1,"y":1,"rank":1},{"x":1,"y":1,"rank":3},{"x":0,"y":2,"rank":2}]})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_network(R"({"schema":"rsn.network/0","n":3,"c":0,"word":[]})"), ValidationError);
  }

  TEST_CASE("network records round trip") {
    const SortingNetwork net{3, 0, {-1, 1, -1}, {0.1, 0.2, 0.3}};
    CHECK(parse_network(to_jsonl(net)) == net);
    const SortingNetwork bare{3, 0, {-1, 1, -1}, {}};
    CHECK(to_jsonl(bare).find("times") == std::string::npos);
  }

  TEST_CASE("manifest") {
    RunManifest m{"experiment", "n = 3\n", 5, {{"a.csv", "0123"}}};
    const auto j = to_json(m);
    CHECK(j.find("rsn.manifest/1") != std::string::npos);
    CHECK(j.find(code_version()) != std::string::npos);
    CHECK(hex_digest(0xabcULL) == "0000000000000abc");
  }

  TEST_CASE("oracle suite output") {
    const auto results = run_suite("oracle", 1, 1);
    bool found = false;
    for (const auto& r : results) {
      CHECK(r.pass);
      found = found || r.name == "d(5)=768";
    }
    CHECK(found);
    CHECK_THROWS_AS(run_suite("bogus", 1, 1), DomainError);
  }
}
