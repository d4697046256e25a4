#include "doctest.h"

#include <set>

#include "gridlens/validation.hpp"

using namespace gridlens;

namespace {

ValidationReport check(const char* doc) { return validate_workbook(load_workbook(doc)); }

}  // namespace

TEST_CASE("clean workbook has no findings") {
    CHECK(check(R"J({"sheets":[{"name":"S","cells":[{"addr":"A1","value":1},{"addr":"B1","formula":"=A1+1"}]}]})J")
              .empty());
}

TEST_CASE("reference to a missing sheet") {
    auto r = check(R"J({"sheets":[{"name":"S","cells":[{"addr":"A1","formula":"=Missing!A1"}]}]})J");
    REQUIRE(r.size() == 1);
    CHECK(r[0].severity == Severity::Error);
    CHECK(r[0].kind == "unknown-sheet");
    CHECK(r[0].location == "S!A1");
}

TEST_CASE("unsupported function") {
    auto r = check(R"J({"sheets":[{"name":"S","cells":[{"addr":"A1","formula":"=FOO(1)"}]}]})J");
    REQUIRE(r.size() == 1);
    CHECK(r[0].kind == "unknown-function");
    CHECK(r[0].severity == Severity::Warning);
}

TEST_CASE("undefined and shadowed names") {
    auto r = check(R"J({"sheets":[{"name":"S","cells":[
        {"addr":"A1","value":2,"label":"Rate"},{"addr":"B1","formula":"=Rate+Nope"}]}],
        "definedNames":{"Rate":"S!A1"}})J");
    REQUIRE(r.size() == 2);
    std::set<std::string> kinds{r[0].kind, r[1].kind};
    CHECK(kinds == std::set<std::string>{"label-shadows-name", "unknown-name"});
}

TEST_CASE("approximate lookup over an unsorted table") {
    auto r = check(R"J({"sheets":[{"name":"S","cells":[
        {"addr":"A1","value":5},{"addr":"A2","value":1},{"addr":"A3","value":9},
        {"addr":"B1","formula":"=MATCH(4,A1:A3,1)"},
        {"addr":"B2","formula":"=MATCH(4,A1:A3,0)"}]}]})J");
    REQUIRE(r.size() == 1);
    CHECK(r[0].kind == "unsorted-lookup");
    CHECK(r[0].location == "S!B1");
}

TEST_CASE("findings are reported once per location") {
    auto r = check(R"J({"sheets":[{"name":"S","cells":[{"addr":"A1","formula":"=X!A1+X!B2"}]}]})J");
    CHECK(r.size() == 1);
}
