#include <doctest.h>

#include <sstream>

#include "vaxmed/dataset.hpp"
#include "vaxmed/errors.hpp"

using namespace vaxmed;

TEST_CASE("dataset csv round trip with groups") {
    Dataset d({"A", "Y"}, {{0, 1, 1}, {1, 0, 1}}, std::vector<int>{0, 0, 1});
    std::ostringstream os;
    write_csv(os, d);
    CHECK(os.str() == "A,Y,group\n0,1,0\n1,0,0\n1,1,1\n");
    std::istringstream is(os.str());
    CHECK(read_csv(is) == d);
}

TEST_CASE("counterfactual columns are written only on request") {
    Dataset d({"A"}, {{0, 1}});
    d.add_column("Ycf", {1, 1}, false);
    std::ostringstream plain;
    write_csv(plain, d);
    CHECK(plain.str() == "A\n0\n1\n");
    std::ostringstream full;
    write_csv(full, d, true);
    CHECK(full.str() == "A,Ycf\n0,1\n1,1\n");
}

TEST_CASE("malformed csv is rejected with a location") {
    std::istringstream ragged("A,Y\n0,1\n1\n");
    try {
        read_csv(ragged);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::istringstream text("A\nx\n");
    CHECK_THROWS_AS(read_csv(text), InputError);
    std::istringstream dup("A,A\n0,0\n");
    CHECK_THROWS_AS(read_csv(dup), InputError);
}

TEST_CASE("subset and column access") {
    Dataset d({"A", "Y"}, {{0, 1, 1}, {1, 0, 1}});
    const auto s = d.subset({2, 0});
    CHECK(s.rows() == 2);
    CHECK(s.column("A") == std::vector<int>{1, 0});
    CHECK_THROWS_AS(d.column("Q"), InputError);
    CHECK_THROWS_AS(Dataset({"A", "Y"}, {{0, 1}, {1}}), InputError);
}
