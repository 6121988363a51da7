#include <catch2/catch.hpp>

#include "hyperlab/subsystem.hpp"

using namespace hyperlab;

TEST_CASE("single-one family membership is the closed form") {
    auto spec = single_one_family();
    CHECK(spec.member(SymbolicPoint::periodic({0})));                    // 0^inf
    CHECK(spec.member(SymbolicPoint(Word{0}, Word{1}, Word{0}, 4)));     // one 1
    CHECK(spec.member(SymbolicPoint::periodic({0, 0, 1}).shifted(2)));   // orbit of (0^2 1)^inf
    CHECK_FALSE(spec.member(SymbolicPoint::periodic({1})));              // gap 0 is excluded
    CHECK_FALSE(spec.member(SymbolicPoint(Word{0}, Word{1, 0, 1}, Word{0}, 0)));  // two 1s
    // unequal gaps on the two sides
    SymbolicPoint mixed(Word{0, 0, 1}, Word{}, Word{0, 0, 0, 1}, 0);
    CHECK_FALSE(spec.member(mixed));
    // 1s on one side only
    CHECK_FALSE(spec.member(SymbolicPoint(Word{0}, Word{}, Word{0, 1}, 0)));
}

TEST_CASE("local_product_check") {
    CHECK(local_product_check(full_shift_spec(), 6).locally_maximal);
    CHECK(local_product_check(golden_mean_spec(), 8).locally_maximal);

    auto r = local_product_check(single_one_family(), 8);
    CHECK_FALSE(r.locally_maximal);
    REQUIRE(r.witness_splice.has_value());
    CHECK_FALSE(single_one_family().member(*r.witness_splice));  // oracle: membership itself
    CHECK(r.witness_x->at(0) == r.witness_y->at(0));

    CHECK_THROWS_AS(local_product_check(full_shift_spec(), 13), std::invalid_argument);
}

TEST_CASE("splice_left_right glues halves") {
    SymbolicPoint x = SymbolicPoint::periodic({0, 0, 1});
    SymbolicPoint y = SymbolicPoint::periodic({0, 1});
    auto z = splice_left_right(y, x);
    for (long long i = 0; i < 9; ++i) CHECK(z.at(i) == x.at(i));
    for (long long i = -9; i < 0; ++i) CHECK(z.at(i) == y.at(i));
}

TEST_CASE("lemma 5.3 instance on the single-one family") {
    const double nu = 1.0 / 16.0;
    auto enc = enclosing_markov_system(single_one_family(), nu, 1);
    CHECK_FALSE(enc.locally_maximal_certificate);
    REQUIRE(enc.q1.has_value());
    REQUIRE(enc.q2.has_value());
    REQUIRE(enc.limit.has_value());
    CHECK(*enc.limit == *enc.q1);
    CHECK(shift_distance(*enc.q1, *enc.q2) < nu);
    CHECK_FALSE(single_one_family().member(*enc.z));

    REQUIRE(enc.escapees.size() >= 5);
    double prev = 1e300;
    auto spec = single_one_family();
    for (const auto& e : enc.escapees) {
        CHECK_FALSE(e.member);
        CHECK_FALSE(spec.member(e.point));  // oracle: closed-form membership
        CHECK(e.point.period().has_value());
        CHECK(e.dist_to_shifted_z < nu * std::ldexp(1.0, -e.n));
        CHECK(e.dist_to_limit_orbit < prev);
        prev = e.dist_to_limit_orbit;
        // escapee admissible in the markov SFT: its Sigma_A origin was, and
        // its distance to the enclosure stays within nu by construction
        CHECK(e.dist_to_shifted_z < nu);
    }

    // the marked set is closed under the shift (full orbits)
    for (int i = 0; i < enc.sft.n(); ++i) {
        SymbolicPoint next = as_sym(enc.sft.symbols[size_t(i)]).shifted(1);
        bool found = false;
        for (int j = 0; j < enc.sft.n(); ++j) found = found || as_sym(enc.sft.symbols[size_t(j)]) == next;
        CHECK(found);
    }
}

TEST_CASE("locally maximal specs give negative certificates") {
    const double nu = 1.0 / 16.0;
    auto full = enclosing_markov_system(full_shift_spec(), nu, 1);
    CHECK(full.locally_maximal_certificate);
    CHECK(full.escapees.empty());

    auto golden = enclosing_markov_system(golden_mean_spec(), nu, 1);
    CHECK(golden.locally_maximal_certificate);
    CHECK(golden.escapees.empty());
}

TEST_CASE("theorem 1.5 desk property under shift powers") {
    const double nu = 1.0 / 16.0;
    for (int k = 1; k <= 3; ++k) {
        for (const auto& spec : {full_shift_spec(), golden_mean_spec()}) {
            CHECK(local_product_check(spec, 6).locally_maximal);
            auto enc = enclosing_markov_system(spec, nu, k);
            CHECK(enc.locally_maximal_certificate);
            CHECK(enc.escapees.empty());
        }
        // the non-locally-maximal family keeps escaping under powers as well
        auto pos = enclosing_markov_system(single_one_family(), nu, k);
        CHECK_FALSE(pos.locally_maximal_certificate);
        CHECK(pos.escapees.size() >= 5);
        for (const auto& e : pos.escapees) CHECK_FALSE(e.member);
    }
}

TEST_CASE("enclosing_markov_system input validation") {
    CHECK_THROWS_AS(enclosing_markov_system(full_shift_spec(), 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(enclosing_markov_system(full_shift_spec(), 0.25, 0), std::invalid_argument);
}
