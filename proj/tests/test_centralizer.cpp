#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "hyperlab/centralizer.hpp"

using namespace hyperlab;

TEST_CASE("commutation residual") {
    auto cat = build_system("cat");
    CHECK(commutation_residual(cat, power_partner(cat, 2), 256) < 1e-12);
    CHECK(commutation_residual(cat, identity_partner(cat.space), 256) == 0.0);

    // shear does not commute with cat; oracle: the integer matrices
    // [[2,1],[1,1]] and [[1,1],[0,1]] have AB != BA
    PartnerMap shear{"shear", cat.space, [](const Point& q) -> std::optional<Point> {
                         Vec2 v = as_2d(q);
                         return Point(Vec2{wrap01(v.x + v.y), v.y});
                     }};
    CHECK(commutation_residual(cat, shear, 256) > 0.1);

    auto ns = build_system("north_south");
    CHECK(commutation_residual(ns, identity_partner(ns.space), 256) == 0.0);
    CHECK_THROWS_AS(commutation_residual(cat, shear, 50), std::invalid_argument);
    CHECK_THROWS_AS(commutation_residual(cat, identity_partner({SpaceKind::circle}), 256),
                    std::invalid_argument);
}

TEST_CASE("periodic permutation check: cat with cat^2") {
    auto cat = build_system("cat");
    auto rep = periodic_permutation_check(cat, power_partner(cat, 2), 2);
    CHECK(rep.residual < 1e-12);
    REQUIRE(rep.points.size() == 5);
    CHECK(rep.bijective);
    CHECK(rep.all_similar());
    // oracle: the 5 points with denominator 5 are all fixed by A^2, so the
    // induced permutation is the identity
    for (size_t i = 0; i < rep.points.size(); ++i) {
        CHECK(rep.permutation[i] == int(i));
        CHECK(rep.manifold_ok[i]);
    }
}

TEST_CASE("periodic permutation check: grad4 with the coordinate swap") {
    auto g4 = build_system("grad4");
    auto sw = swap_partner(g4.space);
    auto rep = periodic_permutation_check(g4, sw, 1);
    REQUIRE(rep.points.size() == 16);
    CHECK(rep.bijective);
    CHECK(rep.all_similar());
    // oracle: the permutation must send (x, y) to (y, x)
    for (size_t i = 0; i < rep.points.size(); ++i) {
        Vec2 p = as_2d(rep.points[i].point);
        Vec2 q = as_2d(rep.points[size_t(rep.permutation[i])].point);
        CHECK(circle_dist(q.x, p.y) < 1e-9);
        CHECK(circle_dist(q.y, p.x) < 1e-9);
        bool diagonal = circle_dist(p.x, p.y) < 1e-9;
        if (diagonal) CHECK(rep.permutation[i] == int(i));
        else CHECK(rep.permutation[i] != int(i));
    }

    auto id = identity_partner(g4.space);
    auto rid = periodic_permutation_check(g4, id, 1);
    for (size_t i = 0; i < rid.points.size(); ++i) CHECK(rid.permutation[i] == int(i));

    auto cat = build_system("cat");
    PartnerMap shear{"shear", cat.space, [](const Point& q) -> std::optional<Point> {
                         Vec2 v = as_2d(q);
                         return Point(Vec2{wrap01(v.x + v.y), v.y});
                     }};
    CHECK_THROWS_AS(periodic_permutation_check(cat, shear, 1), std::invalid_argument);
}

TEST_CASE("power partners induce the f^k action on periodic points") {
    auto cat = build_system("cat");
    auto g3 = power_partner(cat, 3);
    auto rep = periodic_permutation_check(cat, g3, 2);
    REQUIRE(rep.bijective);
    CHECK(rep.all_similar());
    for (size_t i = 0; i < rep.points.size(); ++i) {
        Point expected = apply_n(cat, rep.points[i].point, 3);
        CHECK(cat.space.distance(rep.points[size_t(rep.permutation[i])].point, expected) < 1e-9);
    }

    auto ns = build_system("north_south");
    auto rep2 = periodic_permutation_check(ns, power_partner(ns, 2), 1);
    REQUIRE(rep2.bijective);
    CHECK(rep2.all_similar());
    for (size_t i = 0; i < rep2.points.size(); ++i) CHECK(rep2.permutation[i] == int(i));
}

TEST_CASE("nonresonance check") {
    auto r1 = nonresonance_check({0.5, 0.25});
    CHECK_FALSE(r1.nonresonant);
    REQUIRE(!r1.witnesses.empty());
    CHECK(r1.witnesses[0].i == 1);
    CHECK(r1.witnesses[0].powers == std::vector<int>{2, 0});

    auto r2 = nonresonance_check({0.5, 1.0 / 3.0});
    CHECK(r2.nonresonant);
    CHECK(r2.search_complete);
    CHECK(r2.min_gap > 0.0);

    // area-preserving saddle: lambda1 * lambda2 = 1 forces resonances like
    // lambda2 = lambda1^1 lambda2^2 (the paper's definition quantifies over
    // all tuples with sum >= 2)
    double l1 = (3.0 - std::sqrt(5.0)) / 2.0, l2 = (3.0 + std::sqrt(5.0)) / 2.0;
    auto r3 = nonresonance_check({l1, l2});
    CHECK_FALSE(r3.nonresonant);
    bool found_12 = false;
    for (const auto& w : r3.witnesses)
        found_12 = found_12 || (w.i == 1 && w.powers == std::vector<int>{1, 2});
    CHECK(found_12);
    CHECK_FALSE(r3.search_complete);  // mixed signs: truncated search

    // verdict invariant under eigenvalue reordering
    auto ra = nonresonance_check({0.5, 1.0 / 3.0});
    auto rb = nonresonance_check({1.0 / 3.0, 0.5});
    CHECK(ra.nonresonant == rb.nonresonant);
    auto rc = nonresonance_check({0.25, 0.5});
    CHECK_FALSE(rc.nonresonant);

    CHECK_THROWS_AS(nonresonance_check({1.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(nonresonance_check({0.0, 0.5}), std::invalid_argument);

    auto dup = nonresonance_check({0.5, 0.5});
    CHECK_FALSE(dup.nonresonant);
    CHECK_FALSE(dup.eigenvalues_distinct);
}

TEST_CASE("koenigs linearization") {
    Contraction1D linear{[](double x) { return 0.5 * x; }, 0.5};
    for (double x : {-0.2, -0.05, 0.08, 0.3})
        CHECK(koenigs_linearize(linear, x, 1e-14).phi == Approx(x));

    Contraction1D quad{[](double x) { return x / 2 + x * x / 4; }, 0.5};
    for (double x = -0.1; x <= 0.10001; x += 0.02)
        CHECK(koenigs_conjugacy_residual(quad, x, 1e-12) < 1e-10);

    // inverse via Newton
    double y = koenigs_linearize(quad, 0.07, 1e-12).phi;
    CHECK(koenigs_inverse(quad, y, 1e-12) == Approx(0.07).margin(1e-9));

    // north_south sink in the local coordinate u = x - 1/2, where the map
    // restricts to u -> u - 0.1 sin(2 pi u)
    auto ns = build_system("north_south");
    Contraction1D sink{[](double u) { return u - 0.1 * sin2pi(u); },
                       std::get<double>(*ns.derivative(Point(0.5)))};
    CHECK(std::abs(sink.a - (1.0 - 0.2 * M_PI)) < 1e-12);
    for (double u = -0.05; u <= 0.0501; u += 0.01)
        CHECK(koenigs_conjugacy_residual(sink, u, 1e-12) < 1e-8);

    // residual scales with tol on the catalog sink, within the stated
    // 10*tol conjugacy contract
    double r6 = 0, r8 = 0, r10 = 0;
    for (double u = -0.05; u <= 0.0501; u += 0.01) {
        r6 = std::max(r6, koenigs_conjugacy_residual(sink, u, 1e-6));
        r8 = std::max(r8, koenigs_conjugacy_residual(sink, u, 1e-8));
        r10 = std::max(r10, koenigs_conjugacy_residual(sink, u, 1e-10));
    }
    CHECK(r6 < 10 * 1e-6);
    CHECK(r8 < 10 * 1e-8);
    CHECK(r10 < 10 * 1e-10);
    CHECK(r8 <= r6 + 1e-12);
    CHECK(r10 <= r8 + 1e-12);

    Contraction1D expanding{[](double x) { return 2 * x; }, 2.0};
    CHECK_THROWS_AS(koenigs_linearize(expanding, 0.1, 1e-10), std::invalid_argument);
}

TEST_CASE("linearity test") {
    std::vector<double> grid;
    for (int i = -10; i <= 10; ++i)
        if (i) grid.push_back(0.01 * i);

    auto r1 = linearity_test([](double x) { return 3 * x; }, 0.5, grid, 1e-9);
    CHECK(r1.status == LinearityResult::Status::linear);
    CHECK(r1.slope == Approx(3.0));

    auto r2 = linearity_test([](double x) { return x + x * x * x; }, 0.5, grid, 1e-9);
    CHECK(r2.status == LinearityResult::Status::hypothesis_failed);

    // Koenigs-conjugated sink map is the linear multiplier
    auto ns = build_system("north_south");
    Contraction1D sink{[](double u) { return u - 0.1 * sin2pi(u); },
                       std::get<double>(*ns.derivative(Point(0.5)))};
    auto conj = [&](double v) {
        double u = koenigs_inverse(sink, v, 1e-13);
        return koenigs_linearize(sink, sink.eval(u), 1e-13).phi;
    };
    std::vector<double> small_grid;
    for (int i = -8; i <= 8; ++i)
        if (i) small_grid.push_back(0.004 * i);
    auto r3 = linearity_test(conj, sink.a, small_grid, 1e-7);
    CHECK(r3.status == LinearityResult::Status::linear);
    CHECK(r3.slope == Approx(sink.a).epsilon(1e-5));
}

TEST_CASE("theta embedding and the group algebra") {
    auto t1 = theta_embed({0.5, 3.0}, {0.5, 3.0});
    CHECK(t1.z.theta[0] == Approx(1.0));
    CHECK(t1.z.theta[1] == Approx(1.0));
    CHECK(t1.klass == "identity");

    auto t2 = theta_embed({0.25, 9.0}, {0.5, 3.0});
    CHECK(t2.z.theta[0] == Approx(2.0));
    CHECK(t2.z.theta[1] == Approx(2.0));
    CHECK(std::abs(t2.chi[0]) < 1e-12);
    CHECK(std::abs(t2.chi[1]) < 1e-12);
    CHECK(t2.in_Z1);

    auto t3 = theta_embed({0.25, 3.0}, {0.5, 3.0});
    CHECK(t3.z.theta[0] == Approx(2.0));
    CHECK(t3.z.theta[1] == Approx(1.0));
    CHECK(t3.chi[0] == Approx(0.5));
    CHECK(t3.chi[1] == Approx(-0.5));
    CHECK(t3.klass == "Z0minusZ1");

    // Theta_B is a homomorphism: componentwise products map to sums/products
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> mag(0.1, 5.0);
    std::array<double, 2> base{0.5, 3.0};
    for (int t = 0; t < 100; ++t) {
        auto pick = [&]() {
            double v = mag(rng);
            if (rng() % 2) v = -v;
            return v;
        };
        std::array<double, 2> mu{pick(), pick()};
        std::array<double, 2> nu{pick(), pick()};
        auto a = theta_embed(mu, base), b = theta_embed(nu, base);
        auto ab = theta_embed({mu[0] * nu[0], mu[1] * nu[1]}, base);
        auto sum = a.z.compose(b.z);
        CHECK(ab.z.theta[0] == Approx(sum.theta[0]).margin(1e-9));
        CHECK(ab.z.theta[1] == Approx(sum.theta[1]).margin(1e-9));
        CHECK(ab.z.signs == sum.signs);
        // chi lands in the hyperplane theta'_1 + theta'_2 = 0
        CHECK(ab.chi[0] + ab.chi[1] == Approx(0.0).margin(1e-12));
    }

    CHECK_THROWS_AS(theta_embed({0.5, 2.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(theta_embed({0.0, 2.0}, {0.5, 2.0}), std::invalid_argument);
}
