#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <ripot/profile.hpp>

using Catch::Approx;
using namespace ripot;

TEST_CASE("step profile point values and integrals") {
    // f = 3 on [0,1), 1 on [1,2.5), 0 beyond; domain (0,4)
    Profile f({1.0, 2.5}, {3.0, 1.0}, 4.0);

    CHECK(f.value(0.5) == 3.0);
    CHECK(f.value(1.0) == 1.0);
    CHECK(f.value(2.4) == 1.0);
    CHECK(f.value(2.5) == 0.0);
    CHECK(f.sup() == 3.0);

    CHECK(f.integral_to(0.5) == Approx(1.5));
    CHECK(f.integral_to(1.0) == Approx(3.0));
    CHECK(f.integral_to(2.0) == Approx(4.0));
    CHECK(f.integral() == Approx(4.5));
    CHECK(f.double_star(2.0) == Approx(2.0));
    CHECK(f.double_star(4.0) == Approx(4.5 / 4.0));
}

TEST_CASE("step profile distribution and truncation excess") {
    Profile f({1.0, 2.5}, {3.0, 1.0}, 4.0);

    CHECK(f.distribution(0.0) == Approx(2.5));
    CHECK(f.distribution(0.5) == Approx(2.5));
    CHECK(f.distribution(1.0) == Approx(1.0));
    CHECK(f.distribution(2.0) == Approx(1.0));
    CHECK(f.distribution(3.0) == 0.0);

    CHECK(f.excess(0.0) == Approx(4.5));
    CHECK(f.excess(1.0) == Approx(2.0));  // only the top step sticks out
    CHECK(f.excess(2.0) == Approx(1.0));
    CHECK(f.excess(5.0) == 0.0);
}

TEST_CASE("head profile: exact calculus on s^-1 log(1/s)^-g") {
    const double g = 2.5;
    const double cut = std::exp(-3.0);
    PowerLogHead head{1.0, -1.0, -g, cut};
    REQUIRE(head.non_increasing());

    Profile f = Profile::pure_head(head, 1.0);
    CHECK(std::isinf(f.sup()));

    // integral_to(s) = log(1/s)^{1-g}/(g-1) for s <= cut
    for (double s : {1e-8, 1e-5, 1e-3, cut}) {
        CHECK(f.integral_to(s) ==
              Approx(std::pow(std::log(1.0 / s), 1.0 - g) / (g - 1.0)).epsilon(1e-12));
    }
    // constant beyond the support
    CHECK(f.integral_to(0.9) == Approx(f.integral_to(cut)).epsilon(1e-14));
    CHECK(f.integral() == Approx(std::pow(3.0, 1.0 - g) / (g - 1.0)).epsilon(1e-12));

    // the level set boundary returned by distribution solves f = lambda
    for (double lam : {1e2, 1e4, 1e7}) {
        const double d = f.distribution(lam);
        REQUIRE(d > 0.0);
        REQUIRE(d < cut);
        CHECK(f.value(d) == Approx(lam).epsilon(1e-9));
    }

    // excess cross-checked against direct quadrature of (f - lambda)_+
    const double lam = 50.0;
    const double d = f.distribution(lam);
    const double direct =
        adaptive_integrate([&](double s) { return f.value(s) - lam; }, 1e-14, d, 1e-12) +
        f.integral_to(1e-14);
    CHECK(f.excess(lam) == Approx(direct).epsilon(1e-8));
}

TEST_CASE("head profile combined with steps") {
    const double cut = std::exp(-2.0);
    PowerLogHead head{2.0, -0.5, 0.0, cut}; // 2 s^{-1/2}
    Profile f({0.5, 1.0}, {2.0 * std::pow(cut, -0.5), 1.0}, 1.0, head);

    CHECK(f.value(cut / 2) == Approx(2.0 * std::pow(cut / 2, -0.5)));
    CHECK(f.value(0.75) == 1.0);
    // head mass: int_0^cut 2 s^{-1/2} ds = 4 sqrt(cut)
    CHECK(f.integral_to(cut) == Approx(4.0 * std::sqrt(cut)).epsilon(1e-13));
    const double v1 = 2.0 * std::pow(cut, -0.5);
    CHECK(f.integral() == Approx(4.0 * std::sqrt(cut) + v1 * (0.5 - cut) + 0.5).epsilon(1e-13));
}

TEST_CASE("profile validation rejects malformed input") {
    CHECK_THROWS(Profile({1.0, 0.5}, {2.0, 1.0}, 2.0));          // edges not increasing
    CHECK_THROWS(Profile({0.5, 1.0}, {1.0, 2.0}, 2.0));          // values increasing
    CHECK_THROWS(Profile({0.5}, {-1.0}, 2.0));                   // negative value
    CHECK_THROWS(Profile({0.5}, {1.0}, 0.4));                    // breakpoint past domain end
    PowerLogHead weak{0.1, 0.0, 0.0, 0.25};                      // constant 0.1 head
    CHECK_THROWS(Profile({0.5}, {1.0}, 1.0, weak));              // head below first step
    PowerLogHead rising{1.0, 0.5, 0.0, 0.25};                    // s^{1/2} grows
    CHECK_THROWS(Profile::pure_head(rising, 1.0));
}

TEST_CASE("scaling is exactly homogeneous") {
    Profile f({0.25, 1.0, 2.0}, {4.0, 2.0, 0.5}, 3.0);
    Profile g = f.scaled(2.5);
    CHECK(g.integral() == Approx(2.5 * f.integral()).epsilon(1e-15));
    CHECK(g.value(0.3) == Approx(2.5 * f.value(0.3)).epsilon(1e-15));
    CHECK(g.double_star(1.7) == Approx(2.5 * f.double_star(1.7)).epsilon(1e-15));
}

TEST_CASE("distinct step values come out descending") {
    Profile f({0.5, 1.0, 1.5, 2.0}, {3.0, 3.0, 1.0, 0.5}, 2.0);
    const auto v = f.distinct_values();
    REQUIRE(v.size() == 3);
    CHECK(v[0] == 3.0);
    CHECK(v[1] == 1.0);
    CHECK(v[2] == 0.5);
}
