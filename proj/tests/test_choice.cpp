#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "netecon/choice.hpp"
#include "netecon/core.hpp"

using namespace netecon;

namespace {

Market fig4_market() {
    return Market({{0.0, 1.0, 1.0, false},
                   {0.0, 3.0, 1.0, false},
                   {0.0, 5.0, 1.0, false},
                   {0.0, 7.0, 1.0, false}});
}

}  // namespace

TEST_CASE("throughput examples") {
    CHECK(throughput({10.0, 1.0, 0.0}, 0.0) == doctest::Approx(10.0));
    CHECK(throughput({6.0, 0.1, 0.0}, kInfiniteQuality) == 0.0);
    CHECK(throughput({10.0, 1.0, 0.0}, 1.0) == doctest::Approx(3.6788).epsilon(1e-4));
    CHECK_THROWS(throughput({1.0, 1.0, 0.0}, -0.5));
}

TEST_CASE("utility examples") {
    CHECK(utility({2.0, 0.7, 0.4}, 0.4, 3.0) == 0.0);  // zero margin
    CHECK(utility({1.0, 1.0, 1.0}, 0.7, 1.0) == doctest::Approx(0.1104).epsilon(1e-3));
    CHECK(utility({1.0, 1.0, 1.0}, 0.0, kInfiniteQuality) == 0.0);  // dummy
    CHECK(utility({1.0, 0.0, 0.5}, 0.9, 1.0) < 0.0);  // price above value
    CHECK_THROWS(utility({1.0, 1.0, 1.0}, kInfiniteQuality, 1.0));
}

TEST_CASE("best_tp on the four-tier menu") {
    const Market m = fig4_market();
    const std::vector<double> prices = {0.7, 0.4, 0.25, 0.1, 0.0};
    SUBCASE("(beta=1, v=1) picks the q=1 segment") {
        CHECK(best_tp({1.0, 1.0, 1.0}, prices, m) == 0);
    }
    SUBCASE("AP priced out of every segment lands on the dummy") {
        CHECK(best_tp({1.0, 0.5, 0.05}, prices, m) == m.dummy_index());
    }
    SUBCASE("price list must align with the market") {
        const std::vector<double> wrong = {0.7, 0.4};
        CHECK_THROWS(best_tp({1.0, 1.0, 1.0}, wrong, m));
    }
}

TEST_CASE("raising one price never attracts new APs to that segment") {
    // share monotonicity, checked over randomized menus and populations
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int iter = 0; iter < 300; ++iter) {
        Market m({{0.0, 0.2 + u01(rng), 1.0, false}, {0.0, 2.0 + u01(rng), 1.0, false}});
        std::vector<APType> types;
        for (int i = 0; i < 6; ++i)
            types.push_back({0.1 + u01(rng), 2.0 * u01(rng), 0.1 + u01(rng)});
        APPopulation pop(std::move(types));
        std::vector<double> prices = {u01(rng), u01(rng), 0.0};
        const std::size_t target = iter % 2;
        const auto before = partition(pop, prices, m);
        prices[target] += 0.05 + 0.5 * u01(rng);
        const auto after = partition(pop, prices, m);
        for (std::size_t ap : after.shares[target]) {
            bool was_there = false;
            for (std::size_t old : before.shares[target]) was_there |= old == ap;
            CHECK(was_there);
        }
    }
}

TEST_CASE("indifference_price") {
    CHECK(indifference_price({1.0, 0.5, 1.0}, 0.3, 0.0) == doctest::Approx(0.7));
    CHECK(indifference_price({1.0, 2.0, 0.35}, 0.0, 4.0) == doctest::Approx(0.35));
    SUBCASE("round-trips through utility") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u01(0.01, 1.0);
        for (int i = 0; i < 100; ++i) {
            APType ap{0.5 + u01(rng), 2.0 * u01(rng), u01(rng)};
            const double U = 0.2 * u01(rng);
            const double q = 3.0 * u01(rng);
            const double p = indifference_price(ap, U, q);
            CHECK(utility(ap, p, q) / ap.alpha == doctest::Approx(U).epsilon(1e-12));
        }
    }
    CHECK_THROWS(indifference_price({1.0, 1.0, 1.0}, -0.1, 1.0));
    CHECK_THROWS(indifference_price({1.0, 1.0, 1.0}, 0.1, kInfiniteQuality));
}

TEST_CASE("partition covers every AP exactly once") {
    const Market m = fig4_market();
    const std::vector<double> prices = {0.7, 0.4, 0.25, 0.1, 0.0};
    const auto pop = build_population(DiscreteDistribution::uniform(),
                                      DiscreteDistribution::uniform(), 20, 1.0);
    const auto a = partition(pop, prices, m);
    REQUIRE(a.choice.size() == pop.size());
    std::size_t covered = 0;
    for (const auto& share : a.shares) covered += share.size();
    CHECK(covered == pop.size());
    for (std::size_t seg = 0; seg < a.shares.size(); ++seg)
        for (std::size_t ap : a.shares[seg]) CHECK(a.choice[ap] == seg);
}

TEST_CASE("four-tier menu shares form quality-monotone bands in beta") {
    // under the convex menu (p_2 = 0.4), each AP's preference is single
    // peaked and choices are contiguous along the beta axis at fixed v
    const Market m = fig4_market();
    const std::vector<double> prices = {0.7, 0.4, 0.25, 0.1, 0.0};
    const int levels = 50;
    const auto pop = build_population(DiscreteDistribution::uniform(),
                                      DiscreteDistribution::uniform(), levels, 1.0);
    const auto a = partition(pop, prices, m);
    // population grid order: beta-major, v-minor (see build_population)
    for (int mth = 0; mth < levels; ++mth) {
        double last_q = kInfiniteQuality;
        for (int k = 0; k < levels; ++k) {
            const std::size_t i = static_cast<std::size_t>(k) * levels + mth;
            const double q = m[a.choice[i]].q;
            CHECK(q <= last_q);  // higher beta chooses better-or-equal quality
            last_q = q;
        }
    }
}

TEST_CASE("single-peak preference under a convex menu") {
    const Market m = fig4_market();
    SUBCASE("p2 = 0.4 (convex): no interior valley in any AP's utility") {
        const std::vector<double> prices = {0.7, 0.4, 0.25, 0.1, 0.0};
        const auto pop = build_population(DiscreteDistribution::uniform(),
                                          DiscreteDistribution::uniform(), 30, 1.0);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            std::vector<double> u;
            for (std::size_t j = 0; j + 1 < m.size(); ++j)
                u.push_back(utility(pop[i], prices[j], m[j].q));
            bool descended = false, valley = false;
            for (std::size_t j = 1; j < u.size(); ++j) {
                if (u[j] < u[j - 1] - 1e-15) descended = true;
                else if (u[j] > u[j - 1] + 1e-15 && descended) valley = true;
            }
            CHECK(!valley);
        }
    }
    SUBCASE("p2 = 0.3 (non-convex): some AP prefers both neighbors over TP 3") {
        const std::vector<double> prices = {0.7, 0.3, 0.25, 0.1, 0.0};
        const auto pop = build_population(DiscreteDistribution::uniform(),
                                          DiscreteDistribution::uniform(), 50, 1.0);
        bool found = false;
        for (std::size_t i = 0; i < pop.size() && !found; ++i) {
            const double u2 = utility(pop[i], prices[1], m[1].q);
            const double u3 = utility(pop[i], prices[2], m[2].q);
            const double u4 = utility(pop[i], prices[3], m[3].q);
            found = u2 > u3 && u4 > u3;
        }
        CHECK(found);
    }
}
