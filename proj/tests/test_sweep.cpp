#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "netecon/sweep.hpp"

using namespace netecon;

namespace {

SystemSpec small_three_tier() {
    SystemSpec spec;
    spec.qualities = {0.2, 1.0, 5.0};
    spec.sigma = {1.0, 3.0, 5.0};
    spec.rho = 0.5;
    spec.f_beta = DiscreteDistribution::geometric();
    spec.f_v = DiscreteDistribution::binomial(0.5);
    spec.levels = 20;  // coarse grid keeps the unit test fast
    spec.grid_step = 0.005;
    return spec;
}

}  // namespace

TEST_CASE("build_system wires capacities from shares and rho") {
    const auto sys = build_system(small_three_tier());
    REQUIRE(sys.market.non_dummy_count() == 3);
    CHECK(sys.market.total_mu() == doctest::Approx(0.5));
    CHECK(sys.market[0].mu == doctest::Approx(0.5 / 9.0));
    CHECK(sys.market[2].mu == doctest::Approx(2.5 / 9.0));
    CHECK(sys.population.size() == 400);
    CHECK(sys.population.total_alpha() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_system accepts direct capacities") {
    SystemSpec spec = small_three_tier();
    spec.sigma.clear();
    spec.mu = {0.05, 0.5, 0.25};
    const auto sys = build_system(spec);
    CHECK(sys.market[1].mu == doctest::Approx(0.5));
}

TEST_CASE("build_system validation") {
    SystemSpec bad = small_three_tier();
    bad.sigma = {1.0, 2.0};
    CHECK_THROWS(build_system(bad));
    bad = small_three_tier();
    bad.qualities.clear();
    CHECK_THROWS(build_system(bad));
}

TEST_CASE("sweep points must be strictly monotone and non-empty") {
    SweepSpec spec;
    spec.base = small_three_tier();
    spec.axis = SweepAxis::Rho;
    spec.points = {};
    CHECK_THROWS(run_sweep(spec));
    spec.points = {0.3, 0.3};
    CHECK_THROWS(run_sweep(spec));
    spec.points = {0.3, 0.5, 0.4};
    CHECK_THROWS(run_sweep(spec));
}

TEST_CASE("prices are componentwise non-increasing along a rho sweep") {
    SweepSpec spec;
    spec.base = small_three_tier();
    spec.axis = SweepAxis::Rho;
    spec.points = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const auto table = run_sweep(spec);
    REQUIRE(table.rows.size() == spec.points.size());
    REQUIRE(table.segment_names == std::vector<std::string>{"p_A", "p_B", "p_C"});
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        REQUIRE(table.rows[r].ok);
        for (std::size_t s = 0; s < 3; ++s)
            CHECK(table.rows[r].prices[s] <=
                  table.rows[r - 1].prices[s] + spec.base.grid_step + 1e-12);
    }
}

TEST_CASE("prices are non-increasing along a capacity sweep of one segment") {
    SweepSpec spec;
    spec.base = small_three_tier();
    spec.base.sigma.clear();
    spec.base.mu = {0.05, 0.1, 0.25};
    spec.axis = SweepAxis::MuSegment;
    spec.mu_index = 1;
    spec.points = {0.05, 0.15, 0.3, 0.5, 0.8};
    const auto table = run_sweep(spec);
    for (std::size_t r = 1; r < table.rows.size(); ++r)
        for (std::size_t s = 0; s < 3; ++s)
            CHECK(table.rows[r].prices[s] <=
                  table.rows[r - 1].prices[s] + spec.base.grid_step + 1e-12);
}

TEST_CASE("binomial-parameter axis replaces the sensitivity distribution") {
    SweepSpec spec;
    spec.base = small_three_tier();
    spec.axis = SweepAxis::FBetaBinomialP;
    spec.points = {0.2, 0.5, 0.8};
    const auto table = run_sweep(spec);
    REQUIRE(table.rows.size() == 3);
    for (const auto& row : table.rows) CHECK(row.ok);
}

TEST_CASE("partition sweep: raising one menu price shrinks its share") {
    PartitionSweepSpec spec;
    spec.qualities = {1.0, 3.0, 5.0, 7.0};
    spec.prices = {0.7, 0.4, 0.25, 0.1};
    spec.axis = PartitionAxis::MenuPrice;
    spec.price_index = 1;
    spec.points = {0.3, 0.4, 0.5, 0.6};
    spec.levels = 30;
    const auto rasters = run_partition_sweep(spec);
    REQUIRE(rasters.size() == 4);
    std::size_t prev = static_cast<std::size_t>(-1);
    for (const auto& r : rasters) {
        std::size_t count = 0;
        for (int s : r.segment) count += s == 1;
        CHECK(count <= prev);
        prev = count;
    }
}

TEST_CASE("partition sweep: degrading all qualities moves APs upmarket") {
    PartitionSweepSpec spec;
    spec.qualities = {1.0, 3.0, 5.0, 7.0};
    spec.prices = {0.7, 0.4, 0.25, 0.1};
    spec.axis = PartitionAxis::QualityScale;
    spec.points = {0.2, 0.5, 2.0, 5.0};
    spec.levels = 30;
    const auto rasters = run_partition_sweep(spec);
    std::size_t prev = 0;
    for (const auto& r : rasters) {
        std::size_t best_share = 0;
        for (int s : r.segment) best_share += s == 0;
        CHECK(best_share >= prev);
        prev = best_share;
    }
}

TEST_CASE("single-segment menu puts every affordable AP in one share") {
    PartitionSweepSpec spec;
    spec.qualities = {1.0};
    spec.prices = {0.3};
    spec.axis = PartitionAxis::MenuPrice;
    spec.price_index = 0;
    spec.points = {0.3};
    spec.levels = 20;
    const auto rasters = run_partition_sweep(spec);
    REQUIRE(rasters.size() == 1);
    for (std::size_t i = 0; i < rasters[0].segment.size(); ++i) {
        if (rasters[0].v[i] > 0.3)
            CHECK(rasters[0].segment[i] == 0);
        else
            CHECK(rasters[0].segment[i] == -1);
    }
}
