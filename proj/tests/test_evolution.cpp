#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "netecon/evolution.hpp"

using namespace netecon;

TEST_CASE("convert_price") {
    CHECK(convert_price(1.0) == doctest::Approx(0.3858).epsilon(2e-3));
    CHECK(convert_price(0.0) == 0.0);
    CHECK(convert_price(5.67) == doctest::Approx(2.19).epsilon(5e-3));
    CHECK_THROWS(convert_price(-1.0));
}

TEST_CASE("build_year reproduces the calibrated capacities and demand") {
    const Scenario s;
    SUBCASE("anchor year effective capacities") {
        auto [market, pop] = build_year(s, 2011);
        CHECK(market[0].mu == doctest::Approx(0.3 * 14.0));
        CHECK(market[1].mu == doctest::Approx(0.9 * 7.0));
        CHECK(market[0].q == 0.01);
        CHECK(market[1].q == 1.0);
    }
    SUBCASE("backcast raw capacity") {
        auto [market, pop] = build_year(s, 2007);
        const double nu_a_2007 = 14.0 / std::pow(1.5, 4);
        CHECK(nu_a_2007 == doctest::Approx(2.765).epsilon(1e-3));
        CHECK(market[0].mu == doctest::Approx(0.3 * nu_a_2007).epsilon(1e-12));
    }
    SUBCASE("total demand grows at r_alpha") {
        auto [market, pop] = build_year(s, 2011);
        CHECK(pop.total_alpha() == doctest::Approx(10.0 * std::pow(1.22, 4)));
        CHECK(10.0 * std::pow(1.22, 4) == doctest::Approx(22.15).epsilon(1e-3));
    }
    SUBCASE("class weights conserve the total") {
        for (int year = 2007; year <= 2014; ++year) {
            auto [market, pop] = build_year(s, year);
            double a = 0.0, b = 0.0, c = 0.0;
            for (const auto& t : pop.types()) {
                if (t.beta == 10.0) a += t.alpha;
                else if (t.beta == 1.0) b += t.alpha;
                else c += t.alpha;
            }
            const double alpha = 10.0 * std::pow(1.22, year - 2007);
            CHECK(a + b + c == doctest::Approx(alpha).epsilon(1e-12));
            CHECK(a > 0.0);
        }
    }
    SUBCASE("video class weight share rises over time") {
        auto early = build_year(s, 2007);
        auto late = build_year(s, 2014);
        auto share_a = [&](const APPopulation& pop) {
            double a = 0.0;
            for (const auto& t : pop.types())
                if (t.beta == 10.0) a += t.alpha;
            return a / pop.total_alpha();
        };
        CHECK(share_a(late.second) > share_a(early.second));
    }
}

TEST_CASE("projection basics on the benchmark scenario") {
    const Scenario s;
    const auto proj = project(s);
    REQUIRE(proj.size() == 8);
    for (const auto& st : proj) {
        REQUIRE(st.ok);
        CHECK(st.p_A >= st.p_B);  // better quality never prices lower
        CHECK(st.p_A >= 0.0);
    }
    CHECK(proj.front().year == 2007);
    CHECK(proj.back().year == 2014);
    SUBCASE("anchor year hits the calibration targets") {
        const auto& st = proj[4];
        REQUIRE(st.year == 2011);
        CHECK(st.p_B < 2.0);
        CHECK(std::abs(st.p_A - 5.67) / 5.67 < 0.15);
    }
    SUBCASE("mean annual drops") {
        const double cdn = mean_annual_drop(proj, 2007, 2011, 0);
        CHECK(cdn > 0.0);
        CHECK(cdn < 0.2);
        CHECK_THROWS(mean_annual_drop(proj, 2011, 2011, 0));
    }
}

TEST_CASE("stationary scenario keeps prices constant") {
    Scenario s;
    s.r_nu = 1.0;
    s.r_alpha = 1.0;
    s.weight_growth = {1.0, 1.0, 1.0};
    const auto proj = project(s);
    for (std::size_t i = 1; i < proj.size(); ++i) {
        REQUIRE(proj[i].ok);
        CHECK(proj[i].p_A == proj[0].p_A);
        CHECK(proj[i].p_B == proj[0].p_B);
    }
}

TEST_CASE("sensitivity applies the knob to the right field") {
    Scenario s;
    s.end_year = 2011;  // shorter horizon keeps the test quick
    const auto fam = sensitivity(s, SensitivityKnob::EtaB, {0.8, 0.9, 1.0});
    REQUIRE(fam.projections.size() == 3);
    // more transit capacity -> weakly lower transit price, year by year
    for (std::size_t y = 0; y < fam.projections[0].size(); ++y) {
        CHECK(fam.projections[1][y].p_B <= fam.projections[0][y].p_B);
        CHECK(fam.projections[2][y].p_B <= fam.projections[1][y].p_B);
        CHECK(fam.projections[0][y].mu_A == fam.projections[2][y].mu_A);
    }
}

TEST_CASE("growth decision sweeps the capacity growth multiplier") {
    Scenario s;
    s.end_year = 2012;
    const auto fam = decision_growth(s, {1.4, 1.6});
    REQUIRE(fam.projections.size() == 2);
    // at the anchor year the capacity paths coincide by construction
    CHECK(fam.projections[0][4].mu_A == doctest::Approx(fam.projections[1][4].mu_A));
    // before the anchor, faster growth means a smaller backcast capacity
    CHECK(fam.projections[1][0].mu_A < fam.projections[0][0].mu_A);
}

TEST_CASE("ratio decision preserves the total capacity path") {
    Scenario s;
    const auto base = project(s);
    const auto fam = decision_ratio(s, {{3.0, 1.0}, {3.0, 2.0}});
    for (const auto& proj : fam.projections) {
        for (std::size_t y = 0; y < proj.size(); ++y) {
            const double total = proj[y].mu_A / s.eta[0] + proj[y].mu_B / s.eta[1];
            const double base_total = base[y].mu_A / s.eta[0] + base[y].mu_B / s.eta[1];
            CHECK(total == doctest::Approx(base_total).epsilon(1e-9));
        }
        // horizon year hits the requested split
        const auto& last = proj.back();
        const double share_a =
            (last.mu_A / s.eta[0]) / (last.mu_A / s.eta[0] + last.mu_B / s.eta[1]);
        CHECK((std::abs(share_a - 0.75) < 1e-9 || std::abs(share_a - 0.6) < 1e-9));
    }
    CHECK_THROWS(decision_ratio(s, {{-1.0, 1.0}}));
}

TEST_CASE("scenario validation") {
    Scenario s;
    s.end_year = 2000;
    CHECK_THROWS(s.validate());
    s = Scenario{};
    s.eta = {0.0, 0.9};
    CHECK_THROWS(s.validate());
    s = Scenario{};
    s.qualities = {1.0, 0.01};
    CHECK_THROWS(s.validate());
    s = Scenario{};
    s.r_nu = -1.0;
    CHECK_THROWS(s.validate());
}
