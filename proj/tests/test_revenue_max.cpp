#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "refp/revenue_max.hpp"
#include "support.hpp"

using namespace refp;

TEST_CASE("reserve search on the one-good fixture") {
    Market m = support::ex_one_good();
    OrderingPolicy greedy_util{};
    RevenueMaxResult result = refp_revenue_max(m, greedy_util);
    // greedy picks c1; candidates {0, 5}; r=5 empties the market
    CHECK(result.reserve == 0.0);
    CHECK(result.revenue == Catch::Approx(5.0));
    CHECK(winners(m, result.outcome.allocation) == std::vector<int>{0});
}

TEST_CASE("single bidder single good") {
    Market m;
    m.goods = {{0, 1}};
    m.bidders = {{0, 1, 10.0, {0}}};
    RevenueMaxResult result = refp_revenue_max(m, Objective::Utilitarian);
    CHECK(result.revenue == Catch::Approx(10.0));
    CHECK(result.reserve == 0.0);  // both candidates give 10; tie toward smaller r
}

TEST_CASE("reserve search never loses to the plain pipeline") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 400; ++trial) {
        Market m = support::random_market(rng);
        Outcome plain = refp_pipeline(m);
        RevenueMaxResult result = refp_revenue_max(m, OrderingPolicy{});
        CHECK(result.revenue >= revenue(m, plain) - 1e-9);
    }
}

TEST_CASE("revenue bounded by optimal welfare, outputs restricted envy-free") {
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 400; ++trial) {
        Market m = support::random_market(rng);
        for (AllocatorChoice choice :
             {AllocatorChoice{OrderingPolicy{}}, AllocatorChoice{Objective::Utilitarian}}) {
            RevenueMaxResult result = refp_revenue_max(m, choice);
            double opt = welfare(m, optimal_allocate(m, Objective::Utilitarian));
            CHECK(result.revenue <= opt + 1e-9);
            CHECK(is_feasible(m, result.outcome.allocation));
            CHECK(is_restricted_envy_free(m, result.outcome));
            CHECK(support::oracle_restricted_envy_free(m, result.outcome));
            for (double p : result.outcome.pricing.p) CHECK(p >= result.reserve - 1e-7);
            CHECK(result.revenue ==
                  Catch::Approx(revenue(m, result.outcome)).margin(1e-9));
        }
    }
}
