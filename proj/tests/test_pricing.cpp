#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "refp/pricing.hpp"
#include "support.hpp"

using namespace refp;

namespace {

// Condition checks from the characterization of restricted envy-freeness:
// pairwise price relations induced by a bidder's holdings.
void check_price_conditions(const Market& m, const Allocation& a, const Pricing& p) {
    for (int j = 0; j < m.num_bidders(); ++j) {
        for (int i : m.bidders[j].edges) {
            for (int k : m.bidders[j].edges) {
                if (i == k) continue;
                int xi = a.at(i, j), xk = a.at(k, j);
                int ni = m.goods[i].supply, nk = m.goods[k].supply;
                if (xi > 0 && xi < ni && xk > 0 && xk < nk)
                    CHECK(p.p[i] == Catch::Approx(p.p[k]).margin(1e-6));
                if (xi == ni && xk > 0 && xk < nk) CHECK(p.p[i] <= p.p[k] + 1e-6);
                if (xi == 0 && xk > 0) CHECK(p.p[i] >= p.p[k] - 1e-6);
            }
        }
    }
}

}  // namespace

TEST_CASE("revenue LP on the two-good fixture") {
    Market m = support::ex_two_goods();
    Allocation b = support::alloc_of(m, {{2, 0}, {0, 2}});
    Pricing p = restricted_ef_lp(m, b);
    CHECK(p.p[0] == Catch::Approx(5.0));
    CHECK(p.p[1] == Catch::Approx(2.5));
    CHECK(revenue(m, {b, p}) == Catch::Approx(15.0));

    // independent check: vertex enumeration over the same constraint system
    LpProblem lp;
    lp.objective = {2.0, 2.0};
    lp.add_constraint({2.0, 0.0}, Relation::LessEq, 10.0);
    lp.add_constraint({0.0, 2.0}, Relation::LessEq, 5.0);
    lp.add_constraint({-1.0, 1.0}, Relation::LessEq, 0.0);
    auto oracle = support::oracle_lp_max(lp);
    REQUIRE(oracle.has_value());
    CHECK(*oracle == Catch::Approx(15.0));
}

TEST_CASE("revenue LP on the null allocation") {
    Market m = support::ex_two_goods();
    Pricing p = restricted_ef_lp(m, Allocation(2, 2));
    Outcome o{Allocation(2, 2), p};
    CHECK(revenue(m, o) == 0.0);
}

TEST_CASE("reserve can make a fixed allocation unpriceable") {
    Market m = support::ex_one_good();
    Allocation a = support::alloc_of(m, {{0, 2}});
    PricingOptions opts;
    opts.reserve = 4.0;  // 2 p >= 8 conflicts with IR 2 p <= 7
    CHECK_THROWS_AS(restricted_ef_lp(m, a, opts), InfeasibleAtReserve);
    opts.reserve = 3.0;
    CHECK_NOTHROW(restricted_ef_lp(m, a, opts));
}

TEST_CASE("LP outputs are restricted envy-free") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 1000; ++trial) {
        Market m = support::random_market(rng);
        Allocation a = greedy_allocate(m, {});
        Pricing p = restricted_ef_lp(m, a);
        Outcome o{a, p};
        CHECK(is_restricted_envy_free(m, o));
        CHECK(support::oracle_restricted_envy_free(m, o));
        check_price_conditions(m, a, p);
        for (double price : p.p) CHECK(price >= 0.0);
    }
}

TEST_CASE("sampled IR+compact prices pass, compact violations fail") {
    std::mt19937_64 rng(52);
    int passed = 0, violated = 0;
    for (int trial = 0; trial < 2000 && (passed < 50 || violated < 50); ++trial) {
        Market m = support::random_market(rng);
        Allocation a = optimal_allocate(m, Objective::Utilitarian);

        // rejection-sample a price vector against IR and compact directly
        std::uniform_real_distribution<double> price(0.0, 10.0);
        Pricing p;
        p.p.resize(m.num_goods());
        for (auto& v : p.p) v = price(rng);
        bool ir = true, compact = true;
        for (int j = 0; j < m.num_bidders(); ++j) {
            if (a.bundle_size(j) == 0) continue;
            if (bundle_price(m, {a, p}, j) > valuation(m, a, j) + 1e-9) ir = false;
            for (int i : m.bidders[j].edges)
                for (int k : m.bidders[j].edges)
                    if (a.at(i, j) > 0 && a.at(k, j) < m.goods[k].supply &&
                        p.p[i] > p.p[k] + 1e-9)
                        compact = false;
        }
        if (ir && compact) {
            CHECK(is_restricted_envy_free(m, {a, p}));
            ++passed;
        }
        if (!compact) {
            CHECK_FALSE(is_restricted_envy_free(m, {a, p}));
            ++violated;
        }
    }
    CHECK(passed >= 50);
    CHECK(violated >= 50);
}

TEST_CASE("raising the reserve shrinks feasibility monotonically") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> reserve(0.0, 8.0);
    for (int trial = 0; trial < 300; ++trial) {
        Market m = support::random_market(rng);
        Allocation a = greedy_allocate(m, {});
        double r1 = reserve(rng), r2 = reserve(rng);
        if (r1 > r2) std::swap(r1, r2);
        PricingOptions lo, hi;
        lo.reserve = r1;
        hi.reserve = r2;
        bool lo_ok = true, hi_ok = true;
        try {
            restricted_ef_lp(m, a, lo);
        } catch (const InfeasibleAtReserve&) {
            lo_ok = false;
        }
        try {
            restricted_ef_lp(m, a, hi);
        } catch (const InfeasibleAtReserve&) {
            hi_ok = false;
        }
        if (!lo_ok) CHECK_FALSE(hi_ok);
    }
}

TEST_CASE("pipeline on the fixtures") {
    Market two = support::ex_two_goods();
    Outcome o = refp_pipeline(two);
    CHECK(static_cast<int>(winners(two, o.allocation).size()) == 2);
    CHECK(revenue(two, o) == Catch::Approx(15.0));

    Market one = support::ex_one_good();
    Outcome p = refp_pipeline(one);
    CHECK(winners(one, p.allocation) == std::vector<int>{0});
    CHECK(p.pricing.p[0] == Catch::Approx(5.0));
    CHECK(revenue(one, p) == Catch::Approx(5.0));

    Market empty;
    Outcome e = refp_pipeline(empty);
    CHECK(e.pricing.p.empty());
}

TEST_CASE("WE existence on the unit-copy fixture") {
    Market m = support::ex_one_good_units();
    int checked = 0;
    support::for_each_all_or_none(m, [&](const Allocation& a) {
        CHECK_FALSE(check_we_existence(m, a));
        ++checked;
    });
    CHECK(checked >= 4);  // null, c1 on either copy, c2 on both
}

TEST_CASE("WE existence positive cases") {
    Market single;
    single.goods = {{0, 1}};
    single.bidders = {{0, 1, 5.0, {0}}};
    CHECK(check_we_existence(single, support::alloc_of(single, {{1}})));

    Market pair;
    pair.goods = {{0, 1}, {1, 1}};
    pair.bidders = {{0, 1, 3.0, {0}}, {1, 1, 4.0, {1}}};
    CHECK(check_we_existence(pair, support::alloc_of(pair, {{1, 0}, {0, 1}})));
}

TEST_CASE("WE existence preconditions") {
    CHECK_THROWS_AS(check_we_existence(support::ex_one_good(), Allocation(1, 2)),
                    std::invalid_argument);
}

TEST_CASE("single-minded pricing LP example") {
    // goods u1, u2; A wants both for 6, B wants u2 for 4
    Market m;
    m.goods = {{0, 1}, {1, 1}};
    m.bidders = {{0, 2, 6.0, {0, 1}}, {1, 1, 4.0, {1}}};
    REQUIRE(is_single_minded(m));
    Outcome o = smlp(m);
    CHECK(winners(m, o.allocation) == std::vector<int>{0});
    CHECK(o.pricing.p[0] + o.pricing.p[1] == Catch::Approx(6.0));
    CHECK(o.pricing.p[1] >= 4.0 - 1e-9);
    CHECK(revenue(m, o) == Catch::Approx(6.0));
}

TEST_CASE("single-minded pricing LP with no losers matches the plain LP") {
    std::mt19937_64 rng(54);
    support::RandomMarketParams prm;
    prm.single_minded = true;
    for (int trial = 0; trial < 200; ++trial) {
        Market m = support::random_market(rng, prm);
        Allocation a = greedy_allocate(m, {});
        if (winners(m, a).size() != static_cast<size_t>(m.num_bidders())) continue;
        Outcome via_smlp = smlp_with(m, a);
        Pricing via_lp = restricted_ef_lp(m, a);
        CHECK(revenue(m, via_smlp) == Catch::Approx(revenue(m, {a, via_lp})).margin(1e-6));
    }
}

TEST_CASE("single-minded revenue-max construction") {
    Market m;
    m.goods = {{0, 1}, {1, 1}};
    m.bidders = {{0, 2, 6.0, {0, 1}}, {1, 1, 4.0, {1}}};
    Allocation a = support::alloc_of(m, {{1, 0}, {1, 0}});
    Outcome o = single_minded_revenue_max(m, a);
    CHECK(o.pricing.p == std::vector<double>{6.0, 0.0});
    CHECK(revenue(m, o) == Catch::Approx(welfare(m, a)));

    Outcome null_case = single_minded_revenue_max(m, Allocation(2, 2));
    CHECK(revenue(m, null_case) == 0.0);

    Market disjoint;
    disjoint.goods = {{0, 1}, {1, 1}};
    disjoint.bidders = {{0, 1, 3.0, {0}}, {1, 1, 4.0, {1}}};
    Outcome d = single_minded_revenue_max(disjoint,
                                          support::alloc_of(disjoint, {{1, 0}, {0, 1}}));
    CHECK(revenue(disjoint, d) == Catch::Approx(7.0));
}

TEST_CASE("revenue-max construction attains exact welfare on random markets") {
    std::mt19937_64 rng(55);
    support::RandomMarketParams prm;
    prm.single_minded = true;
    prm.max_goods = 5;
    prm.max_bidders = 6;
    for (int trial = 0; trial < 300; ++trial) {
        Market m = support::random_market(rng, prm);
        Allocation a = optimal_allocate(m, Objective::Utilitarian);
        Outcome o = single_minded_revenue_max(m, a);
        CHECK(revenue(m, o) == Catch::Approx(welfare(m, a)).margin(1e-9));
    }
}

TEST_CASE("singleton reserve clearance gives full envy-freeness") {
    std::mt19937_64 rng(56);
    support::RandomMarketParams prm;
    prm.singleton = true;
    std::uniform_real_distribution<double> reserve(0.0, 5.0);
    for (int trial = 0; trial < 300; ++trial) {
        Market m = support::random_market(rng, prm);
        double r = reserve(rng);
        Allocation a = allocate_with_reserve(m, r, Objective::Utilitarian);
        PricingOptions opts;
        opts.reserve = r;
        opts.clear_at_reserve = true;
        Pricing p;
        try {
            p = restricted_ef_lp(m, a, opts);
        } catch (const InfeasibleAtReserve&) {
            continue;
        }
        Outcome o{a, p};
        for (int j = 0; j < m.num_bidders(); ++j) {
            CHECK(is_envy_free(m, o, j));
            CHECK(support::oracle_envy_free(m, o, j));
        }
        for (int i = 0; i < m.num_goods(); ++i)
            if (o.allocation.allocated_of(i) == 0)
                CHECK(p.p[i] == Catch::Approx(r).margin(1e-7));
    }
}
