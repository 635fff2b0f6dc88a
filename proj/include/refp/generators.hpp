#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "market.hpp"

namespace refp {

enum class MarketVariant { SizeInterchangeable, SingleMinded, Singleton };

struct RandomKConfig {
    int n = 5;
    int m = 5;
    double edge_prob = 0.5;  // in (0, 1]
    double k = 1.0;          // target supply-to-demand ratio
    MarketVariant variant = MarketVariant::SizeInterchangeable;
    uint64_t seed = 0;
};

namespace detail {

inline void check_random_k(const RandomKConfig& cfg) {
    if (cfg.n < 1 || cfg.m < 1) throw std::invalid_argument("n and m must be positive");
    if (!(cfg.edge_prob > 0) || cfg.edge_prob > 1)
        throw std::invalid_argument("edge probability must be in (0,1]");
    if (!(cfg.k > 0)) throw std::invalid_argument("ratio k must be positive");
}

// Multiplicative rescale with round-robin correction: bring `values` (each
// kept >= 1) to sum exactly to `target`.
inline void rescale_to_sum(std::vector<int>& values, long long target) {
    long long current = std::accumulate(values.begin(), values.end(), 0LL);
    if (current == 0) return;
    for (auto& v : values)
        v = std::max(1, static_cast<int>(std::llround(static_cast<double>(v) * target / current)));
    current = std::accumulate(values.begin(), values.end(), 0LL);
    size_t at = 0;
    while (current != target) {
        size_t idx = at++ % values.size();
        if (current < target) {
            ++values[idx];
            ++current;
        } else if (values[idx] > 1) {
            --values[idx];
            --current;
        }
        if (at > values.size() * (1 + std::llabs(current - target)) + values.size()) break;
    }
}

}  // namespace detail

/** Seeded Random-k-Market generator. Edges appear independently with
 * probability p (isolated goods and bidders are patched with one uniform
 * edge), then the variant's supply/demand rules apply, and finally one side
 * is rescaled so the realized supply-to-demand ratio tracks k:
 * supplies for the size-interchangeable and singleton variants, bidder
 * degrees (and hence demands) for single-minded markets, whose supplies are
 * pinned at one copy per good.
 */
inline Market random_k_market(const RandomKConfig& cfg) {
    detail::check_random_k(cfg);
    std::mt19937_64 rng(cfg.seed);
    const int n = cfg.n, m = cfg.m;

    std::vector<std::vector<char>> edge(n, std::vector<char>(m, 0));
    std::bernoulli_distribution has_edge(cfg.edge_prob);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) edge[i][j] = has_edge(rng);

    std::uniform_int_distribution<int> any_good(0, n - 1), any_bidder(0, m - 1);
    for (int j = 0; j < m; ++j) {
        bool isolated = true;
        for (int i = 0; i < n; ++i)
            if (edge[i][j]) isolated = false;
        if (isolated) edge[any_good(rng)][j] = 1;
    }
    for (int i = 0; i < n; ++i) {
        bool isolated = true;
        for (int j = 0; j < m; ++j)
            if (edge[i][j]) isolated = false;
        if (isolated) edge[i][any_bidder(rng)] = 1;
    }

    std::uniform_int_distribution<int> unit_count(1, 10);
    std::vector<int> supply(n, 1), demand(m, 1);
    if (cfg.variant != MarketVariant::SingleMinded)
        for (int i = 0; i < n; ++i) supply[i] = unit_count(rng);
    if (cfg.variant == MarketVariant::SizeInterchangeable)
        for (int j = 0; j < m; ++j) demand[j] = unit_count(rng);

    std::uniform_real_distribution<double> reward_dist(1.0, 10.0);
    std::vector<double> rewards(m);
    for (int j = 0; j < m; ++j) rewards[j] = reward_dist(rng);

    if (cfg.variant == MarketVariant::SingleMinded) {
        // Supplies are fixed at one copy, so the ratio is steered from the
        // demand side: scale bidder degrees toward total demand n / k.
        std::vector<int> degree(m, 0);
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < n; ++i) degree[j] += edge[i][j];
        long long target = std::llround(n / cfg.k);
        target = std::max<long long>(m, std::min<long long>(target, static_cast<long long>(n) * m));
        detail::rescale_to_sum(degree, target);
        for (int j = 0; j < m; ++j) degree[j] = std::min(degree[j], n);
        for (int j = 0; j < m; ++j) {
            int current = 0;
            for (int i = 0; i < n; ++i) current += edge[i][j];
            while (current > degree[j]) {
                std::uniform_int_distribution<int> pick(0, current - 1);
                int drop = pick(rng);
                for (int i = 0; i < n; ++i)
                    if (edge[i][j] && drop-- == 0) {
                        edge[i][j] = 0;
                        break;
                    }
                --current;
            }
            while (current < degree[j]) {
                int i = any_good(rng);
                if (!edge[i][j]) {
                    edge[i][j] = 1;
                    ++current;
                }
            }
        }
        // Dropping edges may have re-isolated a good; patch again.
        for (int i = 0; i < n; ++i) {
            bool isolated = true;
            for (int j = 0; j < m; ++j)
                if (edge[i][j]) isolated = false;
            if (isolated) edge[i][any_bidder(rng)] = 1;
        }
        for (int j = 0; j < m; ++j) {
            demand[j] = 0;
            for (int i = 0; i < n; ++i) demand[j] += edge[i][j];
        }
    } else {
        long long total_demand = std::accumulate(demand.begin(), demand.end(), 0LL);
        long long target = std::max<long long>(n, std::llround(cfg.k * total_demand));
        detail::rescale_to_sum(supply, target);
    }

    Market market;
    market.goods.resize(n);
    for (int i = 0; i < n; ++i) market.goods[i] = {i, supply[i]};
    market.bidders.resize(m);
    for (int j = 0; j < m; ++j) {
        market.bidders[j].id = j;
        market.bidders[j].demand = demand[j];
        market.bidders[j].reward = rewards[j];
        for (int i = 0; i < n; ++i)
            if (edge[i][j]) market.bidders[j].edges.push_back(i);
    }
    return market;
}

struct AdXConfig {
    int m = 10;
    double continue_prob = 0.5;  // in (0, 1]
    int user_count = 10000;
    std::array<double, 16> profile_dist;  // demographic profiles, sums to 1
    std::array<double, 6> site_dist;      // visited sites, sums to 1
    uint64_t seed = 0;

    AdXConfig() {
        profile_dist.fill(1.0 / 16);
        site_dist.fill(1.0 / 6);
    }
};

/** Seeded ad-exchange market: good types are (site, demographic profile)
 * pairs whose supplies come from simulating user visits; campaigns target a
 * random demographic predicate and demand (and are rewarded) a random number
 * of matching impressions.
 */
inline Market adx_market(const AdXConfig& cfg) {
    if (cfg.m < 0) throw std::invalid_argument("m must be nonnegative");
    if (!(cfg.continue_prob > 0) || cfg.continue_prob > 1)
        throw std::invalid_argument("continue probability must be in (0,1]");
    auto check_dist = [](const auto& dist) {
        double sum = std::accumulate(dist.begin(), dist.end(), 0.0);
        if (std::fabs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("distribution does not sum to 1");
    };
    check_dist(cfg.profile_dist);
    check_dist(cfg.site_dist);

    std::mt19937_64 rng(cfg.seed);
    std::discrete_distribution<int> profile_of(cfg.profile_dist.begin(), cfg.profile_dist.end());
    std::discrete_distribution<int> site_of(cfg.site_dist.begin(), cfg.site_dist.end());
    std::bernoulli_distribution continues(cfg.continue_prob);

    // 6 sites x 16 profiles (4 binary attributes).
    std::array<long long, 96> impressions{};
    for (int u = 0; u < cfg.user_count; ++u) {
        int profile = profile_of(rng);
        int visits = 1;
        while (visits < 6 && continues(rng)) ++visits;
        for (int v = 0; v < visits; ++v) ++impressions[site_of(rng) * 16 + profile];
    }

    Market market;
    std::array<int, 96> good_of_type;
    good_of_type.fill(-1);
    for (int t = 0; t < 96; ++t) {
        if (impressions[t] == 0) continue;
        good_of_type[t] = market.num_goods();
        market.goods.push_back({market.num_goods(), static_cast<int>(impressions[t])});
    }

    std::uniform_int_distribution<int> coin(0, 1);
    for (int j = 0; j < cfg.m; ++j) {
        std::vector<int> edges;
        long long matching_supply = 0;
        for (int attempt = 0; attempt < 10 && matching_supply == 0; ++attempt) {
            // Fix a uniform nonempty subset of the 4 attributes, each at a
            // uniform value; the campaign matches every profile agreeing on
            // the fixed attributes, on any site.
            int mask = std::uniform_int_distribution<int>(1, 15)(rng);
            int wanted = 0;
            for (int a = 0; a < 4; ++a)
                if (mask & (1 << a)) wanted |= coin(rng) << a;
            edges.clear();
            matching_supply = 0;
            for (int t = 0; t < 96; ++t) {
                if (good_of_type[t] < 0) continue;
                int profile = t % 16;
                if ((profile & mask) != wanted) continue;
                edges.push_back(good_of_type[t]);
                matching_supply += impressions[t];
            }
        }
        if (matching_supply == 0) {
            std::uniform_int_distribution<int> any(0, market.num_goods() - 1);
            edges = {any(rng)};
            matching_supply = market.goods[edges[0]].supply;
        }
        std::sort(edges.begin(), edges.end());
        long long demand = std::uniform_int_distribution<long long>(1, matching_supply)(rng);
        BidderSpec bidder;
        bidder.id = j;
        bidder.demand = static_cast<int>(demand);
        bidder.reward = static_cast<double>(demand);
        bidder.edges = std::move(edges);
        market.bidders.push_back(std::move(bidder));
    }
    return market;
}

}  // namespace refp
