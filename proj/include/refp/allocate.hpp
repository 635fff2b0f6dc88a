#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "market.hpp"
#include "matchflow.hpp"

namespace refp {

enum class BidderOrder {
    Utilitarian,       // descending R_j / sqrt(I_j)
    Egalitarian,       // ascending I_j
    RewardOverDemand,  // descending R_j / I_j
};

enum class GoodOrder { DescendingSupply, AscendingSupply };

struct OrderingPolicy {
    BidderOrder bidder_key = BidderOrder::Utilitarian;
    GoodOrder good_key = GoodOrder::DescendingSupply;
    // ties always break toward the lower id
};

enum class Objective { Utilitarian, Egalitarian };

/** Greedy all-or-none allocator: visit bidders in policy order and serve each
 * in full from its connected residual supply, or skip it entirely. Goods are
 * consumed in the policy's residual-supply order.
 */
inline Allocation greedy_allocate(const Market& market, OrderingPolicy policy = {}) {
    const int n = market.num_goods();
    const int m = market.num_bidders();
    Allocation alloc(n, m);

    std::vector<int> bidder_order(m);
    std::iota(bidder_order.begin(), bidder_order.end(), 0);
    auto key = [&](int j) -> double {
        const auto& b = market.bidders[j];
        switch (policy.bidder_key) {
            case BidderOrder::Utilitarian: return b.reward / std::sqrt(static_cast<double>(b.demand));
            case BidderOrder::Egalitarian: return -static_cast<double>(b.demand);
            case BidderOrder::RewardOverDemand: return b.reward / b.demand;
        }
        return 0;
    };
    std::stable_sort(bidder_order.begin(), bidder_order.end(), [&](int a, int b) {
        double ka = key(a), kb = key(b);
        if (ka != kb) return ka > kb;
        return a < b;
    });

    std::vector<int> remaining(n);
    for (int i = 0; i < n; ++i) remaining[i] = market.goods[i].supply;

    for (int j : bidder_order) {
        const auto& b = market.bidders[j];
        int available = 0;
        for (int i : b.edges) available += remaining[i];
        if (available < b.demand) continue;

        std::vector<int> goods = b.edges;
        std::sort(goods.begin(), goods.end(), [&](int a, int c) {
            if (remaining[a] != remaining[c])
                return policy.good_key == GoodOrder::DescendingSupply ? remaining[a] > remaining[c]
                                                                      : remaining[a] < remaining[c];
            return a < c;
        });
        int need = b.demand;
        for (int i : goods) {
            int take = std::min(need, remaining[i]);
            if (take == 0) continue;
            alloc.at(i, j) = take;
            remaining[i] -= take;
            need -= take;
            if (need == 0) break;
        }
    }
    return alloc;
}

namespace detail {

// Include/exclude branch-and-bound over winner sets; feasibility of each
// committed set is certified by max flow. `weights` is per-bidder in the
// search order; returns the best achievable total.
inline double best_winner_value(const Market& market, const std::vector<int>& order,
                                const std::vector<double>& weights) {
    const size_t count = order.size();
    std::vector<double> suffix(count + 1, 0.0);
    for (size_t i = count; i-- > 0;) suffix[i] = suffix[i + 1] + weights[i];

    double best = 0.0;
    std::vector<int> chosen;
    auto dfs = [&](auto&& self, size_t idx, double value) -> void {
        if (value > best) best = value;
        if (idx == count) return;
        if (value + suffix[idx] <= best + 1e-12) return;
        // include first: high-weight bidders come early in `order`
        chosen.push_back(order[idx]);
        if (winner_set_feasible(market, chosen)) self(self, idx + 1, value + weights[idx]);
        chosen.pop_back();
        self(self, idx + 1, value);
    };
    dfs(dfs, 0, 0.0);
    return best;
}

// Lexicographically smallest winner set (by ascending bidder id, include
// branch first) attaining `target` within tolerance.
inline std::vector<int> lex_smallest_winner_set(const Market& market,
                                                const std::vector<double>& weights, double target) {
    const int m = market.num_bidders();
    std::vector<double> suffix(m + 1, 0.0);
    for (int j = m; j-- > 0;) suffix[j] = suffix[j + 1] + weights[j];
    const double tol = 1e-9 * std::max(1.0, target);

    std::vector<int> chosen, found;
    auto dfs = [&](auto&& self, int idx, double value) -> bool {
        if (value + suffix[idx] < target - tol) return false;
        if (idx == m) {
            found = chosen;
            return true;
        }
        chosen.push_back(idx);
        if (winner_set_feasible(market, chosen) && self(self, idx + 1, value + weights[idx]))
            return true;
        chosen.pop_back();
        return self(self, idx + 1, value);
    };
    dfs(dfs, 0, 0.0);
    return found;
}

}  // namespace detail

/** Exact optimal all-or-none allocation (welfare-maximizing or egalitarian)
 * by branch-and-bound over winner sets with flow-certified feasibility.
 * Among equal-value winner sets the lexicographically smallest is returned.
 */
inline Allocation optimal_allocate(const Market& market, Objective objective,
                                   int exact_search_cap = 22) {
    const int m = market.num_bidders();
    if (m > exact_search_cap)
        throw std::invalid_argument("market exceeds the exact search cap of " +
                                    std::to_string(exact_search_cap) + " bidders");
    std::vector<double> weights(m, 1.0);
    if (objective == Objective::Utilitarian)
        for (int j = 0; j < m; ++j) weights[j] = market.bidders[j].reward;

    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return weights[a] > weights[b]; });
    std::vector<double> ordered_weights(m);
    for (int i = 0; i < m; ++i) ordered_weights[i] = weights[order[i]];

    double best = detail::best_winner_value(market, order, ordered_weights);
    std::vector<int> winner_set = detail::lex_smallest_winner_set(market, weights, best);

    FlowNetwork net = make_winner_network(market, winner_set);
    max_flow(net);
    return extract_allocation(net, market, winner_set);
}

/** Drop every bidder whose reward cannot cover the reserve over its demand
 * (R_j - r I_j <= 0; exact zeros go too, rewards must stay positive), shift
 * the survivors' rewards down by r I_j, and return the survivor id map.
 */
inline std::pair<Market, std::vector<int>> reserve_transform(const Market& market, double r) {
    Market out;
    out.goods = market.goods;
    std::vector<int> survivors;
    for (int j = 0; j < market.num_bidders(); ++j) {
        const auto& b = market.bidders[j];
        double shifted = b.reward - r * b.demand;
        if (shifted <= 0) continue;
        BidderSpec nb = b;
        nb.id = static_cast<int>(survivors.size());
        nb.reward = shifted;
        out.bidders.push_back(std::move(nb));
        survivors.push_back(j);
    }
    return {std::move(out), std::move(survivors)};
}

/// Either a greedy policy or an exact objective, for callers that allocate both ways.
using AllocatorChoice = std::variant<OrderingPolicy, Objective>;

inline Allocation allocate(const Market& market, const AllocatorChoice& allocator) {
    if (std::holds_alternative<OrderingPolicy>(allocator))
        return greedy_allocate(market, std::get<OrderingPolicy>(allocator));
    return optimal_allocate(market, std::get<Objective>(allocator));
}

/** Allocate in the reserve-transformed market and lift the result back to the
 * original bidder indexing. Every winner of the result satisfies
 * R_j >= r I_j.
 */
inline Allocation allocate_with_reserve(const Market& market, double r,
                                        const AllocatorChoice& allocator) {
    auto [transformed, survivors] = reserve_transform(market, r);
    Allocation inner = allocate(transformed, allocator);
    Allocation lifted(market.num_goods(), market.num_bidders());
    for (int i = 0; i < inner.n; ++i)
        for (int j = 0; j < inner.m; ++j) lifted.at(i, survivors[j]) = inner.at(i, j);
    return lifted;
}

}  // namespace refp
