#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace refp {

struct GoodSpec {
    int id = 0;
    int supply = 1;
};

struct BidderSpec {
    int id = 0;
    int demand = 1;
    double reward = 1.0;
    std::vector<int> edges;  // good ids, kept sorted
};

/** A centralized combinatorial matching market: goods with finite supplies on
 * one side, bidders with a demanded bundle size and a reward on the other, and
 * edges saying which good types each bidder will accept.
 *
 * Bidders are size-interchangeable: a bidder attains its full reward whenever
 * it receives at least `demand` units across its connected good types, and
 * nothing otherwise.
 */
struct Market {
    std::vector<GoodSpec> goods;
    std::vector<BidderSpec> bidders;

    int num_goods() const { return static_cast<int>(goods.size()); }
    int num_bidders() const { return static_cast<int>(bidders.size()); }

    bool has_edge(int good, int bidder) const {
        const auto& e = bidders[bidder].edges;
        return std::binary_search(e.begin(), e.end(), good);
    }

    int degree(int bidder) const { return static_cast<int>(bidders[bidder].edges.size()); }

    /// Total supply across the goods bidder j is connected to.
    int connected_supply(int bidder) const {
        int total = 0;
        for (int i : bidders[bidder].edges) total += goods[i].supply;
        return total;
    }
};

/// n x m matrix of copy counts, row per good, column per bidder.
struct Allocation {
    int n = 0;
    int m = 0;
    std::vector<int> x;

    Allocation() = default;
    Allocation(int n_, int m_) : n(n_), m(m_), x(static_cast<size_t>(n_) * m_, 0) {}

    int& at(int good, int bidder) { return x[static_cast<size_t>(good) * m + bidder]; }
    int at(int good, int bidder) const { return x[static_cast<size_t>(good) * m + bidder]; }

    int bundle_size(int bidder) const {
        int total = 0;
        for (int i = 0; i < n; ++i) total += at(i, bidder);
        return total;
    }

    int allocated_of(int good) const {
        int total = 0;
        for (int j = 0; j < m; ++j) total += at(good, j);
        return total;
    }

    bool operator==(const Allocation& o) const = default;
};

struct Pricing {
    std::vector<double> p;

    Pricing() = default;
    explicit Pricing(int n) : p(n, 0.0) {}

    bool operator==(const Pricing& o) const = default;
};

struct Outcome {
    Allocation allocation;
    Pricing pricing;
};

/// The seven per-run measurements reported by the experiment harness.
struct MetricsRecord {
    double welfare_ratio = 0;
    double revenue_ratio = 0;
    double ef_violation = 0;
    double ef_loss = 0;
    double mc_violation = 0;
    double mc_loss = 0;
    double time_ms = 0;
};

/// Throws std::invalid_argument naming the first violated market invariant.
inline void validate(const Market& market) {
    const int n = market.num_goods();
    const int m = market.num_bidders();
    for (int i = 0; i < n; ++i) {
        if (market.goods[i].id != i)
            throw std::invalid_argument("good ids must be dense 0..n-1; found id " +
                                        std::to_string(market.goods[i].id) + " at position " +
                                        std::to_string(i));
        if (market.goods[i].supply < 1)
            throw std::invalid_argument("good " + std::to_string(i) + " has supply < 1");
    }
    for (int j = 0; j < m; ++j) {
        const auto& b = market.bidders[j];
        if (b.id != j)
            throw std::invalid_argument("bidder ids must be dense 0..m-1; found id " +
                                        std::to_string(b.id) + " at position " + std::to_string(j));
        if (b.demand < 1)
            throw std::invalid_argument("bidder " + std::to_string(j) + " has demand < 1");
        if (!(b.reward > 0))
            throw std::invalid_argument("bidder " + std::to_string(j) + " has non-positive reward");
        for (size_t e = 0; e < b.edges.size(); ++e) {
            if (b.edges[e] < 0 || b.edges[e] >= n)
                throw std::invalid_argument("bidder " + std::to_string(j) +
                                            " has an edge to a nonexistent good");
            if (e > 0 && b.edges[e] == b.edges[e - 1])
                throw std::invalid_argument("bidder " + std::to_string(j) +
                                            " has a duplicate edge to good " +
                                            std::to_string(b.edges[e]));
            if (e > 0 && b.edges[e] < b.edges[e - 1])
                throw std::invalid_argument("bidder " + std::to_string(j) +
                                            " has unsorted edges");
        }
    }
}

inline bool is_feasible(const Market& market, const Allocation& alloc) {
    if (alloc.n != market.num_goods() || alloc.m != market.num_bidders()) return false;
    for (int i = 0; i < alloc.n; ++i) {
        if (alloc.allocated_of(i) > market.goods[i].supply) return false;
        for (int j = 0; j < alloc.m; ++j) {
            if (alloc.at(i, j) < 0) return false;
            if (alloc.at(i, j) > 0 && !market.has_edge(i, j)) return false;
        }
    }
    return true;
}

/// The winner set W: bidders whose demand is fulfilled.
inline std::vector<int> winners(const Market& market, const Allocation& alloc) {
    std::vector<int> w;
    for (int j = 0; j < market.num_bidders(); ++j)
        if (alloc.bundle_size(j) >= market.bidders[j].demand) w.push_back(j);
    return w;
}

/// V_j(X_j): the bidder's reward if its bundle meets its demand, else 0.
inline double valuation(const Market& market, const Allocation& alloc, int bidder) {
    int total = 0;
    for (int i : market.bidders[bidder].edges) total += alloc.at(i, bidder);
    return total >= market.bidders[bidder].demand ? market.bidders[bidder].reward : 0.0;
}

/// P_j(X_j) = sum_i x_ij p_i.
inline double bundle_price(const Market& market, const Outcome& outcome, int bidder) {
    double total = 0;
    for (int i = 0; i < market.num_goods(); ++i)
        total += outcome.allocation.at(i, bidder) * outcome.pricing.p[i];
    return total;
}

inline double utility(const Market& market, const Outcome& outcome, int bidder) {
    return valuation(market, outcome.allocation, bidder) - bundle_price(market, outcome, bidder);
}

inline double welfare(const Market& market, const Allocation& alloc) {
    double total = 0;
    for (int j : winners(market, alloc)) total += market.bidders[j].reward;
    return total;
}

inline double revenue(const Market& market, const Outcome& outcome) {
    double total = 0;
    for (int i = 0; i < market.num_goods(); ++i)
        total += outcome.allocation.allocated_of(i) * outcome.pricing.p[i];
    return total;
}

/** Price of bidder j's cheapest bundle of exactly `size` units, drawn from the
 * full supply of its connected goods. Greedy cheapest-first is exact because
 * the cost of a bundle is a sum of unit prices; ties break toward the lower
 * good id. Returns nullopt when j's connected supply cannot cover `size`.
 */
inline std::optional<double> cheapest_bundle_price(const Market& market, const Pricing& pricing,
                                                   int bidder, int size) {
    if (size == 0) return 0.0;
    std::vector<int> order = market.bidders[bidder].edges;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (pricing.p[a] != pricing.p[b]) return pricing.p[a] < pricing.p[b];
        return a < b;
    });
    double cost = 0;
    int remaining = size;
    for (int i : order) {
        int take = std::min(remaining, market.goods[i].supply);
        cost += take * pricing.p[i];
        remaining -= take;
        if (remaining == 0) return cost;
    }
    return std::nullopt;
}

/** Envy-freeness per the full WE condition: j's utility must match the best it
 * could do with any bundle from the full supply. For a single-step valuation
 * that best is either the empty bundle or a cheapest bundle of size I_j.
 */
inline bool is_envy_free(const Market& market, const Outcome& outcome, int bidder) {
    double own = utility(market, outcome, bidder);
    double best = 0.0;
    auto cheapest = cheapest_bundle_price(market, outcome.pricing, bidder,
                                          market.bidders[bidder].demand);
    if (cheapest)
        best = std::max(best, market.bidders[bidder].reward - *cheapest);
    return own >= best - 1e-9;
}

/** Restricted envy-freeness: every bidder holding a non-empty bundle must be
 * doing at least as well as with the empty bundle or any bundle of the same
 * size drawn from full supply.
 */
inline bool is_restricted_envy_free(const Market& market, const Outcome& outcome) {
    for (int j = 0; j < market.num_bidders(); ++j) {
        int size = outcome.allocation.bundle_size(j);
        if (size == 0) continue;
        double value_at_size = size >= market.bidders[j].demand ? market.bidders[j].reward : 0.0;
        double own = value_at_size - bundle_price(market, outcome, j);
        double best = 0.0;
        auto cheapest = cheapest_bundle_price(market, outcome.pricing, j, size);
        if (cheapest) best = std::max(best, value_at_size - *cheapest);
        if (own < best - 1e-9) return false;
    }
    return true;
}

inline bool is_single_minded(const Market& market) {
    for (const auto& g : market.goods)
        if (g.supply != 1) return false;
    for (const auto& b : market.bidders)
        if (b.demand != static_cast<int>(b.edges.size())) return false;
    return true;
}

inline bool is_singleton(const Market& market) {
    for (const auto& b : market.bidders)
        if (b.demand != 1) return false;
    return true;
}

/** The six evaluation metrics of an outcome against the optimal welfare, plus
 * the measured time. Any metric whose denominator is zero reports 0.
 */
inline MetricsRecord metrics(const Market& market, const Outcome& outcome, double opt_welfare,
                             double elapsed_ms) {
    MetricsRecord rec;
    rec.time_ms = elapsed_ms;
    const int n = market.num_goods();
    const int m = market.num_bidders();

    double v = welfare(market, outcome.allocation);
    double rho = revenue(market, outcome);
    rec.welfare_ratio = opt_welfare > 0 ? v / opt_welfare : 0.0;
    rec.revenue_ratio = opt_welfare > 0 ? rho / opt_welfare : 0.0;

    int envious = 0;
    for (int j = 0; j < m; ++j)
        if (!is_envy_free(market, outcome, j)) ++envious;
    rec.ef_violation = m > 0 ? static_cast<double>(envious) / m : 0.0;

    auto w = winners(market, outcome.allocation);
    std::vector<char> is_winner(m, 0);
    for (int j : w) is_winner[j] = 1;
    double lost = 0, loser_reward = 0;
    for (int j = 0; j < m; ++j) {
        if (is_winner[j]) continue;
        loser_reward += market.bidders[j].reward;
        auto cheapest =
            cheapest_bundle_price(market, outcome.pricing, j, market.bidders[j].demand);
        if (cheapest) lost += std::max(0.0, market.bidders[j].reward - *cheapest);
    }
    rec.ef_loss = loser_reward > 0 ? lost / loser_reward : 0.0;

    int violating = 0;
    double violating_price = 0, total_price = 0;
    for (int i = 0; i < n; ++i) {
        total_price += outcome.pricing.p[i];
        if (outcome.pricing.p[i] > 0 && outcome.allocation.allocated_of(i) == 0) {
            ++violating;
            violating_price += outcome.pricing.p[i];
        }
    }
    rec.mc_violation = n > 0 ? static_cast<double>(violating) / n : 0.0;
    rec.mc_loss = total_price > 0 ? violating_price / total_price : 0.0;
    return rec;
}

}  // namespace refp
