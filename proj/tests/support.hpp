#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately use brute force (bundle enumeration, vertex enumeration,
// exhaustive subsets) so they share no code with the implementations they
// check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "refp/allocate.hpp"
#include "refp/market.hpp"
#include "refp/simplex.hpp"

namespace support {

// Two goods G (supply 2) and F (supply 3); bidder 0 wants 2 units of G only
// for 10, bidder 1 wants 2 units of either for 5.
inline refp::Market ex_two_goods() {
    refp::Market m;
    m.goods = {{0, 2}, {1, 3}};
    m.bidders = {{0, 2, 10.0, {0}}, {1, 2, 5.0, {0, 1}}};
    return m;
}

// One good with 2 copies; bidder 0 wants 1 copy for 5, bidder 1 wants both
// for 7. No Walrasian equilibrium exists.
inline refp::Market ex_one_good() {
    refp::Market m;
    m.goods = {{0, 2}};
    m.bidders = {{0, 1, 5.0, {0}}, {1, 2, 7.0, {0}}};
    return m;
}

// The same market at unit-copy granularity: the supply-2 good split into two
// unit goods both bidders accept.
inline refp::Market ex_one_good_units() {
    refp::Market m;
    m.goods = {{0, 1}, {1, 1}};
    m.bidders = {{0, 1, 5.0, {0, 1}}, {1, 2, 7.0, {0, 1}}};
    return m;
}

// Allocation helpers for the fixtures.
inline refp::Allocation alloc_of(const refp::Market& m,
                                 const std::vector<std::vector<int>>& rows) {
    refp::Allocation a(m.num_goods(), m.num_bidders());
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.m; ++j) a.at(i, j) = rows[i][j];
    return a;
}

// Every bundle bidder j could hold: integer vectors over j's edges bounded by
// full supply. `exact_size` < 0 enumerates all sizes.
inline void for_each_bundle(const refp::Market& market, int bidder, int exact_size,
                            const std::function<void(const std::vector<int>&)>& fn) {
    const auto& edges = market.bidders[bidder].edges;
    std::vector<int> bundle(market.num_goods(), 0);
    std::function<void(size_t, int)> rec = [&](size_t idx, int used) {
        if (idx == edges.size()) {
            if (exact_size < 0 || used == exact_size) fn(bundle);
            return;
        }
        int good = edges[idx];
        int cap = market.goods[good].supply;
        if (exact_size >= 0) cap = std::min(cap, exact_size - used);
        for (int take = 0; take <= cap; ++take) {
            bundle[good] = take;
            rec(idx + 1, used + take);
        }
        bundle[good] = 0;
    };
    rec(0, 0);
}

// Def-2.3 envy-freeness by exhaustive enumeration over every bundle from
// full supply.
inline bool oracle_envy_free(const refp::Market& market, const refp::Outcome& outcome,
                             int bidder) {
    double own = refp::utility(market, outcome, bidder);
    bool ok = true;
    for_each_bundle(market, bidder, -1, [&](const std::vector<int>& bundle) {
        int size = 0;
        double price = 0;
        for (int i = 0; i < market.num_goods(); ++i) {
            size += bundle[i];
            price += bundle[i] * outcome.pricing.p[i];
        }
        double value = size >= market.bidders[bidder].demand ? market.bidders[bidder].reward : 0.0;
        if (own < value - price - 1e-9) ok = false;
    });
    return ok;
}

// Restricted envy-freeness: allocated bidders compared only against same-size
// bundles and the empty bundle.
inline bool oracle_restricted_envy_free(const refp::Market& market,
                                        const refp::Outcome& outcome) {
    for (int j = 0; j < market.num_bidders(); ++j) {
        int size = outcome.allocation.bundle_size(j);
        if (size == 0) continue;
        double value_at_size = size >= market.bidders[j].demand ? market.bidders[j].reward : 0.0;
        double own = value_at_size - refp::bundle_price(market, outcome, j);
        if (own < -1e-9) return false;  // empty bundle beats it
        bool ok = true;
        for_each_bundle(market, j, size, [&](const std::vector<int>& bundle) {
            double price = 0;
            for (int i = 0; i < market.num_goods(); ++i) price += bundle[i] * outcome.pricing.p[i];
            if (own < value_at_size - price - 1e-9) ok = false;
        });
        if (!ok) return false;
    }
    return true;
}

// Exhaustive welfare-optimal value over all winner subsets, with feasibility
// decided by enumerating every assignment (no flow code involved).
inline bool oracle_winner_set_feasible(const refp::Market& market, const std::vector<int>& w) {
    std::function<bool(size_t, std::vector<int>&)> rec = [&](size_t idx,
                                                             std::vector<int>& remaining) -> bool {
        if (idx == w.size()) return true;
        int j = w[idx];
        const auto& edges = market.bidders[j].edges;
        std::function<bool(size_t, int)> fill = [&](size_t e, int need) -> bool {
            if (need == 0) return rec(idx + 1, remaining);
            if (e == edges.size()) return false;
            int good = edges[e];
            for (int take = std::min(need, remaining[good]); take >= 0; --take) {
                remaining[good] -= take;
                if (fill(e + 1, need - take)) {
                    remaining[good] += take;
                    return true;
                }
                remaining[good] += take;
            }
            return false;
        };
        return fill(0, market.bidders[j].demand);
    };
    std::vector<int> remaining(market.num_goods());
    for (int i = 0; i < market.num_goods(); ++i) remaining[i] = market.goods[i].supply;
    return rec(0, remaining);
}

inline double oracle_optimal_welfare(const refp::Market& market) {
    const int m = market.num_bidders();
    double best = 0;
    for (int mask = 0; mask < (1 << m); ++mask) {
        std::vector<int> w;
        double value = 0;
        for (int j = 0; j < m; ++j)
            if (mask & (1 << j)) {
                w.push_back(j);
                value += market.bidders[j].reward;
            }
        if (value > best && oracle_winner_set_feasible(market, w)) best = value;
    }
    return best;
}

inline int oracle_max_winner_count(const refp::Market& market) {
    const int m = market.num_bidders();
    int best = 0;
    for (int mask = 0; mask < (1 << m); ++mask) {
        std::vector<int> w;
        for (int j = 0; j < m; ++j)
            if (mask & (1 << j)) w.push_back(j);
        if (static_cast<int>(w.size()) > best && oracle_winner_set_feasible(market, w))
            best = static_cast<int>(w.size());
    }
    return best;
}

/** LP oracle by vertex enumeration: treat every constraint and every lower
 * bound as a hyperplane, solve each n-subset by Gaussian elimination, keep
 * feasible intersection points, and return the best objective. Returns
 * nullopt when no feasible vertex exists. Only sound for bounded problems.
 */
inline std::optional<double> oracle_lp_max(const refp::LpProblem& lp) {
    const size_t n = lp.objective.size();
    std::vector<std::pair<std::vector<double>, double>> planes;
    for (const auto& c : lp.constraints) planes.push_back({c.coeffs, c.rhs});
    for (size_t v = 0; v < n; ++v) {
        std::vector<double> row(n, 0.0);
        row[v] = 1.0;
        double lb = v < lp.lower_bounds.size() ? lp.lower_bounds[v] : 0.0;
        planes.push_back({row, lb});
    }

    auto feasible = [&](const std::vector<double>& x) {
        for (const auto& c : lp.constraints) {
            double lhs = 0;
            for (size_t v = 0; v < n; ++v) lhs += c.coeffs[v] * x[v];
            if (c.rel == refp::Relation::LessEq && lhs > c.rhs + 1e-6) return false;
            if (c.rel == refp::Relation::GreaterEq && lhs < c.rhs - 1e-6) return false;
            if (c.rel == refp::Relation::Eq && std::fabs(lhs - c.rhs) > 1e-6) return false;
        }
        for (size_t v = 0; v < n; ++v) {
            double lb = v < lp.lower_bounds.size() ? lp.lower_bounds[v] : 0.0;
            if (x[v] < lb - 1e-6) return false;
        }
        return true;
    };

    std::optional<double> best;
    std::vector<size_t> pick(n);
    std::function<void(size_t, size_t)> choose = [&](size_t idx, size_t from) {
        if (idx == n) {
            // Solve the n x n system of the chosen planes.
            std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
            for (size_t r = 0; r < n; ++r) {
                for (size_t v = 0; v < n; ++v) a[r][v] = planes[pick[r]].first[v];
                a[r][n] = planes[pick[r]].second;
            }
            for (size_t col = 0; col < n; ++col) {
                size_t piv = col;
                for (size_t r = col; r < n; ++r)
                    if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
                if (std::fabs(a[piv][col]) < 1e-9) return;
                std::swap(a[col], a[piv]);
                for (size_t r = 0; r < n; ++r) {
                    if (r == col) continue;
                    double f = a[r][col] / a[col][col];
                    for (size_t v = col; v <= n; ++v) a[r][v] -= f * a[col][v];
                }
            }
            std::vector<double> x(n);
            for (size_t v = 0; v < n; ++v) x[v] = a[v][n] / a[v][v];
            if (!feasible(x)) return;
            double value = 0;
            for (size_t v = 0; v < n; ++v) value += lp.objective[v] * x[v];
            if (!best || value > *best) best = value;
            return;
        }
        for (size_t p = from; p < planes.size(); ++p) {
            pick[idx] = p;
            choose(idx + 1, p + 1);
        }
    };
    choose(0, 0);
    return best;
}

/// Small random market with every bidder guaranteed at least one edge.
struct RandomMarketParams {
    int max_goods = 4;
    int max_bidders = 4;
    int max_supply = 3;
    int max_demand = 3;
    double edge_prob = 0.6;
    bool single_minded = false;
    bool singleton = false;
};

inline refp::Market random_market(std::mt19937_64& rng, const RandomMarketParams& prm = {}) {
    std::uniform_int_distribution<int> goods_dist(1, prm.max_goods);
    std::uniform_int_distribution<int> bidders_dist(1, prm.max_bidders);
    const int n = goods_dist(rng);
    const int m = bidders_dist(rng);

    refp::Market market;
    market.goods.resize(n);
    std::uniform_int_distribution<int> supply_dist(1, prm.max_supply);
    for (int i = 0; i < n; ++i)
        market.goods[i] = {i, prm.single_minded ? 1 : supply_dist(rng)};

    std::bernoulli_distribution has_edge(prm.edge_prob);
    std::uniform_int_distribution<int> any_good(0, n - 1);
    std::uniform_real_distribution<double> reward(1.0, 10.0);
    market.bidders.resize(m);
    for (int j = 0; j < m; ++j) {
        auto& b = market.bidders[j];
        b.id = j;
        for (int i = 0; i < n; ++i)
            if (has_edge(rng)) b.edges.push_back(i);
        if (b.edges.empty()) b.edges.push_back(any_good(rng));
        b.reward = reward(rng);
        if (prm.single_minded) {
            b.demand = static_cast<int>(b.edges.size());
        } else if (prm.singleton) {
            b.demand = 1;
        } else {
            int cap = std::min(prm.max_demand, market.connected_supply(j));
            b.demand = std::uniform_int_distribution<int>(1, std::max(1, cap))(rng);
        }
    }
    return market;
}

// Every feasible all-or-none allocation of a tiny market.
inline void for_each_all_or_none(const refp::Market& market,
                                 const std::function<void(const refp::Allocation&)>& fn) {
    const int m = market.num_bidders();
    refp::Allocation alloc(market.num_goods(), m);
    std::vector<int> remaining(market.num_goods());
    for (int i = 0; i < market.num_goods(); ++i) remaining[i] = market.goods[i].supply;

    std::function<void(int)> per_bidder = [&](int j) {
        if (j == m) {
            fn(alloc);
            return;
        }
        per_bidder(j + 1);  // bidder j gets nothing
        const auto& edges = market.bidders[j].edges;
        std::function<void(size_t, int)> fill = [&](size_t e, int need) {
            if (need == 0) {
                per_bidder(j + 1);
                return;
            }
            if (e == edges.size()) return;
            int good = edges[e];
            for (int take = std::min(need, remaining[good]); take >= 0; --take) {
                alloc.at(good, j) = take;
                remaining[good] -= take;
                fill(e + 1, need - take);
                remaining[good] += take;
                alloc.at(good, j) = 0;
            }
        };
        fill(0, market.bidders[j].demand);
    };
    per_bidder(0);
}

}  // namespace support
