#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "allocate.hpp"
#include "market.hpp"
#include "simplex.hpp"

namespace refp {

/// Raised when a fixed allocation admits no restricted envy-free prices at the
/// requested reserve.
class InfeasibleAtReserve : public std::runtime_error {
  public:
    InfeasibleAtReserve() : std::runtime_error("the allocation does not respect the reserve price") {}
};

struct PricingOptions {
    // Revenue objective (c_i = units of good i sold) unless a custom linear
    // objective over prices is supplied.
    std::vector<double> objective;  // empty selects revenue
    double reserve = 0;             // adds p_i >= r for every good
    bool clear_at_reserve = false;  // adds p_i = r for every fully unallocated good
};

namespace detail {

// Winner individual-rationality rows: P_j(X_j) <= V_j(X_j) for every bidder
// holding a non-empty bundle.
inline void add_ir_constraints(const Market& market, const Allocation& alloc, LpProblem& lp) {
    const int n = market.num_goods();
    for (int j = 0; j < market.num_bidders(); ++j) {
        if (alloc.bundle_size(j) == 0) continue;
        std::vector<double> row(n, 0.0);
        for (int i = 0; i < n; ++i) row[i] = alloc.at(i, j);
        lp.add_constraint(std::move(row), Relation::LessEq, valuation(market, alloc, j));
    }
}

// Compact-condition rows: a good a bidder holds may not cost more than any
// connected good of which that bidder holds less than full supply.
inline void add_compact_constraints(const Market& market, const Allocation& alloc, LpProblem& lp) {
    const int n = market.num_goods();
    std::vector<std::vector<char>> emitted(n, std::vector<char>(n, 0));
    for (int j = 0; j < market.num_bidders(); ++j) {
        for (int i : market.bidders[j].edges) {
            if (alloc.at(i, j) <= 0) continue;
            for (int k : market.bidders[j].edges) {
                if (k == i || alloc.at(k, j) >= market.goods[k].supply) continue;
                if (emitted[i][k]) continue;
                emitted[i][k] = 1;
                std::vector<double> row(n, 0.0);
                row[i] = 1.0;
                row[k] = -1.0;
                lp.add_constraint(std::move(row), Relation::LessEq, 0.0);
            }
        }
    }
}

}  // namespace detail

/** Restricted envy-free prices for a fixed feasible allocation: maximize the
 * objective (revenue by default) subject to individual rationality and the
 * compact condition, plus any reserve/clearance rows from the options. The
 * result is the deterministic simplex vertex.
 *
 * Throws InfeasibleAtReserve when the constraint system is empty.
 */
inline Pricing restricted_ef_lp(const Market& market, const Allocation& alloc,
                                const PricingOptions& opts = {}) {
    const int n = market.num_goods();
    LpProblem lp;
    lp.objective.assign(n, 0.0);
    if (opts.objective.empty()) {
        for (int i = 0; i < n; ++i) lp.objective[i] = alloc.allocated_of(i);
    } else {
        lp.objective = opts.objective;
    }
    lp.lower_bounds.assign(n, opts.reserve);

    detail::add_ir_constraints(market, alloc, lp);
    detail::add_compact_constraints(market, alloc, lp);
    if (opts.clear_at_reserve) {
        for (int i = 0; i < n; ++i) {
            if (alloc.allocated_of(i) != 0) continue;
            std::vector<double> row(n, 0.0);
            row[i] = 1.0;
            lp.add_constraint(std::move(row), Relation::Eq, opts.reserve);
        }
    }

    LpSolution sol = solve(lp);
    if (sol.status != LpStatus::Optimal) throw InfeasibleAtReserve();
    Pricing pricing;
    pricing.p = sol.x;
    for (auto& price : pricing.p) price = std::max(price, 0.0);
    return pricing;
}

/// Greedy allocation followed by the restricted envy-free pricing LP.
inline Outcome refp_pipeline(const Market& market, OrderingPolicy policy = {},
                             const PricingOptions& opts = {}) {
    Outcome outcome;
    outcome.allocation = greedy_allocate(market, policy);
    outcome.pricing = restricted_ef_lp(market, outcome.allocation, opts);
    return outcome;
}

/** Decides, for a market at unit-copy granularity (all supplies 1) and a fixed
 * all-or-none allocation, whether any Walrasian equilibrium supports the
 * allocation. Losers are kept envy-free by requiring every bundle of their
 * demanded size to cost at least their reward; for single-minded bidders
 * (demand = degree) that is the single full-bundle row.
 */
inline bool check_we_existence(const Market& market, const Allocation& alloc) {
    const int n = market.num_goods();
    for (const auto& g : market.goods)
        if (g.supply != 1)
            throw std::invalid_argument("check_we_existence requires unit supplies");
    for (const auto& b : market.bidders)
        if (b.demand > static_cast<int>(b.edges.size()))
            throw std::invalid_argument("check_we_existence requires demand <= degree");

    LpProblem lp;
    lp.objective.assign(n, 0.0);
    detail::add_ir_constraints(market, alloc, lp);
    detail::add_compact_constraints(market, alloc, lp);

    for (int j = 0; j < market.num_bidders(); ++j) {
        const auto& b = market.bidders[j];
        if (alloc.bundle_size(j) > 0) continue;
        // Every size-I_j sub-bundle of j's edges must be out of reach.
        const int deg = static_cast<int>(b.edges.size());
        std::vector<int> pick(b.demand);
        std::iota(pick.begin(), pick.end(), 0);
        size_t emitted = 0;
        for (;;) {
            std::vector<double> row(n, 0.0);
            for (int idx : pick) row[b.edges[idx]] = 1.0;
            lp.add_constraint(std::move(row), Relation::GreaterEq, b.reward);
            if (++emitted > 100000)
                throw std::invalid_argument("loser bundle enumeration too large");
            int pos = b.demand - 1;
            while (pos >= 0 && pick[pos] == deg - b.demand + pos) --pos;
            if (pos < 0) break;
            ++pick[pos];
            for (int q = pos + 1; q < b.demand; ++q) pick[q] = pick[q - 1] + 1;
        }
    }
    for (int i = 0; i < n; ++i) {
        if (alloc.allocated_of(i) != 0) continue;
        std::vector<double> row(n, 0.0);
        row[i] = 1.0;
        lp.add_constraint(std::move(row), Relation::Eq, 0.0);
    }
    return solve(lp).status == LpStatus::Optimal;
}

/** Single-minded pricing LP: given an all-or-none allocation, maximize
 * revenue minus total loser slack, where each loser j must face a demanded
 * bundle priced at least R_j - alpha_j. Variables are the n prices followed
 * by one slack per loser.
 */
inline Outcome smlp_with(const Market& market, Allocation alloc) {
    if (!is_single_minded(market))
        throw std::invalid_argument("smlp requires a single-minded market");
    const int n = market.num_goods();
    const int m = market.num_bidders();

    std::vector<int> losers;
    for (int j = 0; j < m; ++j)
        if (alloc.bundle_size(j) < market.bidders[j].demand) losers.push_back(j);

    const int vars = n + static_cast<int>(losers.size());
    LpProblem lp;
    lp.objective.assign(vars, 0.0);
    for (int i = 0; i < n; ++i) lp.objective[i] = alloc.allocated_of(i);
    for (size_t a = 0; a < losers.size(); ++a) lp.objective[n + a] = -1.0;

    for (size_t a = 0; a < losers.size(); ++a) {
        std::vector<double> row(vars, 0.0);
        for (int i : market.bidders[losers[a]].edges) row[i] = 1.0;
        row[n + a] = 1.0;
        lp.add_constraint(std::move(row), Relation::GreaterEq, market.bidders[losers[a]].reward);
    }
    for (int j = 0; j < m; ++j) {
        if (alloc.bundle_size(j) == 0) continue;
        std::vector<double> row(vars, 0.0);
        for (int i = 0; i < n; ++i) row[i] = alloc.at(i, j);
        lp.add_constraint(std::move(row), Relation::LessEq, valuation(market, alloc, j));
    }

    LpSolution sol = solve(lp);
    if (sol.status != LpStatus::Optimal) throw std::logic_error("smlp LP unexpectedly unsolved");
    Outcome outcome;
    outcome.allocation = std::move(alloc);
    outcome.pricing.p.assign(sol.x.begin(), sol.x.begin() + n);
    for (auto& price : outcome.pricing.p) price = std::max(price, 0.0);
    return outcome;
}

/// Greedy utilitarian allocation plus the single-minded pricing LP.
inline Outcome smlp(const Market& market) {
    return smlp_with(market, greedy_allocate(market, {}));
}

/** Exact revenue-maximizing pricing for a fixed all-or-none allocation of a
 * single-minded market: each winner's lowest-id good is priced at its full
 * reward, everything else at zero, so revenue equals the allocation's
 * welfare.
 */
inline Outcome single_minded_revenue_max(const Market& market, Allocation alloc) {
    if (!is_single_minded(market))
        throw std::invalid_argument("single_minded_revenue_max requires a single-minded market");
    Outcome outcome;
    outcome.pricing = Pricing(market.num_goods());
    std::vector<char> owned(market.num_goods(), 0);
    for (int j : winners(market, alloc)) {
        for (int i : market.bidders[j].edges) {
            if (owned[i]) throw std::logic_error("two winners share a good");
            owned[i] = 1;
        }
        outcome.pricing.p[market.bidders[j].edges.front()] = market.bidders[j].reward;
    }
    outcome.allocation = std::move(alloc);
    return outcome;
}

}  // namespace refp
