#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "market.hpp"
#include "matchflow.hpp"

namespace refp {

/** Expands a singleton market (every bidder demands one unit) into a per-unit
 * valuation matrix: each good becomes supply-many unit rows valuing connected
 * bidders at their rewards. The copy-to-good mapping is recorded so outcomes
 * can be folded back onto the market's goods.
 */
inline ValuationMatrix singleton_to_matrix(const Market& market) {
    for (const auto& b : market.bidders)
        if (b.demand != 1)
            throw std::invalid_argument("singleton_to_matrix requires unit demands");
    int rows = 0;
    for (const auto& g : market.goods) rows += g.supply;
    ValuationMatrix vm(rows, market.num_bidders());
    vm.orig_goods = market.num_goods();
    int r = 0;
    for (int i = 0; i < market.num_goods(); ++i) {
        for (int c = 0; c < market.goods[i].supply; ++c, ++r) {
            vm.row_good[r] = i;
            for (int j = 0; j < market.num_bidders(); ++j)
                if (market.has_edge(i, j)) vm.at(r, j) = market.bidders[j].reward;
        }
    }
    return vm;
}

namespace detail {

inline double matching_weight_without_row(const ValuationMatrix& vm, int skip_row) {
    ValuationMatrix reduced(vm.rows - 1, vm.cols);
    int r = 0;
    for (int row = 0; row < vm.rows; ++row) {
        if (row == skip_row) continue;
        for (int c = 0; c < vm.cols; ++c) reduced.at(r, c) = vm.at(row, c);
        ++r;
    }
    return max_weight_matching(reduced).weight;
}

}  // namespace detail

/** MaxWE: maximum-weight matching with VCG-style prices p_i = w(V) - w(V_-i).
 * Copies of one good carry the same price (asserted within 1e-6); the folded
 * outcome is a Walrasian equilibrium for unit-demand bidders.
 */
inline Outcome max_we(const ValuationMatrix& vm) {
    MatchingResult matching = max_weight_matching(vm);

    std::vector<double> copy_price(vm.rows, 0.0);
    std::vector<double> good_price(vm.orig_goods, -1.0);
    for (int r = 0; r < vm.rows; ++r) {
        copy_price[r] = matching.weight - detail::matching_weight_without_row(vm, r);
        int good = vm.row_good[r];
        if (good_price[good] < 0)
            good_price[good] = copy_price[r];
        else if (std::fabs(good_price[good] - copy_price[r]) > 1e-6)
            throw std::logic_error("copies of one good received unequal prices");
    }

    Outcome outcome;
    outcome.allocation = Allocation(vm.orig_goods, vm.cols);
    for (int r = 0; r < vm.rows; ++r)
        if (matching.row_to_col[r] >= 0) ++outcome.allocation.at(vm.row_good[r], matching.row_to_col[r]);
    outcome.pricing.p.assign(vm.orig_goods, 0.0);
    for (int i = 0; i < vm.orig_goods; ++i)
        outcome.pricing.p[i] = std::max(0.0, good_price[i] < 0 ? 0.0 : good_price[i]);
    return outcome;
}

/** MaxWErApprox: for each distinct matched-edge value r of the initial
 * matching, append two dummy bidders per unit row valuing only that row at r,
 * run MaxWE on the augmented matrix, and keep only real-bidder matches (rows
 * taken by dummies stay unallocated at their computed price, which is at
 * least r). Returns the maximum-revenue outcome over all r.
 */
inline Outcome max_wer_approx(const ValuationMatrix& vm) {
    MatchingResult initial = max_weight_matching(vm);
    std::vector<double> reserves;
    for (int r = 0; r < vm.rows; ++r)
        if (initial.row_to_col[r] >= 0) reserves.push_back(vm.at(r, initial.row_to_col[r]));
    std::sort(reserves.begin(), reserves.end());
    reserves.erase(std::unique(reserves.begin(), reserves.end()), reserves.end());

    Outcome best;
    best.allocation = Allocation(vm.orig_goods, vm.cols);
    best.pricing = Pricing(vm.orig_goods);
    double best_revenue = -1;
    for (double r : reserves) {
        ValuationMatrix augmented(vm.rows, vm.cols + 2 * vm.rows);
        augmented.row_good = vm.row_good;
        augmented.orig_goods = vm.orig_goods;
        for (int row = 0; row < vm.rows; ++row) {
            for (int c = 0; c < vm.cols; ++c) augmented.at(row, c) = vm.at(row, c);
            augmented.at(row, vm.cols + 2 * row) = r;
            augmented.at(row, vm.cols + 2 * row + 1) = r;
        }
        Outcome we = max_we(augmented);
        Outcome folded;
        folded.allocation = Allocation(vm.orig_goods, vm.cols);
        for (int i = 0; i < vm.orig_goods; ++i)
            for (int c = 0; c < vm.cols; ++c) folded.allocation.at(i, c) = we.allocation.at(i, c);
        folded.pricing = we.pricing;
        double rho = 0;
        for (int i = 0; i < vm.orig_goods; ++i)
            rho += folded.allocation.allocated_of(i) * folded.pricing.p[i];
        if (rho > best_revenue + 1e-12) {
            best_revenue = rho;
            best = std::move(folded);
        }
    }
    return best;
}

/** Single-minded WE approximation: repeatedly take the most-demanded good,
 * give it (and the rest of their bundle) to the richest bidder wanting it at
 * price R_j, and drop everyone whose bundle now intersects an allocated good.
 * Never prices an unallocated good, so it commits no clearance violations.
 */
inline Outcome single_minded_approx(const Market& market) {
    if (!is_single_minded(market))
        throw std::invalid_argument("single_minded_approx requires a single-minded market");
    const int n = market.num_goods();
    const int m = market.num_bidders();
    Outcome outcome;
    outcome.allocation = Allocation(n, m);
    outcome.pricing = Pricing(n);

    std::vector<char> good_taken(n, 0), bidder_out(m, 0);
    for (;;) {
        auto available = [&](int j) {
            if (bidder_out[j]) return false;
            for (int i : market.bidders[j].edges)
                if (good_taken[i]) return false;
            return true;
        };
        std::vector<int> demand_count(n, 0);
        bool any = false;
        for (int j = 0; j < m; ++j) {
            if (!available(j)) continue;
            any = true;
            for (int i : market.bidders[j].edges) ++demand_count[i];
        }
        if (!any) break;
        int good = 0;
        for (int i = 1; i < n; ++i)
            if (demand_count[i] > demand_count[good]) good = i;
        int chosen = -1;
        for (int j = 0; j < m; ++j) {
            if (!available(j) || !market.has_edge(good, j)) continue;
            if (chosen < 0 || market.bidders[j].reward > market.bidders[chosen].reward) chosen = j;
        }
        for (int i : market.bidders[chosen].edges) {
            outcome.allocation.at(i, chosen) = 1;
            good_taken[i] = 1;
        }
        outcome.pricing.p[good] = market.bidders[chosen].reward;
        bidder_out[chosen] = 1;
        for (int j = 0; j < m; ++j) {
            if (bidder_out[j]) continue;
            for (int i : market.bidders[j].edges)
                if (good_taken[i]) {
                    bidder_out[j] = 1;
                    break;
                }
        }
    }
    return outcome;
}

/** Uniform-price EFP approximation: try each candidate price q = R_j / I_j,
 * price every good at q, and serve bidders in descending R/I order whenever
 * the price is affordable (and, with `limited`, residual connected supply
 * suffices). Returns the maximum-revenue outcome.
 */
inline Outcome unlimited_supply_approx(const Market& market, bool limited = true) {
    const int n = market.num_goods();
    const int m = market.num_bidders();
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        double ka = market.bidders[a].reward / market.bidders[a].demand;
        double kb = market.bidders[b].reward / market.bidders[b].demand;
        if (ka != kb) return ka > kb;
        return a < b;
    });

    std::vector<double> candidates;
    for (int j = 0; j < m; ++j) candidates.push_back(market.bidders[j].reward / market.bidders[j].demand);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    Outcome best;
    best.allocation = Allocation(n, m);
    best.pricing = Pricing(n);
    double best_revenue = -1;
    for (double q : candidates) {
        Outcome trial;
        trial.allocation = Allocation(n, m);
        trial.pricing.p.assign(n, q);
        std::vector<int> remaining(n);
        for (int i = 0; i < n; ++i) remaining[i] = market.goods[i].supply;
        int units = 0;
        for (int j : order) {
            const auto& b = market.bidders[j];
            if (b.reward - q * b.demand < 0) continue;
            if (limited) {
                int available = 0;
                for (int i : b.edges) available += remaining[i];
                if (available < b.demand) continue;
            }
            std::vector<int> goods = b.edges;
            std::sort(goods.begin(), goods.end(), [&](int a, int c) {
                if (remaining[a] != remaining[c]) return remaining[a] > remaining[c];
                return a < c;
            });
            int need = b.demand;
            for (int i : goods) {
                int take = limited ? std::min(need, remaining[i]) : need;
                if (take == 0) continue;
                trial.allocation.at(i, j) += take;
                if (limited) remaining[i] -= take;
                need -= take;
                if (need == 0) break;
            }
            units += b.demand;
        }
        double rho = q * units;
        if (rho > best_revenue + 1e-12) {
            best_revenue = rho;
            best = std::move(trial);
        }
    }
    return best;
}

}  // namespace refp
