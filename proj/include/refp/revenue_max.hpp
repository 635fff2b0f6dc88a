#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "allocate.hpp"
#include "market.hpp"
#include "pricing.hpp"

namespace refp {

struct RevenueMaxResult {
    Outcome outcome;
    double reserve = 0;
    double revenue = 0;
};

/** Revenue-maximizing REFP heuristic: take an initial allocation, derive
 * candidate reserves {0} and R_j / x_ij over its positive entries, and for
 * each candidate re-allocate respecting the reserve and price with the
 * revenue-objective LP at that reserve. Returns the best revenue seen; ties
 * break toward the smaller reserve. Candidate 0 always succeeds, so the
 * heuristic never does worse than the plain pipeline.
 */
inline RevenueMaxResult refp_revenue_max(const Market& market, const AllocatorChoice& allocator) {
    Allocation initial = allocate(market, allocator);

    std::vector<double> candidates{0.0};
    for (int j = 0; j < market.num_bidders(); ++j)
        for (int i : market.bidders[j].edges)
            if (initial.at(i, j) > 0)
                candidates.push_back(market.bidders[j].reward / initial.at(i, j));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    RevenueMaxResult best;
    bool have_best = false;
    for (double r : candidates) {
        Allocation alloc = allocate_with_reserve(market, r, allocator);
        PricingOptions opts;
        opts.reserve = r;
        Pricing pricing;
        try {
            pricing = restricted_ef_lp(market, alloc, opts);
        } catch (const InfeasibleAtReserve&) {
            continue;  // a winner may be priced out by compact-condition chains
        }
        Outcome outcome{std::move(alloc), std::move(pricing)};
        double rho = revenue(market, outcome);
        if (!have_best || rho > best.revenue + 1e-9) {
            best = {std::move(outcome), r, rho};
            have_best = true;
        }
    }
    return best;
}

}  // namespace refp
