#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <thread>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "allocate.hpp"
#include "baselines.hpp"
#include "generators.hpp"
#include "market.hpp"
#include "pricing.hpp"
#include "revenue_max.hpp"

namespace refp {

inline const std::vector<std::string>& algorithm_ids() {
    static const std::vector<std::string> ids = {
        "MaxWErApprox",          "SingleMindedApprox",    "UnlimitedSupply",
        "SMLP-Greedy-Utilitarian", "SMLP-Greedy-Egalitarian", "SMLP-Optimal-Utilitarian",
        "SMLP-Optimal-Egalitarian", "LP-Greedy-Utilitarian", "LP-Greedy-Egalitarian",
        "LP-Optimal-Utilitarian", "LP-Optimal-Egalitarian", "UnlimitedSupply-SI",
    };
    return ids;
}

namespace detail {

inline Outcome dispatch_algorithm(const std::string& algo, const Market& market) {
    const OrderingPolicy greedy_util{BidderOrder::Utilitarian, GoodOrder::DescendingSupply};
    const OrderingPolicy greedy_egal{BidderOrder::Egalitarian, GoodOrder::DescendingSupply};

    if (algo == "MaxWErApprox") {
        if (!is_singleton(market))
            throw std::invalid_argument("MaxWErApprox requires a singleton market");
        return max_wer_approx(singleton_to_matrix(market));
    }
    if (algo == "SingleMindedApprox") return single_minded_approx(market);
    if (algo == "UnlimitedSupply" || algo == "UnlimitedSupply-SI")
        return unlimited_supply_approx(market, /*limited=*/true);
    if (algo == "SMLP-Greedy-Utilitarian") return smlp_with(market, greedy_allocate(market, greedy_util));
    if (algo == "SMLP-Greedy-Egalitarian") return smlp_with(market, greedy_allocate(market, greedy_egal));
    if (algo == "SMLP-Optimal-Utilitarian")
        return smlp_with(market, optimal_allocate(market, Objective::Utilitarian));
    if (algo == "SMLP-Optimal-Egalitarian")
        return smlp_with(market, optimal_allocate(market, Objective::Egalitarian));
    if (algo == "LP-Greedy-Utilitarian") return refp_revenue_max(market, greedy_util).outcome;
    if (algo == "LP-Greedy-Egalitarian") return refp_revenue_max(market, greedy_egal).outcome;
    if (algo == "LP-Optimal-Utilitarian") return refp_revenue_max(market, Objective::Utilitarian).outcome;
    if (algo == "LP-Optimal-Egalitarian") return refp_revenue_max(market, Objective::Egalitarian).outcome;
    throw std::invalid_argument("unknown algorithm id: " + algo);
}

}  // namespace detail

struct RunResult {
    Outcome outcome;
    MetricsRecord metrics;
};

/** Runs one named algorithm on one market: computes the optimal welfare once
 * (untimed), wall-clocks the algorithm itself, and scores the outcome.
 * With measure_time false the time metric is reported as zero, which keeps
 * repeated experiment runs byte-identical.
 */
inline RunResult run_algorithm(const std::string& algo, const Market& market,
                               bool measure_time = true) {
    double opt = welfare(market, optimal_allocate(market, Objective::Utilitarian));
    auto start = std::chrono::steady_clock::now();
    Outcome outcome = detail::dispatch_algorithm(algo, market);
    auto stop = std::chrono::steady_clock::now();
    double elapsed_ms =
        measure_time ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
    MetricsRecord rec = metrics(market, outcome, opt, elapsed_ms);
    return {std::move(outcome), rec};
}

/// One cell of an experiment grid: a labeled seeded market factory. An empty
/// group means "bucket each trial by its realized supply-to-demand ratio".
struct SuiteCombo {
    std::string label;
    std::string group;
    std::function<Market(uint64_t)> make;
};

struct AggregateRow {
    std::string group;
    std::string algorithm;
    MetricsRecord mean;
    double score = 0;
};

/** Per-dimension summary score: distance from the best algorithm in each of
 * the seven dimensions, summed and normalized into [0,1]; 0 marks a top
 * performer. Welfare and revenue want max, everything else min.
 */
inline std::vector<double> summary_score(const std::vector<MetricsRecord>& rows) {
    const size_t count = rows.size();
    std::vector<double> raw(count, 0.0);
    if (count == 0) return raw;
    auto dim = [&](auto get, bool maximize) {
        double best = get(rows[0]);
        for (const auto& r : rows) best = maximize ? std::max(best, get(r)) : std::min(best, get(r));
        for (size_t a = 0; a < count; ++a) raw[a] += std::fabs(get(rows[a]) - best);
    };
    dim([](const MetricsRecord& r) { return r.welfare_ratio; }, true);
    dim([](const MetricsRecord& r) { return r.revenue_ratio; }, true);
    dim([](const MetricsRecord& r) { return r.ef_violation; }, false);
    dim([](const MetricsRecord& r) { return r.ef_loss; }, false);
    dim([](const MetricsRecord& r) { return r.mc_violation; }, false);
    dim([](const MetricsRecord& r) { return r.mc_loss; }, false);
    dim([](const MetricsRecord& r) { return r.time_ms; }, false);
    double top = *std::max_element(raw.begin(), raw.end());
    if (top > 0)
        for (auto& s : raw) s /= top;
    return raw;
}

/// Thread count for suite runs, from the REFP_THREADS environment variable
/// (default 1). Results are identical at any thread count: each trial's seed
/// depends only on the master seed and its grid position, and aggregation
/// happens serially after all trials finish.
inline int suite_thread_count() {
    const char* env = std::getenv("REFP_THREADS");
    if (!env) return 1;
    int value = std::atoi(env);
    return value < 1 ? 1 : value;
}

/** Runs every (combo, algorithm) cell for `trials` seeded trials and returns
 * mean metrics per (group, algorithm) with summary scores computed within
 * each group. Trial seeds derive deterministically from the master seed.
 */
inline std::vector<AggregateRow> run_suite(const std::vector<SuiteCombo>& combos,
                                           const std::vector<std::string>& algorithms, int trials,
                                           uint64_t master_seed, bool measure_time = true) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");

    struct TrialResult {
        std::string group;
        std::vector<MetricsRecord> records;  // one per algorithm
    };
    const size_t tasks = combos.size() * static_cast<size_t>(trials);
    std::vector<TrialResult> results(tasks);

    auto run_task = [&](size_t task) {
        size_t c = task / trials;
        int t = static_cast<int>(task % trials);
        uint64_t seed = master_seed + 1000003ULL * c + static_cast<uint64_t>(t);
        Market market = combos[c].make(seed);
        std::string group = combos[c].group;
        if (group.empty()) {
            long long supply = 0, demand = 0;
            for (const auto& g : market.goods) supply += g.supply;
            for (const auto& b : market.bidders) demand += b.demand;
            group = (demand > 0 && supply < demand) ? "overdemanded" : "underdemanded";
        }
        results[task].group = std::move(group);
        for (const auto& algo : algorithms)
            results[task].records.push_back(run_algorithm(algo, market, measure_time).metrics);
    };

    int threads = std::min<int>(suite_thread_count(), static_cast<int>(tasks));
    if (threads <= 1) {
        for (size_t task = 0; task < tasks; ++task) run_task(task);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (size_t task = next++; task < tasks; task = next++) run_task(task);
            });
        for (auto& th : pool) th.join();
    }

    struct Accum {
        MetricsRecord sum;
        long count = 0;
    };
    std::map<std::pair<std::string, std::string>, Accum> cells;
    std::vector<std::string> group_order;
    for (const auto& result : results) {
        if (std::find(group_order.begin(), group_order.end(), result.group) == group_order.end())
            group_order.push_back(result.group);
        for (size_t a = 0; a < algorithms.size(); ++a) {
            const MetricsRecord& rec = result.records[a];
            auto& acc = cells[{result.group, algorithms[a]}];
            acc.sum.welfare_ratio += rec.welfare_ratio;
            acc.sum.revenue_ratio += rec.revenue_ratio;
            acc.sum.ef_violation += rec.ef_violation;
            acc.sum.ef_loss += rec.ef_loss;
            acc.sum.mc_violation += rec.mc_violation;
            acc.sum.mc_loss += rec.mc_loss;
            acc.sum.time_ms += rec.time_ms;
            ++acc.count;
        }
    }

    std::vector<AggregateRow> rows;
    for (const auto& group : group_order) {
        std::vector<MetricsRecord> means;
        std::vector<std::string> present;
        for (const auto& algo : algorithms) {
            auto it = cells.find({group, algo});
            if (it == cells.end()) continue;
            const auto& acc = it->second;
            MetricsRecord mean = acc.sum;
            mean.welfare_ratio /= acc.count;
            mean.revenue_ratio /= acc.count;
            mean.ef_violation /= acc.count;
            mean.ef_loss /= acc.count;
            mean.mc_violation /= acc.count;
            mean.mc_loss /= acc.count;
            mean.time_ms /= acc.count;
            means.push_back(mean);
            present.push_back(algo);
        }
        std::vector<double> scores = summary_score(means);
        for (size_t a = 0; a < present.size(); ++a)
            rows.push_back({group, present[a], means[a], scores[a]});
    }
    return rows;
}

/// A named experiment: market grid plus the algorithms that can run on it.
struct TableSpec {
    std::string name;
    std::vector<SuiteCombo> combos;
    std::vector<std::string> algorithms;
    int trials = 30;
};

namespace detail {

inline std::vector<SuiteCombo> random_k_grid(MarketVariant variant, const std::vector<int>& sizes,
                                             const std::vector<double>& probs,
                                             const std::vector<double>& ratios) {
    std::vector<SuiteCombo> combos;
    for (int n : sizes)
        for (int m : sizes)
            for (double p : probs)
                for (double k : ratios) {
                    char label[96];
                    std::snprintf(label, sizeof(label), "n=%d m=%d p=%.2f k=%.2f", n, m, p, k);
                    std::string group = k < 1 ? "overdemanded" : "underdemanded";
                    combos.push_back({label, group, [=](uint64_t seed) {
                                          RandomKConfig cfg;
                                          cfg.n = n;
                                          cfg.m = m;
                                          cfg.edge_prob = p;
                                          cfg.k = k;
                                          cfg.variant = variant;
                                          cfg.seed = seed;
                                          return random_k_market(cfg);
                                      }});
                }
    return combos;
}

}  // namespace detail

/** The four built-in experiment tables: single-minded, singleton, and
 * size-interchangeable random markets plus the simulated ad-exchange market.
 * The default grids are desk-scale; `full` restores the large grids (slow).
 */
inline std::vector<TableSpec> builtin_tables(bool full = false) {
    std::vector<int> sizes = full ? std::vector<int>{5, 10, 15, 20} : std::vector<int>{5, 10};
    std::vector<double> probs = full ? std::vector<double>{0.25, 0.5, 0.75, 1.0}
                                     : std::vector<double>{0.25, 0.75};
    std::vector<double> ratios =
        full ? std::vector<double>{0.25, 0.33, 0.5, 2, 3, 4} : std::vector<double>{0.5, 2};
    int trials = full ? 100 : 30;

    std::vector<std::string> smlp_algos = {
        "SingleMindedApprox",       "UnlimitedSupply",          "SMLP-Greedy-Utilitarian",
        "SMLP-Greedy-Egalitarian",  "SMLP-Optimal-Utilitarian", "SMLP-Optimal-Egalitarian",
    };
    std::vector<std::string> lp_algos = {
        "LP-Greedy-Utilitarian", "LP-Greedy-Egalitarian",
        "LP-Optimal-Utilitarian", "LP-Optimal-Egalitarian",
    };
    std::vector<std::string> singleton_algos = lp_algos;
    singleton_algos.insert(singleton_algos.begin(), "MaxWErApprox");
    std::vector<std::string> si_algos = lp_algos;
    si_algos.insert(si_algos.begin(), "UnlimitedSupply-SI");

    std::vector<SuiteCombo> adx_combos;
    for (int m : std::vector<int>{5, 10}) {
        char label[64];
        std::snprintf(label, sizeof(label), "adx m=%d", m);
        adx_combos.push_back({label, "", [=](uint64_t seed) {
                                  AdXConfig cfg;
                                  cfg.m = m;
                                  cfg.seed = seed;
                                  return adx_market(cfg);
                              }});
    }

    return {
        {"single-minded", detail::random_k_grid(MarketVariant::SingleMinded, sizes, probs, ratios),
         smlp_algos, trials},
        {"singleton", detail::random_k_grid(MarketVariant::Singleton, sizes, probs, ratios),
         singleton_algos, trials},
        {"size-interchangeable",
         detail::random_k_grid(MarketVariant::SizeInterchangeable, sizes, probs, ratios), si_algos,
         trials},
        {"adx", adx_combos, si_algos, trials},
    };
}

/// Writes rows of one group in the fixed table layout.
inline void write_csv(std::ostream& os, const std::vector<AggregateRow>& rows,
                      const std::string& group) {
    os << "Algorithm,Welfare,Revenue,EF,EF Loss,MC,MC Loss,Time,Score\n";
    char buf[160];
    for (const auto& row : rows) {
        if (row.group != group) continue;
        std::snprintf(buf, sizeof(buf), "%s,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f",
                      row.algorithm.c_str(), row.mean.welfare_ratio, row.mean.revenue_ratio,
                      row.mean.ef_violation, row.mean.ef_loss, row.mean.mc_violation,
                      row.mean.mc_loss, row.mean.time_ms, row.score);
        os << buf << "\n";
    }
}

}  // namespace refp
