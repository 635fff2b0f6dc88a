#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "refp/refp.hpp"

namespace {

refp::Market load_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--market", "cannot open " + path);
    nlohmann::json j;
    in >> j;
    refp::Market market = j.get<refp::Market>();
    refp::validate(market);
    return market;
}

refp::Outcome load_outcome(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--outcome", "cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j.get<refp::Outcome>();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw CLI::ValidationError("--out", "cannot write " + path);
    out << text;
}

refp::MarketVariant parse_variant(const std::string& name) {
    if (name == "si") return refp::MarketVariant::SizeInterchangeable;
    if (name == "single-minded") return refp::MarketVariant::SingleMinded;
    if (name == "singleton") return refp::MarketVariant::Singleton;
    throw CLI::ValidationError("--variant", "expected si, single-minded, or singleton");
}

void emit_suite(const std::vector<refp::AggregateRow>& rows, const std::string& out_prefix) {
    std::vector<std::string> groups;
    for (const auto& row : rows)
        if (std::find(groups.begin(), groups.end(), row.group) == groups.end())
            groups.push_back(row.group);
    for (const auto& group : groups) {
        std::ostringstream csv;
        refp::write_csv(csv, rows, group);
        if (out_prefix.empty() || out_prefix == "-") {
            std::cout << "# " << group << "\n" << csv.str();
        } else {
            std::string path = out_prefix + "-" + group + ".csv";
            write_text(path, csv.str());
            std::cout << "wrote " << path << "\n";
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"restricted envy-free pricing toolkit"};
    app.require_subcommand(1);

    // generate
    std::string gen_dist = "random-k", gen_variant = "si", gen_out;
    refp::RandomKConfig rk;
    refp::AdXConfig adx;
    uint64_t seed = 0;
    auto* gen = app.add_subcommand("generate", "generate a seeded market as JSON");
    gen->add_option("--dist", gen_dist, "random-k or adx")->check(CLI::IsMember({"random-k", "adx"}));
    gen->add_option("--n", rk.n, "goods (random-k)");
    gen->add_option("--m", rk.m, "bidders");
    gen->add_option("--p", rk.edge_prob, "edge probability (random-k)");
    gen->add_option("--k", rk.k, "target supply-to-demand ratio (random-k)");
    gen->add_option("--variant", gen_variant, "si, single-minded, or singleton (random-k)");
    gen->add_option("--users", adx.user_count, "simulated users (adx)");
    gen->add_option("--continue-prob", adx.continue_prob, "visit continuation probability (adx)");
    gen->add_option("--seed", seed, "generator seed");
    gen->add_option("--out", gen_out, "output file (default stdout)");

    // solve
    std::string solve_algo, solve_market, solve_out;
    auto* solve_cmd = app.add_subcommand("solve", "run one algorithm on a market");
    solve_cmd->add_option("--algo", solve_algo, "algorithm id")
        ->required()
        ->check(CLI::IsMember(refp::algorithm_ids()));
    solve_cmd->add_option("--market", solve_market, "market JSON file")->required();
    solve_cmd->add_option("--out", solve_out, "outcome JSON file (default stdout)");

    // check
    std::string check_market, check_outcome;
    auto* check_cmd = app.add_subcommand("check", "envy-freeness and clearance diagnostics");
    check_cmd->add_option("--market", check_market, "market JSON file")->required();
    check_cmd->add_option("--outcome", check_outcome, "outcome JSON file")->required();

    // experiment
    std::string exp_variant = "si", exp_out;
    std::vector<int> exp_n{5}, exp_m{5};
    std::vector<double> exp_p{0.5}, exp_k{1.0};
    std::vector<std::string> exp_algos;
    int exp_trials = 30;
    bool exp_time = false;
    auto* exp = app.add_subcommand("experiment", "run an algorithm suite over a market grid");
    exp->add_option("--n", exp_n, "goods grid");
    exp->add_option("--m", exp_m, "bidders grid");
    exp->add_option("--p", exp_p, "edge probability grid");
    exp->add_option("--k", exp_k, "ratio grid");
    exp->add_option("--variant", exp_variant, "si, single-minded, or singleton");
    exp->add_option("--algos", exp_algos, "algorithm ids")
        ->required()
        ->check(CLI::IsMember(refp::algorithm_ids()));
    exp->add_option("--trials", exp_trials, "trials per grid cell")->check(CLI::PositiveNumber);
    exp->add_option("--seed", seed, "master seed");
    exp->add_option("--out", exp_out, "output prefix, one CSV per group (default stdout)");
    exp->add_flag("--measure-time", exp_time,
                  "record wall-clock times (off by default so output is reproducible)");

    // tables
    std::string tab_out = "tables";
    int tab_trials = 0;
    bool tab_full = false;
    auto* tab = app.add_subcommand("tables", "run the four built-in experiment tables");
    tab->add_option("--out", tab_out, "output directory");
    tab->add_option("--trials", tab_trials, "override trials per grid cell")
        ->check(CLI::PositiveNumber);
    tab->add_option("--seed", seed, "master seed");
    tab->add_flag("--full", tab_full, "use the full-scale grids (slow)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            refp::Market market;
            if (gen_dist == "adx") {
                adx.seed = seed;
                market = refp::adx_market(adx);
            } else {
                rk.variant = parse_variant(gen_variant);
                rk.seed = seed;
                market = refp::random_k_market(rk);
            }
            write_text(gen_out, nlohmann::json(market).dump(2) + "\n");
        } else if (*solve_cmd) {
            refp::Market market = load_market(solve_market);
            refp::RunResult result = refp::run_algorithm(solve_algo, market);
            write_text(solve_out, nlohmann::json(result.outcome).dump(2) + "\n");
            const auto& rec = result.metrics;
            std::cout << "revenue " << refp::revenue(market, result.outcome) << "\n"
                      << "welfare " << refp::welfare(market, result.outcome.allocation) << "\n"
                      << "welfare_ratio " << rec.welfare_ratio << " revenue_ratio "
                      << rec.revenue_ratio << "\n"
                      << "ef_violation " << rec.ef_violation << " ef_loss " << rec.ef_loss << "\n"
                      << "mc_violation " << rec.mc_violation << " mc_loss " << rec.mc_loss << "\n"
                      << "time_ms " << rec.time_ms << "\n";
        } else if (*check_cmd) {
            refp::Market market = load_market(check_market);
            refp::Outcome outcome = load_outcome(check_outcome);
            if (!refp::is_feasible(market, outcome.allocation)) {
                std::cout << "allocation: infeasible\n";
                return 1;
            }
            refp::MetricsRecord rec = refp::metrics(market, outcome, 0.0, 0.0);
            int ef_count = 0, mc_count = 0;
            for (int j = 0; j < market.num_bidders(); ++j)
                if (!refp::is_envy_free(market, outcome, j)) {
                    std::cout << "EF violation: bidder " << j << "\n";
                    ++ef_count;
                }
            for (int i = 0; i < market.num_goods(); ++i)
                if (outcome.allocation.allocated_of(i) == 0 && outcome.pricing.p[i] > 0) {
                    std::cout << "MC violation: good " << i << " priced " << outcome.pricing.p[i]
                              << " but unallocated\n";
                    ++mc_count;
                }
            std::cout << "allocation: feasible\n"
                      << "EF violations " << ef_count << " (rate " << rec.ef_violation << ", loss "
                      << rec.ef_loss << ")\n"
                      << "MC violations " << mc_count << " (rate " << rec.mc_violation << ", loss "
                      << rec.mc_loss << ")\n"
                      << "restricted_envy_free "
                      << (refp::is_restricted_envy_free(market, outcome) ? "yes" : "no") << "\n";
        } else if (*exp) {
            std::vector<refp::SuiteCombo> combos;
            for (int n : exp_n)
                for (int m : exp_m)
                    for (double p : exp_p)
                        for (double k : exp_k) {
                            char label[96];
                            std::snprintf(label, sizeof(label), "n=%d m=%d p=%.2f k=%.2f", n, m, p,
                                          k);
                            refp::MarketVariant variant = parse_variant(exp_variant);
                            std::string group = k < 1 ? "overdemanded" : "underdemanded";
                            combos.push_back({label, group, [=](uint64_t s) {
                                                  refp::RandomKConfig cfg;
                                                  cfg.n = n;
                                                  cfg.m = m;
                                                  cfg.edge_prob = p;
                                                  cfg.k = k;
                                                  cfg.variant = variant;
                                                  cfg.seed = s;
                                                  return refp::random_k_market(cfg);
                                              }});
                        }
            emit_suite(refp::run_suite(combos, exp_algos, exp_trials, seed, exp_time), exp_out);
        } else if (*tab) {
            std::filesystem::create_directories(tab_out);
            for (const auto& spec : refp::builtin_tables(tab_full)) {
                int trials = tab_trials > 0 ? tab_trials : spec.trials;
                auto rows = refp::run_suite(spec.combos, spec.algorithms, trials, seed, true);
                emit_suite(rows, (std::filesystem::path(tab_out) / spec.name).string());
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
