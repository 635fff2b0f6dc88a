#pragma once

#include <nlohmann/json.hpp>

#include "market.hpp"

// Market/Outcome JSON schemas used by the CLI and experiment harness.
// Markets: {"goods":[{"id","supply"}...],"bidders":[{"id","demand","reward","edges":[...]}...]}
// Outcomes: {"allocation":[[row per good]...],"prices":[...]}

namespace refp {

inline void to_json(nlohmann::json& j, const GoodSpec& g) {
    j = nlohmann::json{{"id", g.id}, {"supply", g.supply}};
}

inline void from_json(const nlohmann::json& j, GoodSpec& g) {
    j.at("id").get_to(g.id);
    j.at("supply").get_to(g.supply);
}

inline void to_json(nlohmann::json& j, const BidderSpec& b) {
    j = nlohmann::json{
        {"id", b.id}, {"demand", b.demand}, {"reward", b.reward}, {"edges", b.edges}};
}

inline void from_json(const nlohmann::json& j, BidderSpec& b) {
    j.at("id").get_to(b.id);
    j.at("demand").get_to(b.demand);
    j.at("reward").get_to(b.reward);
    j.at("edges").get_to(b.edges);
    std::sort(b.edges.begin(), b.edges.end());
}

inline void to_json(nlohmann::json& j, const Market& market) {
    j = nlohmann::json{{"goods", market.goods}, {"bidders", market.bidders}};
}

inline void from_json(const nlohmann::json& j, Market& market) {
    j.at("goods").get_to(market.goods);
    j.at("bidders").get_to(market.bidders);
}

inline void to_json(nlohmann::json& j, const Outcome& outcome) {
    auto rows = nlohmann::json::array();
    for (int i = 0; i < outcome.allocation.n; ++i) {
        auto row = nlohmann::json::array();
        for (int b = 0; b < outcome.allocation.m; ++b) row.push_back(outcome.allocation.at(i, b));
        rows.push_back(std::move(row));
    }
    j = nlohmann::json{{"allocation", rows}, {"prices", outcome.pricing.p}};
}

inline void from_json(const nlohmann::json& j, Outcome& outcome) {
    const auto& rows = j.at("allocation");
    int n = static_cast<int>(rows.size());
    int m = n > 0 ? static_cast<int>(rows[0].size()) : 0;
    outcome.allocation = Allocation(n, m);
    for (int i = 0; i < n; ++i)
        for (int b = 0; b < m; ++b) outcome.allocation.at(i, b) = rows[i][b].get<int>();
    j.at("prices").get_to(outcome.pricing.p);
}

}  // namespace refp
