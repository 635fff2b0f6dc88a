#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <vector>

#include "market.hpp"

namespace refp {

/** Per-unit valuation matrix: rows are unit goods (possibly copies of a
 * market good), columns are bidders. row_good maps each row back to the
 * originating good id; for raw matrices it is the identity.
 */
struct ValuationMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;      // row-major
    std::vector<int> row_good;  // row -> original good id
    int orig_goods = 0;

    ValuationMatrix() = default;
    ValuationMatrix(int rows_, int cols_)
        : rows(rows_), cols(cols_), v(static_cast<size_t>(rows_) * cols_, 0.0),
          row_good(rows_), orig_goods(rows_) {
        std::iota(row_good.begin(), row_good.end(), 0);
    }

    double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }
};

struct MatchingResult {
    std::vector<int> row_to_col;  // -1 when unmatched (or matched at zero value)
    double weight = 0;
};

/** Maximum-weight bipartite matching via the Hungarian method on a
 * square-padded cost matrix (costs are negated values, zero padding).
 * Deterministic. Matches carrying non-positive value are reported as
 * unmatched.
 */
inline MatchingResult max_weight_matching(const ValuationMatrix& vm) {
    MatchingResult result;
    result.row_to_col.assign(vm.rows, -1);
    if (vm.rows == 0 || vm.cols == 0) return result;

    const int size = std::max(vm.rows, vm.cols);
    const double inf = std::numeric_limits<double>::infinity();
    auto cost = [&](int r, int c) -> double {
        if (r < vm.rows && c < vm.cols) return -vm.at(r, c);
        return 0.0;
    };

    // Potentials-based O(size^3) assignment, 1-indexed (e-maxx formulation).
    std::vector<double> u(size + 1, 0), pot(size + 1, 0);
    std::vector<int> p(size + 1, 0), way(size + 1, 0);
    for (int i = 1; i <= size; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(size + 1, inf);
        std::vector<char> used(size + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            double delta = inf;
            for (int j = 1; j <= size; ++j) {
                if (used[j]) continue;
                double cur = cost(i0 - 1, j - 1) - u[i0] - pot[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= size; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    pot[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    for (int j = 1; j <= size; ++j) {
        int r = p[j] - 1, c = j - 1;
        if (r < vm.rows && c < vm.cols && vm.at(r, c) > 0) {
            result.row_to_col[r] = c;
            result.weight += vm.at(r, c);
        }
    }
    return result;
}

/** Source/goods/bidders/sink network with integral capacities. Node ids:
 * 0 = source, 1..n goods, n+1..n+m bidders, n+m+1 = sink.
 */
struct FlowNetwork {
    struct Edge {
        int to;
        int cap;
        int flow = 0;
    };
    int node_count = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> adj;
    int n = 0, m = 0;

    explicit FlowNetwork(int nodes) : node_count(nodes), adj(nodes) {}

    void add_edge(int from, int to, int cap) {
        adj[from].push_back(static_cast<int>(edges.size()));
        edges.push_back({to, cap});
        adj[to].push_back(static_cast<int>(edges.size()));
        edges.push_back({from, 0});
    }

    int source() const { return 0; }
    int sink() const { return n + m + 1; }
    int good_node(int i) const { return 1 + i; }
    int bidder_node(int j) const { return 1 + n + j; }
};

/** Network whose max flow answers whether every bidder in `winner_set` can be
 * exactly fulfilled: source->good at supply, good->bidder at min(supply,
 * demand) along market edges, bidder->sink at demand.
 */
inline FlowNetwork make_winner_network(const Market& market, const std::vector<int>& winner_set) {
    const int n = market.num_goods();
    const int m = market.num_bidders();
    FlowNetwork net(n + m + 2);
    net.n = n;
    net.m = m;
    for (int i = 0; i < n; ++i) net.add_edge(net.source(), net.good_node(i), market.goods[i].supply);
    for (int j : winner_set) {
        for (int i : market.bidders[j].edges)
            net.add_edge(net.good_node(i), net.bidder_node(j),
                         std::min(market.goods[i].supply, market.bidders[j].demand));
        net.add_edge(net.bidder_node(j), net.sink(), market.bidders[j].demand);
    }
    return net;
}

/// Edmonds-Karp integral max flow.
inline int max_flow(FlowNetwork& net) {
    int total = 0;
    const int s = net.source(), t = net.sink();
    for (;;) {
        std::vector<int> parent_edge(net.node_count, -1);
        std::vector<char> seen(net.node_count, 0);
        std::queue<int> q;
        q.push(s);
        seen[s] = 1;
        while (!q.empty() && !seen[t]) {
            int u = q.front();
            q.pop();
            for (int e : net.adj[u]) {
                const auto& edge = net.edges[e];
                if (seen[edge.to] || edge.cap - edge.flow <= 0) continue;
                seen[edge.to] = 1;
                parent_edge[edge.to] = e;
                q.push(edge.to);
            }
        }
        if (!seen[t]) break;
        int bottleneck = std::numeric_limits<int>::max();
        for (int v = t; v != s;) {
            int e = parent_edge[v];
            bottleneck = std::min(bottleneck, net.edges[e].cap - net.edges[e].flow);
            v = net.edges[e ^ 1].to;
        }
        for (int v = t; v != s;) {
            int e = parent_edge[v];
            net.edges[e].flow += bottleneck;
            net.edges[e ^ 1].flow -= bottleneck;
            v = net.edges[e ^ 1].to;
        }
        total += bottleneck;
    }
    return total;
}

/// True iff some feasible allocation fulfills exactly the bidders in winner_set.
inline bool winner_set_feasible(const Market& market, const std::vector<int>& winner_set) {
    int demand = 0;
    for (int j : winner_set) demand += market.bidders[j].demand;
    FlowNetwork net = make_winner_network(market, winner_set);
    return max_flow(net) == demand;
}

/** Reads the good->bidder flows of a saturating max flow back into an
 * allocation where every winner is exactly fulfilled. The flow must already
 * have been computed and must saturate the winners' total demand.
 */
inline Allocation extract_allocation(const FlowNetwork& net, const Market& market,
                                     const std::vector<int>& winner_set) {
    Allocation alloc(market.num_goods(), market.num_bidders());
    for (int i = 0; i < net.n; ++i) {
        for (int e : net.adj[net.good_node(i)]) {
            const auto& edge = net.edges[e];
            if (edge.to > net.n && edge.to <= net.n + net.m && edge.flow > 0)
                alloc.at(i, edge.to - net.n - 1) = edge.flow;
        }
    }
    for (int j : winner_set)
        if (alloc.bundle_size(j) != market.bidders[j].demand)
            throw std::logic_error("flow does not saturate winner demands");
    return alloc;
}

}  // namespace refp
