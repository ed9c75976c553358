#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "ucn/error.hpp"
#include "ucn/graph.hpp"

using namespace ucn;

namespace {

// Every simple path in the skeleton, checked node by node.
bool d_separated_by_paths(const UnrolledDag& dag, std::size_t x, std::size_t y,
                          const std::set<std::size_t>& z) {
    const auto count = dag.node_count();
    std::vector<std::set<std::size_t>> descendants(count);
    std::function<void(std::size_t, std::size_t)> mark = [&](std::size_t root, std::size_t v) {
        descendants[root].insert(v);
        for (auto c : dag.children(v)) mark(root, c);
    };
    for (std::size_t v = 0; v < count; ++v) mark(v, v);
    auto is_parent = [&](std::size_t a, std::size_t b) {
        const auto& p = dag.parents(b);
        return std::find(p.begin(), p.end(), a) != p.end();
    };

    std::vector<std::size_t> path{x};
    std::vector<char> on_path(count, 0);
    on_path[x] = 1;
    std::function<bool(std::size_t)> active_path = [&](std::size_t v) -> bool {
        if (v == y) {
            for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                const auto prev = path[i - 1], mid = path[i], next = path[i + 1];
                const bool collider = is_parent(prev, mid) && is_parent(next, mid);
                if (collider) {
                    bool open = false;
                    for (auto d : descendants[mid]) open = open || z.count(d);
                    if (!open) return false;
                } else if (z.count(mid)) {
                    return false;
                }
            }
            return true;
        }
        std::vector<std::size_t> next(dag.parents(v).begin(), dag.parents(v).end());
        next.insert(next.end(), dag.children(v).begin(), dag.children(v).end());
        for (auto w : next) {
            if (on_path[w]) continue;
            on_path[w] = 1;
            path.push_back(w);
            const bool found = active_path(w);
            path.pop_back();
            on_path[w] = 0;
            if (found) return true;
        }
        return false;
    };
    return !active_path(x);
}

Ucn chain() {
    // X1 -> X2 -> X3, all at lag 1
    Ucn u(3, 1);
    u.set_weight(0, 1, 1, 1.0);
    u.set_weight(1, 2, 1, 1.0);
    return u;
}

}  // namespace

TEST_CASE("network tensor basics") {
    Ucn u(3, 2, {"a", "b", "c"});
    u.set_weight(0, 1, 2, 0.5);
    u.set_weight(2, 1, 1, 0.25);
    u.set_weight(1, 0, 1, 0.75);
    CHECK(u.edge_count() == 3);
    CHECK(u.has_edge(0, 1, 2));
    CHECK_FALSE(u.has_edge(1, 0, 2));
    // canonical order (dst, lag, src)
    const auto e = u.edges();
    CHECK(e[0] == Edge{1, 0, 1, 0.75});
    CHECK(e[1] == Edge{2, 1, 1, 0.25});
    CHECK(e[2] == Edge{0, 1, 2, 0.5});
    CHECK(u.parents(1) == std::vector<LaggedVar>{{2, 1}, {0, 2}});
    CHECK(Ucn(2, 1).names() == std::vector<std::string>{"X1", "X2"});

    CHECK_THROWS_AS(u.set_weight(0, 1, 3, 1.0), LookupError);
    CHECK_THROWS_AS(u.set_weight(0, 1, 0, 1.0), LookupError);
    CHECK_THROWS_AS(u.set_weight(0, 1, 1, -1.0), ConfigError);
    CHECK_THROWS_AS(Ucn(0, 1), ConfigError);
    CHECK_THROWS_AS(Ucn(2, 0), ConfigError);

    CHECK(u.with_depth(5).weight(0, 1, 2) == 0.5);
    CHECK_THROWS_AS(u.with_depth(1), ShapeError);
}

TEST_CASE("network JSON round trip") {
    Ucn u(3, 2, {"a", "b", "c"});
    u.set_weight(0, 1, 2, 0.1 + 0.2);
    u.set_weight(2, 2, 1, 1e-7);
    CHECK(network_from_json(network_to_json(u)) == u);
    CHECK(network_to_json(network_from_json(network_to_json(u))) == network_to_json(u));
    CHECK_THROWS_AS(network_from_json("{"), ParseError);
    CHECK_THROWS_AS(network_from_json(R"({"n":2,"tau_max":1,"names":["a","b"],
        "edges":[{"src":0,"dst":1,"lag":1,"weight":1},{"src":0,"dst":1,"lag":1,"weight":2}]})"),
                    ParseError);
    CHECK_THROWS_AS(read_network("/nonexistent/net.json"), IoError);
}

TEST_CASE("unrolling repeats every edge at every admissible time") {
    Ucn u(2, 2);
    u.set_weight(0, 1, 2, 1.0);
    u.set_weight(1, 1, 1, 1.0);
    const auto dag = unroll(u, 4);
    CHECK(dag.node_count() == 8);
    const std::vector<std::pair<Node, Node>> expected{
        {{0, 0}, {1, 2}}, {{0, 1}, {1, 3}}, {{1, 0}, {1, 1}}, {{1, 1}, {1, 2}}, {{1, 2}, {1, 3}}};
    CHECK(dag.arcs() == expected);
    CHECK(dag.topological_order().size() == 8);
    CHECK_THROWS_AS(unroll(u, 2), WindowTooSmallError);
    CHECK_THROWS_AS(dag.id({0, 4}), LookupError);
    CHECK(default_horizon(3) == 7);
}

TEST_CASE("topological order detects cycles") {
    UnrolledDag g(2, 1);
    g.add_arc({0, 0}, {1, 0});
    CHECK(g.topological_order().size() == 2);
    g.add_arc({1, 0}, {0, 0});
    CHECK(g.topological_order().empty());
}

TEST_CASE("d-separation on a chain and a collider") {
    const auto dag = unroll(chain(), 3);
    const Node a{0, 0}, b{1, 1}, c{2, 2};
    CHECK_FALSE(d_separated(dag, a, c, {}));
    const std::vector<Node> zb{b};
    CHECK(d_separated(dag, a, c, zb));

    // X1 -> X3 <- X2
    Ucn v(3, 1);
    v.set_weight(0, 2, 1, 1.0);
    v.set_weight(1, 2, 1, 1.0);
    const auto cdag = unroll(v, 2);
    const std::vector<Node> collider{{2, 1}};
    CHECK(d_separated(cdag, {0, 0}, {1, 0}, {}));
    CHECK_FALSE(d_separated(cdag, {0, 0}, {1, 0}, collider));

    CHECK_THROWS_AS(d_separated(dag, a, a, {}), ConfigError);
    const std::vector<Node> za{a};
    CHECK_THROWS_AS(d_separated(dag, a, c, za), ConfigError);
}

TEST_CASE("d-separation matches path enumeration on random small DAGs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n = 2 + rng() % 3;
        const int horizon = static_cast<int>(2 + rng() % 2);
        UnrolledDag dag(n, horizon);
        const auto count = dag.node_count();
        if (count > 8) continue;
        for (std::size_t a = 0; a < count; ++a) {
            for (std::size_t b = a + 1; b < count; ++b) {
                if (rng() % 3 == 0) dag.add_arc(dag.node(a), dag.node(b));
            }
        }
        for (std::size_t x = 0; x < count; ++x) {
            for (std::size_t y = x + 1; y < count; ++y) {
                std::set<std::size_t> z;
                std::vector<Node> zn;
                for (std::size_t v = 0; v < count; ++v) {
                    if (v != x && v != y && rng() % 3 == 0) {
                        z.insert(v);
                        zn.push_back(dag.node(v));
                    }
                }
                const bool fast = d_separated(dag, dag.node(x), dag.node(y), zn);
                CHECK(fast == d_separated_by_paths(dag, x, y, z));
                CHECK(fast == d_separated(dag, dag.node(y), dag.node(x), zn));
            }
        }
    }
}

TEST_CASE("parents screen the target from the rest of its past") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 2 + rng() % 4;
        const int tau = 1 + static_cast<int>(rng() % 2);
        Ucn u(n, tau);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                for (int s = 1; s <= tau; ++s) {
                    if (rng() % 4 == 0) u.set_weight(j, i, s, 1.0);
                }
            }
        }
        const int horizon = std::min(default_horizon(tau), 6);
        const auto dag = unroll(u, horizon);
        for (std::size_t i = 0; i < n; ++i) {
            const Node target{i, horizon - 1};
            std::vector<Node> parents;
            for (auto p : u.parents(i)) parents.push_back({p.var, horizon - 1 - p.lag});
            for (int t = 0; t < horizon - 1; ++t) {
                for (std::size_t j = 0; j < n; ++j) {
                    const Node w{j, t};
                    if (std::find(parents.begin(), parents.end(), w) != parents.end()) continue;
                    CHECK(d_separated(dag, target, w, parents));
                }
            }
            for (const auto& p : parents) {
                std::vector<Node> others;
                for (const auto& q : parents) {
                    if (!(q == p)) others.push_back(q);
                }
                CHECK_FALSE(d_separated(dag, target, p, others));
            }
        }
    }
}

TEST_CASE("oracle causal entropy") {
    const auto u = chain();
    const std::vector<Node> none;
    const std::vector<Node> mediator{{1, 2}};
    CHECK(oracle_causal_entropy(u, {2, 3}, {0, 1}, none) == 1.0);
    CHECK(oracle_causal_entropy(u, {2, 3}, {0, 1}, mediator) == 0.0);
    CHECK_THROWS_AS(oracle_causal_entropy(u, {2, 3}, {0, 3}, none), TemporalOrderError);

    OracleScorer scorer(u, 2, 2);
    const std::vector<LaggedVar> empty;
    const std::vector<LaggedVar> via{{1, 1}};
    CHECK(scorer.score({1, 1}, empty) == 1.0);
    CHECK(scorer.score({0, 2}, empty) == 1.0);
    CHECK(scorer.score({0, 2}, via) == 0.0);
    CHECK(scorer.score({2, 1}, empty) == 0.0);
    CHECK_THROWS_AS(OracleScorer(u, 3, 2), LookupError);
}
