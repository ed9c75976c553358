#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ucn/panel.hpp"
#include "ucn/scorer.hpp"

namespace ucn {

struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;
    int lag = 1;
    double weight = 0.0;
    bool operator==(const Edge&) const = default;
};

// Unique causal network: an n x n x tau_max tensor of nonnegative weights.
// weight(j, i, s) is the strength of X_{j,t-s} -> X_{i,t}; zero means no edge.
class Ucn {
public:
    // Empty names are replaced by X1..Xn.
    Ucn(std::size_t n, int tau_max, std::vector<std::string> names = {});

    std::size_t n() const noexcept { return n_; }
    int tau_max() const noexcept { return tau_max_; }
    const std::vector<std::string>& names() const noexcept { return names_; }

    double weight(std::size_t src, std::size_t dst, int lag) const;
    void set_weight(std::size_t src, std::size_t dst, int lag, double weight);
    bool has_edge(std::size_t src, std::size_t dst, int lag) const {
        return weight(src, dst, lag) > 0.0;
    }

    // Edges with weight > 0 in canonical order: ascending (dst, lag, src).
    std::vector<Edge> edges() const;
    std::size_t edge_count() const;

    // Parents of `dst` as lagged variables, ascending (lag, var).
    std::vector<LaggedVar> parents(std::size_t dst) const;

    // Flattened [src][dst][lag-1], row-major.
    std::span<const double> weights() const noexcept { return weights_; }

    // Same edges in a tensor of a different depth; throws if an edge would be lost.
    Ucn with_depth(int tau_max) const;

    bool operator==(const Ucn&) const = default;

private:
    std::size_t index(std::size_t src, std::size_t dst, int lag) const;

    std::size_t n_;
    int tau_max_;
    std::vector<std::string> names_;
    std::vector<double> weights_;
};

// Network JSON: {"n", "tau_max", "names", "edges": [{"src","dst","lag","weight"}]}.
std::string network_to_json(const Ucn& ucn);
Ucn network_from_json(const std::string& text);
void write_network(const std::string& path, const Ucn& ucn);
Ucn read_network(const std::string& path);

// A variable at an absolute time step inside an unrolled window.
struct Node {
    std::size_t var = 0;
    int time = 0;
    friend auto operator<=>(const Node&, const Node&) = default;
};

// The network repeated at every time step of [0, horizon). Acyclic because
// every arc goes forward in time.
class UnrolledDag {
public:
    UnrolledDag(std::size_t n, int horizon);

    std::size_t variables() const noexcept { return n_; }
    int horizon() const noexcept { return horizon_; }
    std::size_t node_count() const noexcept { return parents_.size(); }

    // Throws LookupError for nodes outside the window.
    std::size_t id(Node node) const;
    Node node(std::size_t id) const;

    void add_arc(Node from, Node to);
    bool has_arc(Node from, Node to) const;
    std::vector<std::pair<Node, Node>> arcs() const;

    const std::vector<std::size_t>& parents(std::size_t id) const { return parents_[id]; }
    const std::vector<std::size_t>& children(std::size_t id) const { return children_[id]; }

    // Kahn's algorithm; empty when a cycle exists.
    std::vector<std::size_t> topological_order() const;

private:
    std::size_t n_;
    int horizon_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
};

// Horizon large enough for blanket checks to see full ancestral context.
inline int default_horizon(int tau_max) { return 2 * tau_max + 1; }

UnrolledDag unroll(const Ucn& ucn, int horizon);

// True iff every path between x and y is blocked by z (reachability
// traversal; equivalent to checking every path).
bool d_separated(const UnrolledDag& dag, Node x, Node y, std::span<const Node> z);

// 0 when candidate and target are d-separated by z, 1 otherwise. The
// candidate must be strictly earlier than the target.
double oracle_causal_entropy(const UnrolledDag& dag, Node target, Node candidate,
                             std::span<const Node> z);
double oracle_causal_entropy(const Ucn& truth, Node target, Node candidate,
                             std::span<const Node> z);

// Scorer that answers from the ground-truth graph, for validating the search
// independently of estimator noise. The target sits at the last step of a
// window deep enough for lags up to `tau_max`.
class OracleScorer final : public CausalEntropyScorer {
public:
    OracleScorer(const Ucn& truth, std::size_t target, int tau_max);
    double score(LaggedVar candidate, std::span<const LaggedVar> conditioning) override;

private:
    Node at_lag(LaggedVar v) const;

    UnrolledDag dag_;
    std::size_t target_;
    int now_;
};

}  // namespace ucn
