#include "ucn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ucn/error.hpp"

namespace ucn {

Ucn::Ucn(std::size_t n, int tau_max, std::vector<std::string> names)
    : n_(n), tau_max_(tau_max), names_(std::move(names)) {
    if (n_ == 0) throw ConfigError("network needs at least one variable");
    if (tau_max_ < 1) throw ConfigError("network depth tau_max must be >= 1");
    if (names_.empty()) {
        for (std::size_t v = 0; v < n_; ++v) names_.push_back("X" + std::to_string(v + 1));
    }
    if (names_.size() != n_) throw ShapeError("network names do not match n");
    weights_.assign(n_ * n_ * static_cast<std::size_t>(tau_max_), 0.0);
}

std::size_t Ucn::index(std::size_t src, std::size_t dst, int lag) const {
    if (src >= n_ || dst >= n_) throw LookupError("edge endpoint out of range");
    if (lag < 1 || lag > tau_max_) {
        throw LookupError("lag " + std::to_string(lag) + " outside [1, " +
                          std::to_string(tau_max_) + "]");
    }
    return (src * n_ + dst) * static_cast<std::size_t>(tau_max_) + static_cast<std::size_t>(lag - 1);
}

double Ucn::weight(std::size_t src, std::size_t dst, int lag) const {
    return weights_[index(src, dst, lag)];
}

void Ucn::set_weight(std::size_t src, std::size_t dst, int lag, double weight) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw ConfigError("edge weights must be finite and >= 0");
    }
    weights_[index(src, dst, lag)] = weight;
}

std::vector<Edge> Ucn::edges() const {
    std::vector<Edge> out;
    for (std::size_t dst = 0; dst < n_; ++dst) {
        for (int lag = 1; lag <= tau_max_; ++lag) {
            for (std::size_t src = 0; src < n_; ++src) {
                const double w = weight(src, dst, lag);
                if (w > 0.0) out.push_back({src, dst, lag, w});
            }
        }
    }
    return out;
}

std::size_t Ucn::edge_count() const {
    return static_cast<std::size_t>(
        std::count_if(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; }));
}

std::vector<LaggedVar> Ucn::parents(std::size_t dst) const {
    std::vector<LaggedVar> out;
    for (int lag = 1; lag <= tau_max_; ++lag) {
        for (std::size_t src = 0; src < n_; ++src) {
            if (has_edge(src, dst, lag)) out.push_back({src, lag});
        }
    }
    return out;
}

Ucn Ucn::with_depth(int tau_max) const {
    Ucn out(n_, tau_max, names_);
    for (const auto& e : edges()) {
        if (e.lag > tau_max) {
            throw ShapeError("edge at lag " + std::to_string(e.lag) +
                             " does not fit depth " + std::to_string(tau_max));
        }
        out.set_weight(e.src, e.dst, e.lag, e.weight);
    }
    return out;
}

std::string network_to_json(const Ucn& ucn) {
    nlohmann::ordered_json j;
    j["n"] = ucn.n();
    j["tau_max"] = ucn.tau_max();
    j["names"] = ucn.names();
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : ucn.edges()) {
        nlohmann::ordered_json je;
        je["src"] = e.src;
        je["dst"] = e.dst;
        je["lag"] = e.lag;
        je["weight"] = e.weight;
        j["edges"].push_back(std::move(je));
    }
    return j.dump(2) + "\n";
}

Ucn network_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        const auto n = j.at("n").get<std::size_t>();
        const auto tau_max = j.at("tau_max").get<int>();
        std::vector<std::string> names;
        if (j.contains("names")) names = j.at("names").get<std::vector<std::string>>();
        Ucn ucn(n, tau_max, std::move(names));
        for (const auto& e : j.at("edges")) {
            const auto src = e.at("src").get<std::size_t>();
            const auto dst = e.at("dst").get<std::size_t>();
            const auto lag = e.at("lag").get<int>();
            if (ucn.has_edge(src, dst, lag)) throw ParseError("duplicate edge in network JSON");
            ucn.set_weight(src, dst, lag, e.at("weight").get<double>());
        }
        return ucn;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("network JSON: ") + ex.what());
    }
}

void write_network(const std::string& path, const Ucn& ucn) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write network '" + path + "'");
    out << network_to_json(ucn);
    if (!out) throw IoError("error while writing '" + path + "'");
}

Ucn read_network(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open network '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return network_from_json(ss.str());
}

UnrolledDag::UnrolledDag(std::size_t n, int horizon) : n_(n), horizon_(horizon) {
    if (horizon < 1) throw WindowTooSmallError("horizon must be >= 1");
    const std::size_t count = n * static_cast<std::size_t>(horizon);
    parents_.resize(count);
    children_.resize(count);
}

std::size_t UnrolledDag::id(Node node) const {
    if (node.var >= n_ || node.time < 0 || node.time >= horizon_) {
        throw LookupError("node (" + std::to_string(node.var) + ", " + std::to_string(node.time) +
                          ") is outside the unrolled window");
    }
    return static_cast<std::size_t>(node.time) * n_ + node.var;
}

Node UnrolledDag::node(std::size_t id) const {
    return {id % n_, static_cast<int>(id / n_)};
}

void UnrolledDag::add_arc(Node from, Node to) {
    const auto a = id(from);
    const auto b = id(to);
    if (std::find(children_[a].begin(), children_[a].end(), b) != children_[a].end()) return;
    children_[a].push_back(b);
    parents_[b].push_back(a);
}

bool UnrolledDag::has_arc(Node from, Node to) const {
    const auto& ch = children_[id(from)];
    return std::find(ch.begin(), ch.end(), id(to)) != ch.end();
}

std::vector<std::pair<Node, Node>> UnrolledDag::arcs() const {
    std::vector<std::pair<Node, Node>> out;
    for (std::size_t a = 0; a < children_.size(); ++a) {
        for (auto b : children_[a]) out.emplace_back(node(a), node(b));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> UnrolledDag::topological_order() const {
    std::vector<std::size_t> indegree(node_count());
    for (std::size_t v = 0; v < node_count(); ++v) indegree[v] = parents_[v].size();
    std::deque<std::size_t> ready;
    for (std::size_t v = 0; v < node_count(); ++v) {
        if (indegree[v] == 0) ready.push_back(v);
    }
    std::vector<std::size_t> order;
    while (!ready.empty()) {
        const auto v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (auto c : children_[v]) {
            if (--indegree[c] == 0) ready.push_back(c);
        }
    }
    if (order.size() != node_count()) order.clear();
    return order;
}

UnrolledDag unroll(const Ucn& ucn, int horizon) {
    if (horizon <= ucn.tau_max()) {
        throw WindowTooSmallError("horizon " + std::to_string(horizon) +
                                  " must exceed tau_max " + std::to_string(ucn.tau_max()));
    }
    UnrolledDag dag(ucn.n(), horizon);
    for (const auto& e : ucn.edges()) {
        for (int t = e.lag; t < horizon; ++t) dag.add_arc({e.src, t - e.lag}, {e.dst, t});
    }
    return dag;
}

bool d_separated(const UnrolledDag& dag, Node x, Node y, std::span<const Node> z) {
    const auto xs = dag.id(x);
    const auto ys = dag.id(y);
    if (xs == ys) throw ConfigError("d-separation query needs two distinct nodes");
    std::vector<char> in_z(dag.node_count(), 0);
    for (const auto& node : z) in_z[dag.id(node)] = 1;
    if (in_z[xs] || in_z[ys]) throw ConfigError("d-separation endpoints must not be conditioned on");

    // Nodes that are in z or have a descendant in z: colliders there are open.
    std::vector<char> opens(dag.node_count(), 0);
    std::vector<std::size_t> stack;
    for (std::size_t v = 0; v < dag.node_count(); ++v) {
        if (in_z[v]) stack.push_back(v);
    }
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        if (opens[v]) continue;
        opens[v] = 1;
        for (auto p : dag.parents(v)) stack.push_back(p);
    }

    // Traverse (node, direction) states. `up` means the trail arrived from a
    // child, `down` that it arrived from a parent.
    enum : std::size_t { kUp = 0, kDown = 1 };
    std::vector<char> visited(2 * dag.node_count(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> frontier{{xs, kUp}};
    while (!frontier.empty()) {
        const auto [v, dir] = frontier.back();
        frontier.pop_back();
        if (visited[2 * v + dir]) continue;
        visited[2 * v + dir] = 1;
        if (!in_z[v] && v == ys) return false;
        if (dir == kUp) {
            if (in_z[v]) continue;
            for (auto p : dag.parents(v)) frontier.emplace_back(p, kUp);
            for (auto c : dag.children(v)) frontier.emplace_back(c, kDown);
        } else {
            if (!in_z[v]) {
                for (auto c : dag.children(v)) frontier.emplace_back(c, kDown);
            }
            if (opens[v]) {
                for (auto p : dag.parents(v)) frontier.emplace_back(p, kUp);
            }
        }
    }
    return true;
}

double oracle_causal_entropy(const UnrolledDag& dag, Node target, Node candidate,
                             std::span<const Node> z) {
    if (candidate.time >= target.time) {
        throw TemporalOrderError("candidate at t=" + std::to_string(candidate.time) +
                                 " does not precede target at t=" + std::to_string(target.time));
    }
    return d_separated(dag, candidate, target, z) ? 0.0 : 1.0;
}

double oracle_causal_entropy(const Ucn& truth, Node target, Node candidate,
                             std::span<const Node> z) {
    const int horizon = std::max(default_horizon(truth.tau_max()), target.time + 1);
    return oracle_causal_entropy(unroll(truth, horizon), target, candidate, z);
}

OracleScorer::OracleScorer(const Ucn& truth, std::size_t target, int tau_max)
    : dag_(unroll(truth, default_horizon(std::max(truth.tau_max(), tau_max)))),
      target_(target),
      now_(dag_.horizon() - 1) {
    if (target >= truth.n()) throw LookupError("oracle target out of range");
}

Node OracleScorer::at_lag(LaggedVar v) const { return {v.var, now_ - v.lag}; }

double OracleScorer::score(LaggedVar candidate, std::span<const LaggedVar> conditioning) {
    std::vector<Node> z;
    z.reserve(conditioning.size());
    for (const auto& c : conditioning) z.push_back(at_lag(c));
    return oracle_causal_entropy(dag_, {target_, now_}, at_lag(candidate), z);
}

}  // namespace ucn
