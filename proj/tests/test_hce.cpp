#include <functional>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "ucn/error.hpp"
#include "ucn/hce.hpp"
#include "ucn/synth.hpp"

using namespace ucn;

namespace {

struct Call {
    LaggedVar candidate;
    std::vector<LaggedVar> conditioning;
};

// Scorer driven by a lambda that records every query.
class ScriptedScorer final : public CausalEntropyScorer {
public:
    using Fn = std::function<double(LaggedVar, const std::vector<LaggedVar>&)>;
    explicit ScriptedScorer(Fn fn) : fn_(std::move(fn)) {}
    double score(LaggedVar candidate, std::span<const LaggedVar> conditioning) override {
        std::vector<LaggedVar> z(conditioning.begin(), conditioning.end());
        calls.push_back({candidate, z});
        return fn_(candidate, z);
    }
    std::vector<Call> calls;

private:
    Fn fn_;
};

HceConfig config(int tau_max, bool parallel = false) {
    HceConfig c;
    c.tau_max = tau_max;
    c.parallel = parallel;
    return c;
}

// Linear system from (src, dst, lag, coeff) edges with unit noise.
TimeSeriesPanel linear_panel(std::size_t n, const std::vector<SpecEdge>& edges, std::size_t steps,
                             std::uint64_t seed) {
    StructuralSpec spec;
    spec.n = n;
    spec.noise_std.assign(n, 1.0);
    spec.edges = edges;
    return generate(spec, steps, seed).panel;
}

std::vector<LaggedVar> sorted(std::vector<LaggedVar> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

TEST_CASE("config validation") {
    HceConfig c;
    CHECK_NOTHROW(c.validate());
    c.tau_max = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.alpha = -0.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.beta = std::nan("");
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("forward phase re-initialises the conditioning set at each lag") {
    // Only (1, 2) and (0, 1) carry information.
    ScriptedScorer scorer([](LaggedVar c, const std::vector<LaggedVar>&) {
        return (c == LaggedVar{1, 2} || c == LaggedVar{0, 1}) ? 0.5 : 0.0;
    });
    const auto fwd = forward_phase(scorer, 3, 0, config(2));
    CHECK(fwd.vars() == std::vector<LaggedVar>{{0, 1}, {1, 2}});
    CHECK(fwd.parents[0].weight == 0.5);
    REQUIRE(scorer.calls.size() == 6);
    // kept candidates stay in the slice, dropped ones leave it
    CHECK(scorer.calls[0].candidate == LaggedVar{0, 1});
    CHECK(sorted(scorer.calls[0].conditioning) == std::vector<LaggedVar>{{1, 1}, {2, 1}});
    CHECK(sorted(scorer.calls[1].conditioning) == std::vector<LaggedVar>{{0, 1}, {2, 1}});
    CHECK(sorted(scorer.calls[2].conditioning) == std::vector<LaggedVar>{{0, 1}});
    // lag 2 starts from the full slice again, with nothing from lag 1
    CHECK(scorer.calls[3].candidate == LaggedVar{0, 2});
    CHECK(sorted(scorer.calls[3].conditioning) == std::vector<LaggedVar>{{1, 2}, {2, 2}});
    CHECK(sorted(scorer.calls[5].conditioning) == std::vector<LaggedVar>{{1, 2}});
}

TEST_CASE("backward phase visits long lags first and conditions on survivors") {
    // (0,2) is redundant once (0,1) is present; (0,1) is redundant given (0,2).
    ScriptedScorer scorer([](LaggedVar c, const std::vector<LaggedVar>& z) {
        if (c == LaggedVar{0, 2}) {
            return std::find(z.begin(), z.end(), LaggedVar{0, 1}) != z.end() ? 0.0 : 0.3;
        }
        if (c == LaggedVar{0, 1}) {
            return std::find(z.begin(), z.end(), LaggedVar{0, 2}) != z.end() ? 0.0 : 0.3;
        }
        return 0.4;
    });
    ParentSet cands{0, {{{0, 1}, 0.3}, {{1, 1}, 0.4}, {{0, 2}, 0.3}}};
    const auto bwd = backward_phase(scorer, cands, config(2));
    // the longest lag is tested first and dropped, so the shortest copy survives
    CHECK(bwd.vars() == std::vector<LaggedVar>{{0, 1}, {1, 1}});
    CHECK(scorer.calls[0].candidate == LaggedVar{0, 2});
    CHECK(bwd.parents[0].weight == 0.3);
    CHECK(bwd.parents[1].weight == 0.4);
}

TEST_CASE("oracle search recovers a chain and prunes the indirect lag") {
    // X1 -> X2 -> X3 at lag 1
    Ucn truth(3, 2);
    truth.set_weight(0, 1, 1, 1.0);
    truth.set_weight(1, 2, 1, 1.0);
    OracleScorer scorer(truth, 2, 2);
    const auto fwd = forward_phase(scorer, 3, 2, config(2));
    CHECK(fwd.contains({1, 1}));
    CHECK(fwd.contains({0, 2}));
    const auto bwd = backward_phase(scorer, fwd, config(2));
    CHECK(bwd.vars() == std::vector<LaggedVar>{{1, 1}});
}

TEST_CASE("oracle search recovers the example network exactly") {
    const auto g = generate(example_network(), 50, 0);
    const auto found = discover_with_oracle(g.truth, config(5));
    CHECK(found.edges().size() == g.truth.edge_count());
    for (const auto& e : g.truth.edges()) CHECK(found.has_edge(e.src, e.dst, e.lag));
}

TEST_CASE("independent series have no parents under the oracle") {
    const Ucn none(3, 3);
    const auto u = discover_with_oracle(none, config(3));
    CHECK(u.edge_count() == 0);
    OracleScorer scorer(Ucn(1, 3), 0, 3);
    CHECK(forward_phase(scorer, 1, 0, config(3)).parents.empty());
}

TEST_CASE("estimator search on white noise finds nothing above the null spread") {
    // The k-NN estimate of a zero CMI has a spread of about 0.01 nats at a few
    // thousand samples, so the thresholds sit well above it here.
    auto cfg = config(2);
    cfg.alpha = cfg.beta = 0.05;
    const auto single = standardize(test::noise_panel(3000, 1, 41));
    EstimatorScorer scorer(single, 0, 2, cfg.estimator);
    CHECK(forward_phase(scorer, 1, 0, cfg).parents.empty());

    const auto u = discover(test::noise_panel(3000, 2, 31), cfg);
    CHECK(u.edge_count() == 0);
    for (double w : u.weights()) CHECK(w == 0.0);
}

TEST_CASE("forward candidates of a driven pair") {
    // y_t = 0.5 x_{t-1} + noise, x_t = noise. Null estimates spread by about
    // 0.7 / sqrt(m) nats, so a long series keeps them clear of alpha.
    const auto panel = standardize(linear_panel(2, {{0, 1, 1, 0.5, Coupling::identity}}, 30000, 14));
    const auto cfg = config(1);
    const double analytic = -0.5 * std::log(1 - 0.25 / 1.25);
    CHECK(analytic > cfg.alpha);
    const auto fy = forward_phase(panel, 1, cfg);
    CHECK(fy.vars() == std::vector<LaggedVar>{{0, 1}});
    CHECK(std::abs(fy.parents[0].weight - analytic) < 0.02);
    CHECK(forward_phase(panel, 0, cfg).parents.empty());
}

TEST_CASE("estimator search on a two-variable system") {
    const auto panel = linear_panel(2, {{0, 0, 1, 0.6, Coupling::identity}, {0, 1, 1, 0.8, Coupling::identity}},
                                    1500, 5);
    const auto u = discover(panel, config(3));
    CHECK(u.parents(0) == std::vector<LaggedVar>{{0, 1}});
    CHECK(u.parents(1) == std::vector<LaggedVar>{{0, 1}});
    for (const auto& e : u.edges()) {
        CHECK(e.lag >= 1);
        CHECK(e.lag <= 3);
    }
}

TEST_CASE("estimator search on a chain drops the indirect path") {
    const auto panel = linear_panel(3, {{0, 1, 1, 0.8, Coupling::identity}, {1, 2, 1, 0.8, Coupling::identity}},
                                    1500, 8);
    const auto std_panel = standardize(panel);
    const auto cfg = config(2);
    const auto fwd = forward_phase(std_panel, 2, cfg);
    CHECK(fwd.contains({1, 1}));
    CHECK(fwd.contains({0, 2}));
    const auto bwd = backward_phase(std_panel, 2, fwd, cfg);
    CHECK(bwd.vars() == std::vector<LaggedVar>{{1, 1}});
}

TEST_CASE("serial and parallel discovery are identical") {
    const auto panel = generate(random_spec(4, 3), 600, 3).panel;
    auto serial = config(2, false);
    auto parallel = config(2, true);
    serial.seed = parallel.seed = 17;
    CHECK(discover(panel, serial) == discover(panel, parallel));
}

TEST_CASE("each target's search is independent of the others") {
    const auto panel = standardize(generate(random_spec(3, 9), 600, 9).panel);
    const auto cfg = config(2);
    const auto whole = discover(panel, cfg);
    for (std::size_t i = 0; i < 3; ++i) {
        auto est = cfg.estimator;
        est.seed = target_seed(cfg.seed, i);
        EstimatorScorer scorer(panel, i, cfg.tau_max, est);
        const auto bwd = backward_phase(scorer, forward_phase(scorer, 3, i, cfg), cfg);
        CHECK(bwd.vars() == whole.parents(i));
    }
}

TEST_CASE("raising alpha above any attainable value empties the search") {
    const auto panel = linear_panel(2, {{0, 1, 1, 0.8, Coupling::identity}}, 800, 4);
    auto cfg = config(2);
    cfg.alpha = 100.0;
    CHECK(discover(panel, cfg).edge_count() == 0);
    // and the oracle's 0/1 answers make any alpha in (0, 1) equivalent
    Ucn truth(2, 2);
    truth.set_weight(0, 1, 1, 1.0);
    auto lo = config(2), hi = config(2);
    lo.alpha = 0.01;
    hi.alpha = 0.99;
    CHECK(discover_with_oracle(truth, lo) == discover_with_oracle(truth, hi));
}

TEST_CASE("estimator scorer caches repeated queries") {
    const auto panel = standardize(test::noise_panel(300, 2, 2));
    EstimatorScorer scorer(panel, 0, 2, EstimatorConfig{});
    const std::vector<LaggedVar> z1{{1, 1}, {0, 2}};
    const std::vector<LaggedVar> z2{{0, 2}, {1, 1}};
    const double a = scorer.score({0, 1}, z1);
    CHECK(scorer.score({0, 1}, z2) == a);
    CHECK(scorer.evaluations() == 1);
    CHECK(scorer.cache_hits() == 1);
    CHECK_THROWS_AS(scorer.score({0, 3}, z1), ConfigError);
}

TEST_CASE("failures are reported with the target index") {
    const ScorerFactory factory = [](std::size_t target) -> std::unique_ptr<CausalEntropyScorer> {
        if (target == 1) throw ZeroDistanceError("boom");
        return std::make_unique<ScriptedScorer>([](LaggedVar, const std::vector<LaggedVar>&) { return 0.0; });
    };
    for (bool parallel : {false, true}) {
        try {
            discover_parent_sets(factory, 3, config(1, parallel));
            FAIL("expected DiscoveryError");
        } catch (const DiscoveryError& e) {
            CHECK(e.target() == 1);
        }
    }
}

TEST_CASE("short panels are rejected") {
    CHECK_THROWS_AS(discover(test::noise_panel(8, 2, 1), config(5)), InsufficientDataError);
}
