#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "ucn/entropy.hpp"
#include "ucn/graph.hpp"
#include "ucn/panel.hpp"
#include "ucn/scorer.hpp"

namespace ucn {

struct HceConfig {
    int tau_max = 5;
    double alpha = 0.01;  // forward inclusion threshold, nats
    double beta = 0.02;   // backward removal threshold, nats
    EstimatorConfig estimator;
    bool parallel = true;  // run per-target searches concurrently
    std::uint64_t seed = 0;

    void validate() const;
};

struct WeightedParent {
    LaggedVar parent;
    double weight = 0.0;
    bool operator==(const WeightedParent&) const = default;
};

struct ParentSet {
    std::size_t target = 0;
    std::vector<WeightedParent> parents;

    bool contains(LaggedVar v) const;
    std::vector<LaggedVar> vars() const;
    bool operator==(const ParentSet&) const = default;
};

// Estimator seed for one target; independent of scheduling.
std::uint64_t target_seed(std::uint64_t seed, std::size_t target);

// Causal entropy from the nearest-neighbour estimator on one panel. The target
// column and every lagged column share the window t = tau_max .. T-1. Results
// are cached by (candidate, conditioning set).
class EstimatorScorer final : public CausalEntropyScorer {
public:
    EstimatorScorer(const TimeSeriesPanel& panel, std::size_t target, int tau_max,
                    EstimatorConfig config);
    double score(LaggedVar candidate, std::span<const LaggedVar> conditioning) override;

    std::size_t evaluations() const noexcept { return evaluations_; }
    std::size_t cache_hits() const noexcept { return cache_hits_; }

private:
    std::size_t column_of(LaggedVar v) const;

    std::size_t n_;
    int tau_max_;
    EstimatorConfig config_;
    std::vector<double> target_;
    Matrix lagged_;  // column (lag-1)*n + var
    std::map<std::pair<LaggedVar, std::vector<LaggedVar>>, double> cache_;
    std::size_t evaluations_ = 0;
    std::size_t cache_hits_ = 0;
};

using ScorerFactory = std::function<std::unique_ptr<CausalEntropyScorer>(std::size_t target)>;

// For each lag independently: start from every variable at that lag; visit
// j = 0..n-1 and keep X_{j,lag} as a candidate when its causal entropy given
// the rest of the lag slice exceeds alpha, otherwise drop it from the slice.
// Weights are the forward values. Ordered ascending (lag, var).
ParentSet forward_phase(CausalEntropyScorer& scorer, std::size_t n, std::size_t target,
                        const HceConfig& config);

// Visit candidates from the longest lag down (ascending var within a lag) and
// remove each one whose causal entropy given the current remaining set is
// below beta. Of several lagged copies that carry the same information, the
// shortest lag is the one kept. Survivors carry the value from their own
// test as weight.
ParentSet backward_phase(CausalEntropyScorer& scorer, const ParentSet& candidates,
                         const HceConfig& config);

// Panel-level conveniences; the panel must already be standardized.
ParentSet forward_phase(const TimeSeriesPanel& panel, std::size_t target, const HceConfig& config);
ParentSet backward_phase(const TimeSeriesPanel& panel, std::size_t target,
                         const ParentSet& candidates, const HceConfig& config);

// Runs both phases for every target and stitches the parent sets into the
// network tensor. Per-target failures surface as DiscoveryError.
std::vector<ParentSet> discover_parent_sets(const ScorerFactory& factory, std::size_t n,
                                            const HceConfig& config);
Ucn assemble(const std::vector<ParentSet>& parent_sets, std::size_t n, int tau_max,
             std::vector<std::string> names);

Ucn discover(const ScorerFactory& factory, std::size_t n, std::vector<std::string> names,
             const HceConfig& config);

// Standardizes the panel, then discovers with the estimator scorer.
Ucn discover(const TimeSeriesPanel& panel, const HceConfig& config);

// Discovery with the ground-truth oracle in place of the estimator.
Ucn discover_with_oracle(const Ucn& truth, const HceConfig& config);

}  // namespace ucn
