#include "ucn/hce.hpp"

#include <algorithm>
#include <exception>

#include "ucn/error.hpp"
#include "ucn/rng.hpp"

namespace ucn {

void HceConfig::validate() const {
    if (tau_max < 1) throw ConfigError("tau_max must be >= 1");
    if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
    if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
    if (estimator.k < 1) throw ConfigError("estimator k must be >= 1");
    if (!(estimator.jitter_scale >= 0.0)) throw ConfigError("jitter_scale must be >= 0");
}

bool ParentSet::contains(LaggedVar v) const {
    return std::any_of(parents.begin(), parents.end(),
                       [&](const WeightedParent& p) { return p.parent == v; });
}

std::vector<LaggedVar> ParentSet::vars() const {
    std::vector<LaggedVar> out;
    out.reserve(parents.size());
    for (const auto& p : parents) out.push_back(p.parent);
    return out;
}

std::uint64_t target_seed(std::uint64_t seed, std::size_t target) {
    return hash_combine(seed, 0x7461726765740000ull + target);
}

EstimatorScorer::EstimatorScorer(const TimeSeriesPanel& panel, std::size_t target, int tau_max,
                                 EstimatorConfig config)
    : n_(panel.variables()), tau_max_(tau_max), config_(config) {
    std::vector<LaggedVar> all;
    for (int lag = 1; lag <= tau_max; ++lag) {
        for (std::size_t v = 0; v < n_; ++v) all.push_back({v, lag});
    }
    auto design = build_design(panel, target, all, tau_max);
    target_ = std::move(design.target);
    lagged_ = std::move(design.regressors);
    config_.validate(target_.size());
}

std::size_t EstimatorScorer::column_of(LaggedVar v) const {
    if (v.var >= n_ || v.lag < 1 || v.lag > tau_max_) {
        throw ConfigError("lagged variable outside the search space");
    }
    return static_cast<std::size_t>(v.lag - 1) * n_ + v.var;
}

double EstimatorScorer::score(LaggedVar candidate, std::span<const LaggedVar> conditioning) {
    std::vector<LaggedVar> key(conditioning.begin(), conditioning.end());
    std::sort(key.begin(), key.end());
    auto cache_key = std::make_pair(candidate, std::move(key));
    if (auto it = cache_.find(cache_key); it != cache_.end()) {
        ++cache_hits_;
        return it->second;
    }
    std::vector<std::size_t> zcols;
    zcols.reserve(cache_key.second.size());
    for (const auto& v : cache_key.second) zcols.push_back(column_of(v));
    const std::size_t ycol = column_of(candidate);
    const Matrix z = lagged_.select_columns(zcols);
    const Matrix y = lagged_.select_columns(std::span<const std::size_t>(&ycol, 1));
    const double value =
        conditional_mutual_information(Matrix::column(target_), y, z, config_);
    ++evaluations_;
    cache_.emplace(std::move(cache_key), value);
    return value;
}

ParentSet forward_phase(CausalEntropyScorer& scorer, std::size_t n, std::size_t target,
                        const HceConfig& config) {
    config.validate();
    ParentSet out{target, {}};
    for (int lag = 1; lag <= config.tau_max; ++lag) {
        std::vector<LaggedVar> slice;
        for (std::size_t v = 0; v < n; ++v) slice.push_back({v, lag});
        for (std::size_t j = 0; j < n; ++j) {
            const LaggedVar cand{j, lag};
            std::vector<LaggedVar> rest;
            for (const auto& v : slice) {
                if (v != cand) rest.push_back(v);
            }
            const double value = scorer.score(cand, rest);
            if (value > config.alpha) {
                out.parents.push_back({cand, value});
            } else {
                slice = std::move(rest);
            }
        }
    }
    return out;
}

ParentSet backward_phase(CausalEntropyScorer& scorer, const ParentSet& candidates,
                         const HceConfig& config) {
    config.validate();
    std::vector<WeightedParent> current = candidates.parents;
    std::sort(current.begin(), current.end(), [](const WeightedParent& a, const WeightedParent& b) {
        if (a.parent.lag != b.parent.lag) return a.parent.lag > b.parent.lag;
        return a.parent.var < b.parent.var;
    });
    std::vector<LaggedVar> order;
    for (const auto& p : current) order.push_back(p.parent);

    for (const auto& y : order) {
        std::vector<LaggedVar> rest;
        for (const auto& p : current) {
            if (p.parent != y) rest.push_back(p.parent);
        }
        const double value = scorer.score(y, rest);
        auto it = std::find_if(current.begin(), current.end(),
                               [&](const WeightedParent& p) { return p.parent == y; });
        if (value < config.beta) {
            current.erase(it);
        } else {
            it->weight = value;
        }
    }
    std::sort(current.begin(), current.end(),
              [](const WeightedParent& a, const WeightedParent& b) { return a.parent < b.parent; });
    return {candidates.target, std::move(current)};
}

ParentSet forward_phase(const TimeSeriesPanel& panel, std::size_t target, const HceConfig& config) {
    config.validate();
    auto est = config.estimator;
    est.seed = target_seed(config.seed, target);
    EstimatorScorer scorer(panel, target, config.tau_max, est);
    return forward_phase(scorer, panel.variables(), target, config);
}

ParentSet backward_phase(const TimeSeriesPanel& panel, std::size_t target,
                         const ParentSet& candidates, const HceConfig& config) {
    config.validate();
    auto est = config.estimator;
    est.seed = target_seed(config.seed, target);
    EstimatorScorer scorer(panel, target, config.tau_max, est);
    return backward_phase(scorer, candidates, config);
}

std::vector<ParentSet> discover_parent_sets(const ScorerFactory& factory, std::size_t n,
                                            const HceConfig& config) {
    config.validate();
    std::vector<ParentSet> sets(n);
    std::vector<std::exception_ptr> failures(n);
    const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) if (config.parallel)
    for (std::ptrdiff_t si = 0; si < nn; ++si) {
        const auto i = static_cast<std::size_t>(si);
        try {
            auto scorer = factory(i);
            const auto candidates = forward_phase(*scorer, n, i, config);
            sets[i] = backward_phase(*scorer, candidates, config);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    // Report the lowest failing target so the error does not depend on scheduling.
    for (std::size_t i = 0; i < n; ++i) {
        if (!failures[i]) continue;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const std::exception& ex) {
            throw DiscoveryError(i, "discovery failed for target " + std::to_string(i) + ": " +
                                        ex.what());
        }
    }
    return sets;
}

Ucn assemble(const std::vector<ParentSet>& parent_sets, std::size_t n, int tau_max,
             std::vector<std::string> names) {
    Ucn ucn(n, tau_max, std::move(names));
    for (const auto& ps : parent_sets) {
        for (const auto& p : ps.parents) {
            if (p.parent.lag < 1) throw ConfigError("parent with lag < 1");
            ucn.set_weight(p.parent.var, ps.target, p.parent.lag, std::max(p.weight, 0.0));
        }
    }
    return ucn;
}

Ucn discover(const ScorerFactory& factory, std::size_t n, std::vector<std::string> names,
             const HceConfig& config) {
    return assemble(discover_parent_sets(factory, n, config), n, config.tau_max, std::move(names));
}

Ucn discover(const TimeSeriesPanel& panel, const HceConfig& config) {
    config.validate();
    const auto std_panel = standardize(panel);
    if (std_panel.steps() <= static_cast<std::size_t>(config.tau_max + config.estimator.k)) {
        throw InsufficientDataError("panel of " + std::to_string(std_panel.steps()) +
                                    " steps is too short for tau_max " +
                                    std::to_string(config.tau_max) + " and k " +
                                    std::to_string(config.estimator.k));
    }
    const ScorerFactory factory = [&](std::size_t target) {
        auto est = config.estimator;
        est.seed = target_seed(config.seed, target);
        return std::make_unique<EstimatorScorer>(std_panel, target, config.tau_max, est);
    };
    return discover(factory, std_panel.variables(), std_panel.names(), config);
}

Ucn discover_with_oracle(const Ucn& truth, const HceConfig& config) {
    const ScorerFactory factory = [&](std::size_t target) {
        return std::make_unique<OracleScorer>(truth, target, config.tau_max);
    };
    return discover(factory, truth.n(), truth.names(), config);
}

}  // namespace ucn
