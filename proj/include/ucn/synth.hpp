#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ucn/graph.hpp"
#include "ucn/panel.hpp"

namespace ucn {

enum class Coupling { identity, bump };

// f(x) = x + 5 x^2 exp(-x^2 / 20)
double bump(double x);
double apply(Coupling f, double x);

// Deterministic linear ramp from start to end over the generated length.
struct EnvDriver {
    double start = 1.3;
    double end = 8.0;
};

struct SpecEdge {
    std::size_t src = 0;
    std::size_t dst = 0;
    int lag = 1;
    double coeff = 0.0;
    Coupling func = Coupling::identity;
    bool operator==(const SpecEdge&) const = default;
};

// Generative definition of a synthetic system. Variables 0..n-1 are the
// observed stochastic variables; when `env` is set, index n is the
// environment driver. It may be an edge source but never a destination.
struct StructuralSpec {
    std::size_t n = 0;
    std::optional<EnvDriver> env;
    std::vector<double> noise_std;  // per observed variable
    std::vector<SpecEdge> edges;

    std::size_t total_variables() const { return n + (env ? 1 : 0); }
    int max_lag() const;
    void validate() const;
};

// Coefficient magnitudes drawn by random_spec.
inline constexpr double kMinCoupling = 0.1;
inline constexpr double kMaxCoupling = 0.5;
// Any |x| above this aborts generation.
inline constexpr double kDivergenceBound = 1e6;

struct GenerateOptions {
    bool hide_env = false;   // drop the driver column (and its edges) from the outputs
    int truth_tau_max = 0;   // depth of the truth tensor; 0 means the spec's max lag
};

struct Generated {
    TimeSeriesPanel panel;
    Ucn truth;
};

// x_{i,t} = sum over edges into i of coeff * f(x_{src,t-lag}) + N(0, noise_std_i^2).
// The first max-lag steps of every observed variable are N(0, 1) draws.
Generated generate(const StructuralSpec& spec, std::size_t steps, std::uint64_t seed,
                   const GenerateOptions& options = {});

// The four-variable example driven by an observed environment ramp 1.3 -> 8.0.
StructuralSpec example_network();

// Random spec with 2n + U{0..n} distinct edges, lags in [1, 3], coefficient
// magnitudes in [kMinCoupling, kMaxCoupling] with random sign and a uniform
// choice of coupling function. Candidates that fail the stability screens are
// redrawn; throws GenerationError once the retry budget is spent.
StructuralSpec random_spec(std::size_t n, std::uint64_t seed);

// Spec JSON: {"n", "env": {"start","end"} | null, "noise_std", "edges": [...]}.
std::string spec_to_json(const StructuralSpec& spec);
StructuralSpec spec_from_json(const std::string& text);
StructuralSpec read_spec(const std::string& path);
void write_spec(const std::string& path, const StructuralSpec& spec);

}  // namespace ucn
