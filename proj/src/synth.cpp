#include "ucn/synth.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "ucn/error.hpp"
#include "ucn/rng.hpp"

namespace ucn {

double bump(double x) { return x + 5.0 * x * x * std::exp(-x * x / 20.0); }

double apply(Coupling f, double x) { return f == Coupling::bump ? bump(x) : x; }

int StructuralSpec::max_lag() const {
    int m = 0;
    for (const auto& e : edges) m = std::max(m, e.lag);
    return m;
}

void StructuralSpec::validate() const {
    if (n == 0) throw ConfigError("spec needs at least one observed variable");
    if (noise_std.size() != n) throw ConfigError("spec needs one noise_std per observed variable");
    for (double s : noise_std) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("noise_std must be finite and >= 0");
    }
    if (env && (!std::isfinite(env->start) || !std::isfinite(env->end))) {
        throw ConfigError("env ramp endpoints must be finite");
    }
    std::set<std::tuple<std::size_t, std::size_t, int>> seen;
    for (const auto& e : edges) {
        if (e.src >= total_variables()) throw ConfigError("edge source out of range");
        if (e.dst >= n) throw ConfigError("edge destination must be an observed variable");
        if (e.lag < 1) throw ConfigError("edge lag must be >= 1");
        if (!std::isfinite(e.coeff)) throw ConfigError("edge coefficient must be finite");
        if (!seen.insert({e.src, e.dst, e.lag}).second) throw ConfigError("duplicate spec edge");
    }
}

namespace {

std::vector<std::string> variable_names(const StructuralSpec& spec, bool with_env) {
    std::vector<std::string> names;
    for (std::size_t v = 0; v < spec.n; ++v) names.push_back("X" + std::to_string(v + 1));
    if (spec.env && with_env) names.push_back("Xenv");
    return names;
}

}  // namespace

Generated generate(const StructuralSpec& spec, std::size_t steps, std::uint64_t seed,
                   const GenerateOptions& options) {
    spec.validate();
    const int max_lag = std::max(spec.max_lag(), 1);
    if (steps <= static_cast<std::size_t>(max_lag)) {
        throw InsufficientDataError("series length must exceed the largest lag");
    }
    const std::size_t total = spec.total_variables();
    Matrix x(steps, total);
    if (spec.env) {
        const double denom = steps > 1 ? static_cast<double>(steps - 1) : 1.0;
        for (std::size_t t = 0; t < steps; ++t) {
            x(t, spec.n) = spec.env->start +
                           (spec.env->end - spec.env->start) * static_cast<double>(t) / denom;
        }
    }

    std::vector<std::vector<const SpecEdge*>> incoming(spec.n);
    for (const auto& e : spec.edges) incoming[e.dst].push_back(&e);

    std::mt19937_64 rng(mix64(seed));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t i = 0; i < spec.n; ++i) {
            const double noise = normal(rng);
            if (t < static_cast<std::size_t>(max_lag)) {
                x(t, i) = noise;
                continue;
            }
            double v = spec.noise_std[i] * noise;
            for (const SpecEdge* e : incoming[i]) {
                v += e->coeff * apply(e->func, x(t - static_cast<std::size_t>(e->lag), e->src));
            }
            if (!(std::abs(v) <= kDivergenceBound)) {
                throw InstabilityError("trajectory diverged at t=" + std::to_string(t) +
                                       " for X" + std::to_string(i + 1) + "; spec: " +
                                       spec_to_json(spec));
            }
            x(t, i) = v;
        }
    }

    const bool keep_env = spec.env && !options.hide_env;
    const std::size_t observed = keep_env ? total : spec.n;
    Matrix values(steps, observed);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t v = 0; v < observed; ++v) values(t, v) = x(t, v);
    }
    const auto names = variable_names(spec, keep_env);

    const int depth = options.truth_tau_max > 0 ? options.truth_tau_max : max_lag;
    if (depth < spec.max_lag()) throw ConfigError("truth depth is below the spec's largest lag");
    Ucn truth(observed, depth, names);
    for (const auto& e : spec.edges) {
        if (e.src >= observed || e.coeff == 0.0) continue;
        truth.set_weight(e.src, e.dst, e.lag, std::abs(e.coeff));
    }
    return {TimeSeriesPanel(std::move(values), names), std::move(truth)};
}

StructuralSpec example_network() {
    // X1 = 0.2 f2(X1[t-1]) + 0.3 env[t-1] + noise; env is also the parent of
    // X4. The edges into X2 and X3 complete the example and are fixed here.
    constexpr std::size_t kEnv = 4;
    StructuralSpec spec;
    spec.n = 4;
    spec.env = EnvDriver{1.3, 8.0};
    spec.noise_std.assign(4, 1.0);
    spec.edges = {
        {0, 0, 1, 0.2, Coupling::bump},
        {kEnv, 0, 1, 0.3, Coupling::identity},
        {0, 1, 2, 0.3, Coupling::bump},
        {1, 1, 1, 0.3, Coupling::identity},
        {1, 2, 1, 0.4, Coupling::bump},
        {2, 3, 1, 0.3, Coupling::bump},
        {kEnv, 3, 1, 0.3, Coupling::identity},
    };
    return spec;
}

namespace {

// Spectral radius of the system's large-|x| linearisation (f2(x) ~ x there).
double asymptotic_spectral_radius(const StructuralSpec& spec) {
    const std::size_t n = spec.n;
    const auto lags = static_cast<std::size_t>(std::max(spec.max_lag(), 1));
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n * lags),
                                                      static_cast<Eigen::Index>(n * lags));
    for (const auto& e : spec.edges) {
        if (e.src >= n) continue;
        companion(static_cast<Eigen::Index>(e.dst),
                  static_cast<Eigen::Index>((static_cast<std::size_t>(e.lag) - 1) * n + e.src)) +=
            e.coeff;
    }
    for (std::size_t b = 1; b < lags; ++b) {
        for (std::size_t v = 0; v < n; ++v) {
            companion(static_cast<Eigen::Index>(b * n + v),
                      static_cast<Eigen::Index>((b - 1) * n + v)) = 1.0;
        }
    }
    return companion.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

StructuralSpec random_spec(std::size_t n, std::uint64_t seed) {
    if (n < 2) throw ConfigError("random networks need n >= 2");
    constexpr int kMaxLag = 3;
    constexpr int kRetries = 200;
    constexpr std::size_t kScreenSteps = 2000;

    std::mt19937_64 rng(hash_combine(seed, 0x72616e646f6dull));
    for (int attempt = 0; attempt < kRetries; ++attempt) {
        StructuralSpec spec;
        spec.n = n;
        spec.noise_std.assign(n, 1.0);

        std::vector<std::tuple<std::size_t, std::size_t, int>> slots;
        for (std::size_t dst = 0; dst < n; ++dst) {
            for (std::size_t src = 0; src < n; ++src) {
                for (int lag = 1; lag <= kMaxLag; ++lag) slots.emplace_back(src, dst, lag);
            }
        }
        std::shuffle(slots.begin(), slots.end(), rng);
        const std::size_t extra = std::uniform_int_distribution<std::size_t>(0, n)(rng);
        const std::size_t count = std::min(2 * n + extra, slots.size());
        slots.resize(count);
        std::sort(slots.begin(), slots.end());

        std::uniform_real_distribution<double> magnitude(kMinCoupling, kMaxCoupling);
        std::bernoulli_distribution coin(0.5);
        for (const auto& [src, dst, lag] : slots) {
            const double mag = magnitude(rng);
            const bool negative = coin(rng);
            const Coupling f = coin(rng) ? Coupling::bump : Coupling::identity;
            spec.edges.push_back({src, dst, lag, negative ? -mag : mag, f});
        }

        if (asymptotic_spectral_radius(spec) >= 1.0) continue;
        try {
            generate(spec, kScreenSteps, hash_combine(seed, static_cast<std::uint64_t>(attempt)));
        } catch (const InstabilityError&) {
            continue;
        }
        return spec;
    }
    throw GenerationError("no stable random network found for n=" + std::to_string(n) +
                          " after " + std::to_string(kRetries) + " attempts");
}

std::string spec_to_json(const StructuralSpec& spec) {
    nlohmann::ordered_json j;
    j["n"] = spec.n;
    if (spec.env) {
        j["env"] = {{"start", spec.env->start}, {"end", spec.env->end}};
    } else {
        j["env"] = nullptr;
    }
    const bool uniform = std::all_of(spec.noise_std.begin(), spec.noise_std.end(),
                                     [&](double s) { return s == spec.noise_std.front(); });
    if (!spec.noise_std.empty() && uniform) {
        j["noise_std"] = spec.noise_std.front();
    } else {
        j["noise_std"] = spec.noise_std;
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : spec.edges) {
        nlohmann::ordered_json je;
        je["src"] = e.src;
        je["dst"] = e.dst;
        je["lag"] = e.lag;
        je["coeff"] = e.coeff;
        je["func"] = e.func == Coupling::bump ? "bump" : "identity";
        j["edges"].push_back(std::move(je));
    }
    return j.dump(2) + "\n";
}

StructuralSpec spec_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        StructuralSpec spec;
        spec.n = j.at("n").get<std::size_t>();
        if (j.contains("env") && !j.at("env").is_null()) {
            spec.env = EnvDriver{j.at("env").at("start").get<double>(),
                                 j.at("env").at("end").get<double>()};
        }
        if (!j.contains("noise_std")) {
            spec.noise_std.assign(spec.n, 1.0);
        } else if (j.at("noise_std").is_array()) {
            spec.noise_std = j.at("noise_std").get<std::vector<double>>();
        } else {
            spec.noise_std.assign(spec.n, j.at("noise_std").get<double>());
        }
        for (const auto& je : j.at("edges")) {
            SpecEdge e;
            e.src = je.at("src").get<std::size_t>();
            e.dst = je.at("dst").get<std::size_t>();
            e.lag = je.at("lag").get<int>();
            e.coeff = je.at("coeff").get<double>();
            const auto func = je.value("func", std::string("identity"));
            if (func == "bump") {
                e.func = Coupling::bump;
            } else if (func == "identity") {
                e.func = Coupling::identity;
            } else {
                throw ParseError("unknown coupling function '" + func + "'");
            }
            spec.edges.push_back(e);
        }
        spec.validate();
        return spec;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("spec JSON: ") + ex.what());
    }
}

StructuralSpec read_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open spec '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return spec_from_json(ss.str());
}

void write_spec(const std::string& path, const StructuralSpec& spec) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write spec '" + path + "'");
    out << spec_to_json(spec);
}

}  // namespace ucn
