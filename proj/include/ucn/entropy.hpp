#pragma once

#include <cstdint>
#include <span>

#include "ucn/matrix.hpp"

namespace ucn {

// Settings shared by the nearest-neighbour estimators.
struct EstimatorConfig {
    int k = 4;                    // neighbour count
    double jitter_scale = 1e-10;  // amplitude of the tie-breaking perturbation
    std::uint64_t seed = 0;

    // Throws ConfigError / InsufficientDataError for m samples.
    void validate(std::size_t samples) const;
};

// Kozachenko-Leonenko differential entropy (nats) of the rows of `points`,
// max-norm: H = psi(m) - psi(k) + d ln 2 + (d/m) sum ln eps_i.
double kl_entropy(const Matrix& points, const EstimatorConfig& config);

// Conditional mutual information I(X;Y|Z) in nats from the single-radius
// neighbour-count estimator:
//   psi(k) - < psi(n_xz + 1) + psi(n_yz + 1) - psi(n_z + 1) >.
// With a 0-column Z this is the plain k-NN mutual information estimate. The
// value is returned raw and may be slightly negative.
double conditional_mutual_information(const Matrix& x, const Matrix& y, const Matrix& z,
                                      const EstimatorConfig& config);

// Causal entropy T_{Y->X|Z} = H(X|Z) - H(X|Y,Z) = I(X;Y|Z) for one target
// column and one candidate column.
double causal_entropy(std::span<const double> x, std::span<const double> y, const Matrix& z,
                      const EstimatorConfig& config);

// Same quantity via H(X,Z) + H(Y,Z) - H(Z) - H(X,Y,Z), each term a separate
// kl_entropy. Used to cross-check the count form.
double causal_entropy_by_entropies(std::span<const double> x, std::span<const double> y,
                                   const Matrix& z, const EstimatorConfig& config);

// Copy of `points` with every coordinate perturbed by a uniform draw in
// [-scale, scale). The draw is keyed by (seed, row, value bits), never by
// column, so the same sample value gets the same perturbation in every
// subspace it appears in.
Matrix jittered(const Matrix& points, double scale, std::uint64_t seed);

// psi(n) for integer n >= 1.
double digamma_int(std::size_t n);

}  // namespace ucn
