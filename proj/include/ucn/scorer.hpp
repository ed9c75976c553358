#pragma once

#include <span>

#include "ucn/panel.hpp"

namespace ucn {

// Source of T_{candidate -> target | conditioning} for one fixed target.
// The search algorithm only talks to this interface, so the estimator can be
// swapped for an exact graphical oracle when validating the search itself.
class CausalEntropyScorer {
public:
    virtual ~CausalEntropyScorer() = default;
    virtual double score(LaggedVar candidate, std::span<const LaggedVar> conditioning) = 0;
};

}  // namespace ucn
