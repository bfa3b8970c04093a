#pragma once

#include <map>
#include <memory>
#include <utility>

#include "choquard/choquard.hpp"
#include "choquard/cli.hpp"

namespace choquard::testing {

/// Ground state in R^3 with V = 1, solved once per (alpha, p) and process.
inline std::shared_ptr<const GroundState> ground_state(double alpha, double p) {
    static std::map<std::pair<double, double>, std::shared_ptr<const GroundState>> cache;
    auto& slot = cache[{alpha, p}];
    if (!slot) {
        const ChoquardParams prm(3, alpha, p, 1.0);
        slot = std::make_shared<const GroundState>(solve_limit(prm, make_grid(default_grid_spec(prm))));
    }
    return slot;
}

inline ProfilesPtr profiles(double alpha, double p) { return interaction_profiles(ground_state(alpha, p)); }

}  // namespace choquard::testing
