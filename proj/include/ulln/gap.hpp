#pragma once

#include <cstdint>
#include <optional>

#include "ulln/exact.hpp"

namespace ulln {

/// One trial of a constant-gap experiment: nu samples, the joint-bit search
/// up to K = k_bound(nu), and the gap certified at the witness point.
struct GapTrial {
    std::uint64_t nu = 0;
    std::uint64_t seed = 0;
    std::uint64_t K = 0;
    Exact delta;                      ///< certified radius delta^nu
    bool found = false;
    std::optional<std::uint64_t> k;   ///< k^nu when found
    std::optional<Exact> gap;         ///< exact gap at the witness point
    std::optional<double> gap_set;    ///< same gap recomputed through set metrics
    std::optional<Exact> perturbed_bound;  ///< 1/2 - 140 delta^nu (planar construction only)
};

}  // namespace ulln
