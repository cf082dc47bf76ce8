#pragma once

#include <cstdint>
#include <vector>

#include "cci/social_graph.hpp"

namespace cci {

/// Floor of the mean degree over v's neighbors. This is the threshold k
/// used by both the classic H-index and the impact factor. Throws
/// DomainError for isolated nodes.
std::size_t avg_neighbor_degree(UserId v, const SocialGraph& social);

/// Largest k such that at least k neighbors of v have degree >= k.
/// 0 for isolated nodes.
std::size_t classic_hindex(UserId v, const SocialGraph& social);

/// Impact factor decomposed into integer half-units: a neighbor at or
/// above the threshold counts 2 halves; a sub-threshold neighbor counts
/// 1 half per neighbor of its own (the focal node excluded) that clears
/// the threshold; otherwise 0. impact = halves / (2 * degree).
///
/// The count stays integral and is divided exactly once, so a value like
/// 3 * (1/10) is the exact double 0.3 rather than a sum of rounded
/// tenths.
struct ImpactParts {
    std::uint64_t halves = 0;
    std::size_t degree = 0;

    double value() const {
        return degree == 0 ? 0.0
                           : static_cast<double>(halves) / (2.0 * static_cast<double>(degree));
    }
};

ImpactParts impact_factor_parts(UserId v, const SocialGraph& social);

/// Node importance in [0, ...): fraction of neighborhood weight cleared
/// through the threshold, with half credit routed through sub-threshold
/// neighbors. 0 for isolated nodes.
double impact_factor(UserId v, const SocialGraph& social);

struct CentralityScore {
    UserId node;
    std::size_t threshold_k;
    double impact;
    std::size_t classic_hindex;
};

/// Scores for every user in the graph, ascending by node id.
std::vector<CentralityScore> compute_centrality(const SocialGraph& social);

} // namespace cci
