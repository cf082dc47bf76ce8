#include "cci/centrality.hpp"

#include <algorithm>

#include "cci/errors.hpp"

namespace cci {

std::size_t avg_neighbor_degree(UserId v, const SocialGraph& social) {
    auto nbrs = social.neighbors(v);
    if (nbrs.empty())
        throw DomainError("avg_neighbor_degree: node " + std::to_string(v) + " is isolated");
    std::size_t sum = 0;
    for (UserId u : nbrs)
        sum += social.degree(u);
    return sum / nbrs.size();
}

std::size_t classic_hindex(UserId v, const SocialGraph& social) {
    auto nbrs = social.neighbors(v);
    std::vector<std::size_t> degs;
    degs.reserve(nbrs.size());
    for (UserId u : nbrs)
        degs.push_back(social.degree(u));
    std::sort(degs.begin(), degs.end(), std::greater<>());
    std::size_t h = 0;
    while (h < degs.size() && degs[h] >= h + 1)
        ++h;
    return h;
}

ImpactParts impact_factor_parts(UserId v, const SocialGraph& social) {
    auto nbrs = social.neighbors(v);
    if (nbrs.empty())
        return {};
    std::size_t k = avg_neighbor_degree(v, social);

    ImpactParts parts;
    parts.degree = nbrs.size();
    for (UserId u : nbrs) {
        if (social.degree(u) >= k) {
            parts.halves += 2;
            continue;
        }
        // sub-threshold neighbor: one half-unit per neighbor of u
        // (excluding v itself) that clears v's threshold
        for (UserId w : social.neighbors(u))
            if (w != v && social.degree(w) >= k)
                parts.halves += 1;
    }
    return parts;
}

double impact_factor(UserId v, const SocialGraph& social) {
    return impact_factor_parts(v, social).value();
}

std::vector<CentralityScore> compute_centrality(const SocialGraph& social) {
    std::vector<CentralityScore> scores;
    for (UserId u : social.users()) {
        auto parts = impact_factor_parts(u, social);
        std::size_t k = parts.degree == 0 ? 0 : avg_neighbor_degree(u, social);
        scores.push_back({u, k, parts.value(), classic_hindex(u, social)});
    }
    return scores;
}

} // namespace cci
