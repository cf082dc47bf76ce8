#pragma once

#include <optional>
#include <vector>

#include "cci/rating_table.hpp"
#include "cci/social_graph.hpp"

namespace cci {

/// Ratings of the items both users rated, paired up: (r_a, r_b) per
/// co-rated item, ordered by item id.
std::vector<std::pair<double, double>> co_ratings(UserId a, UserId b,
                                                  const RatingView& ratings);

/// Pearson correlation over the co-rated item set, with per-user means
/// taken over the co-rated ratings. Undefined when fewer than two items
/// are co-rated or either centered vector has zero norm.
std::optional<double> pearson(UserId a, UserId b, const RatingView& ratings);

/// Item-similarity impact factor: sum of both users' ratings over the
/// co-rated set divided by the number of co-rated items. Undefined when
/// nothing is co-rated.
std::optional<double> sim_item(UserId a, UserId b, const RatingView& ratings);

/// Connection similarity |F(a) n F(b)| / |F(a)|. Asymmetric in (a, b);
/// undefined when a has no friends.
std::optional<double> sim_con(UserId a, UserId b, const SocialGraph& social);

/// Degree impact factor (deg(a) + deg(b)) / |F(a) n F(b)|. Undefined
/// when there is no mutual friend.
std::optional<double> sim_deg(UserId a, UserId b, const SocialGraph& social);

struct PairSimilarity {
    std::optional<double> pearson;
    std::optional<double> sim_item;
    std::optional<double> sim_con;
    std::optional<double> sim_deg;
};

PairSimilarity compute_pair_similarity(UserId a, UserId b, const RatingView& ratings,
                                       const SocialGraph& social);

} // namespace cci
