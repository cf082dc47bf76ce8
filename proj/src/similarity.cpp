#include "cci/similarity.hpp"

#include <cmath>

namespace cci {

std::vector<std::pair<double, double>> co_ratings(UserId a, UserId b,
                                                  const RatingView& ratings) {
    auto ia = ratings.items_of(a);
    auto ib = ratings.items_of(b);
    std::vector<std::pair<double, double>> out;
    std::size_t i = 0, j = 0;
    while (i < ia.size() && j < ib.size()) {
        if (ia[i].item < ib[j].item)
            ++i;
        else if (ib[j].item < ia[i].item)
            ++j;
        else {
            out.emplace_back(ia[i].rating, ib[j].rating);
            ++i;
            ++j;
        }
    }
    return out;
}

std::optional<double> pearson(UserId a, UserId b, const RatingView& ratings) {
    auto common = co_ratings(a, b, ratings);
    if (common.size() < 2)
        return std::nullopt;
    double mean_a = 0, mean_b = 0;
    for (const auto& [ra, rb] : common) {
        mean_a += ra;
        mean_b += rb;
    }
    mean_a /= static_cast<double>(common.size());
    mean_b /= static_cast<double>(common.size());

    double num = 0, norm_a = 0, norm_b = 0;
    for (const auto& [ra, rb] : common) {
        double da = ra - mean_a;
        double db = rb - mean_b;
        num += da * db;
        norm_a += da * da;
        norm_b += db * db;
    }
    if (norm_a == 0 || norm_b == 0)
        return std::nullopt;
    return num / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

std::optional<double> sim_item(UserId a, UserId b, const RatingView& ratings) {
    auto common = co_ratings(a, b, ratings);
    if (common.empty())
        return std::nullopt;
    double sum = 0;
    for (const auto& [ra, rb] : common)
        sum += ra + rb;
    return sum / static_cast<double>(common.size());
}

std::optional<double> sim_con(UserId a, UserId b, const SocialGraph& social) {
    std::size_t fa = social.degree(a);
    if (fa == 0)
        return std::nullopt;
    std::size_t mutual = social.mutual_friend_count(a, b);
    return static_cast<double>(mutual) / static_cast<double>(fa);
}

std::optional<double> sim_deg(UserId a, UserId b, const SocialGraph& social) {
    std::size_t mutual = social.mutual_friend_count(a, b);
    if (mutual == 0)
        return std::nullopt;
    return static_cast<double>(social.degree(a) + social.degree(b)) /
           static_cast<double>(mutual);
}

PairSimilarity compute_pair_similarity(UserId a, UserId b, const RatingView& ratings,
                                       const SocialGraph& social) {
    return PairSimilarity{
        pearson(a, b, ratings),
        sim_item(a, b, ratings),
        sim_con(a, b, social),
        sim_deg(a, b, social),
    };
}

} // namespace cci
