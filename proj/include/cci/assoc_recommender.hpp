#pragma once

#include <optional>
#include <vector>

#include "cci/rating_table.hpp"

namespace cci {

/// floor(mean of the user's ratings). DomainError for users with no
/// ratings (the fallback is disabled for them).
double interest_threshold(UserId user, const RatingView& ratings);

struct InterestProfile {
    UserId user;
    double threshold;
    std::vector<ItemId> liked_items; // rated >= threshold, ascending
};

InterestProfile interest_profile(UserId user, const RatingView& ratings);

struct AssociationRule {
    std::vector<ItemId> antecedent; // sorted, nonempty
    std::vector<ItemId> consequent; // sorted, nonempty, disjoint from antecedent
    double support = 0;
    double confidence = 0;
    double lift = 0;
};

/// All rules A => B with support(A u B) >= min_support and
/// confidence >= min_confidence, mined level-wise. Transactions are
/// deduplicated item sets. `max_itemset_size` caps |A u B|; 0 means no
/// cap. Output is sorted by (antecedent, consequent). Throws DomainError
/// on an empty corpus.
std::vector<AssociationRule> mine_rules(const std::vector<std::vector<ItemId>>& transactions,
                                        double min_support, double min_confidence,
                                        std::size_t max_itemset_size = 0);

/// confidence / support(consequent); nullopt when the consequent never
/// occurs (rule is discarded by callers).
std::optional<double> lift(const AssociationRule& rule,
                           const std::vector<std::vector<ItemId>>& transactions);

struct FallbackRecommendation {
    ItemId item = 0;
    double score_evidence = 0; // mean rating among visited raters
    std::size_t overlap = 0;   // |antecedent| matched inside the target's items
    double lift = 0;
    AssociationRule supporting_rule;
};

struct RuleConfig {
    double min_support = 0.2;
    double min_confidence = 0.5;
    std::size_t top_k = 10;
    std::size_t max_itemset_size = 6;
};

/// Mode-B fallback: mine rules over the visited users' rated-item sets,
/// keep rules anchored in the target's own items with lift >= 1, and
/// recommend unseen consequent items whose mean rating among visited
/// raters clears the target's interest threshold. Ranked by
/// (overlap, lift, item) descending.
std::vector<FallbackRecommendation> recommend_fallback(UserId target,
                                                       const std::vector<UserId>& visited,
                                                       const RatingView& ratings,
                                                       const RuleConfig& config);

} // namespace cci
