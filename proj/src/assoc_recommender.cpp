#include "cci/assoc_recommender.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cci/errors.hpp"

namespace cci {

double interest_threshold(UserId user, const RatingView& ratings) {
    auto mean = user_mean(ratings, user);
    if (!mean)
        throw DomainError("interest_threshold: user " + std::to_string(user) +
                          " has no ratings");
    return std::floor(*mean);
}

InterestProfile interest_profile(UserId user, const RatingView& ratings) {
    InterestProfile profile;
    profile.user = user;
    profile.threshold = interest_threshold(user, ratings);
    for (const auto& ri : ratings.items_of(user))
        if (ri.rating >= profile.threshold)
            profile.liked_items.push_back(ri.item);
    return profile;
}

namespace {

using ItemSet = std::vector<ItemId>; // sorted unique

bool contains_subset(const ItemSet& transaction, const ItemSet& set) {
    return std::includes(transaction.begin(), transaction.end(), set.begin(), set.end());
}

std::size_t count_support(const std::vector<ItemSet>& transactions, const ItemSet& set) {
    std::size_t n = 0;
    for (const auto& t : transactions)
        if (contains_subset(t, set))
            ++n;
    return n;
}

} // namespace

std::vector<AssociationRule> mine_rules(const std::vector<std::vector<ItemId>>& raw_transactions,
                                        double min_support, double min_confidence,
                                        std::size_t max_itemset_size) {
    if (raw_transactions.empty())
        throw DomainError("mine_rules: empty transaction corpus");

    std::vector<ItemSet> transactions;
    transactions.reserve(raw_transactions.size());
    for (const auto& t : raw_transactions) {
        ItemSet s(t.begin(), t.end());
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        transactions.push_back(std::move(s));
    }
    const double n = static_cast<double>(transactions.size());

    // level-wise frequent itemset expansion
    std::map<ItemSet, std::size_t> frequent;
    std::vector<ItemSet> level;
    {
        std::map<ItemId, std::size_t> counts;
        for (const auto& t : transactions)
            for (ItemId i : t)
                ++counts[i];
        for (const auto& [i, c] : counts) {
            if (c > 0 && static_cast<double>(c) / n >= min_support) {
                ItemSet s{i};
                frequent[s] = c;
                level.push_back(std::move(s));
            }
        }
    }
    std::size_t size = 1;
    while (!level.empty() && (max_itemset_size == 0 || size < max_itemset_size)) {
        std::vector<ItemSet> next;
        for (std::size_t x = 0; x < level.size(); ++x) {
            for (std::size_t y = x + 1; y < level.size(); ++y) {
                // join candidates sharing all but the last element
                if (!std::equal(level[x].begin(), level[x].end() - 1, level[y].begin(),
                                level[y].end() - 1))
                    break; // level is sorted, no later match possible
                ItemSet cand = level[x];
                cand.push_back(level[y].back());
                // prune: every one-element-dropped subset must be frequent
                bool all_frequent = true;
                for (std::size_t drop = 0; drop < cand.size() && all_frequent; ++drop) {
                    ItemSet probe;
                    probe.reserve(cand.size() - 1);
                    for (std::size_t k = 0; k < cand.size(); ++k)
                        if (k != drop)
                            probe.push_back(cand[k]);
                    if (!frequent.count(probe))
                        all_frequent = false;
                }
                if (!all_frequent)
                    continue;
                std::size_t c = count_support(transactions, cand);
                if (c > 0 && static_cast<double>(c) / n >= min_support) {
                    frequent[cand] = c;
                    next.push_back(std::move(cand));
                }
            }
        }
        std::sort(next.begin(), next.end());
        level = std::move(next);
        ++size;
    }

    std::vector<AssociationRule> rules;
    for (const auto& [set, count] : frequent) {
        if (set.size() < 2)
            continue;
        double supp_rule = static_cast<double>(count) / n;
        // every nonempty proper subset as antecedent
        const std::size_t m = set.size();
        for (std::uint32_t mask = 1; mask + 1 < (1u << m); ++mask) {
            AssociationRule rule;
            for (std::size_t k = 0; k < m; ++k) {
                if (mask & (1u << k))
                    rule.antecedent.push_back(set[k]);
                else
                    rule.consequent.push_back(set[k]);
            }
            auto ait = frequent.find(rule.antecedent);
            std::size_t count_a = ait != frequent.end()
                                      ? ait->second
                                      : count_support(transactions, rule.antecedent);
            double supp_a = static_cast<double>(count_a) / n;
            double conf = supp_rule / supp_a;
            if (conf < min_confidence)
                continue;
            auto cit = frequent.find(rule.consequent);
            std::size_t count_c = cit != frequent.end()
                                      ? cit->second
                                      : count_support(transactions, rule.consequent);
            if (count_c == 0)
                continue; // Lift undefined; cannot happen for observed itemsets
            double supp_c = static_cast<double>(count_c) / n;
            rule.support = supp_rule;
            rule.confidence = conf;
            rule.lift = conf / supp_c;
            rules.push_back(std::move(rule));
        }
    }
    std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
        if (a.antecedent != b.antecedent)
            return a.antecedent < b.antecedent;
        return a.consequent < b.consequent;
    });
    return rules;
}

std::optional<double> lift(const AssociationRule& rule,
                           const std::vector<std::vector<ItemId>>& raw_transactions) {
    std::vector<ItemSet> transactions;
    transactions.reserve(raw_transactions.size());
    for (const auto& t : raw_transactions) {
        ItemSet s(t.begin(), t.end());
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        transactions.push_back(std::move(s));
    }
    std::size_t count_c = count_support(transactions, rule.consequent);
    if (count_c == 0)
        return std::nullopt;
    double supp_c = static_cast<double>(count_c) / static_cast<double>(transactions.size());
    return rule.confidence / supp_c;
}

std::vector<FallbackRecommendation> recommend_fallback(UserId target,
                                                       const std::vector<UserId>& visited,
                                                       const RatingView& ratings,
                                                       const RuleConfig& config) {
    std::vector<UserId> others(visited.begin(), visited.end());
    std::sort(others.begin(), others.end());
    others.erase(std::unique(others.begin(), others.end()), others.end());
    others.erase(std::remove(others.begin(), others.end(), target), others.end());
    if (others.empty())
        throw DomainError("recommend_fallback: no visited users");

    const double threshold = interest_threshold(target, ratings);

    std::vector<std::vector<ItemId>> transactions;
    transactions.reserve(others.size());
    for (UserId v : others) {
        std::vector<ItemId> t;
        for (const auto& ri : ratings.items_of(v))
            t.push_back(ri.item);
        transactions.push_back(std::move(t));
    }

    ItemSet target_items;
    for (const auto& ri : ratings.items_of(target))
        target_items.push_back(ri.item);

    auto rules = mine_rules(transactions, config.min_support, config.min_confidence,
                            config.max_itemset_size);

    std::map<ItemId, FallbackRecommendation> best;
    for (const auto& rule : rules) {
        if (rule.lift < 1.0)
            continue; // unattractive rule
        if (!contains_subset(target_items, rule.antecedent))
            continue;
        std::size_t overlap = rule.antecedent.size();
        for (ItemId c : rule.consequent) {
            if (std::binary_search(target_items.begin(), target_items.end(), c))
                continue;
            double sum = 0;
            std::size_t raters = 0;
            for (UserId v : others) {
                if (auto r = ratings.get(v, c)) {
                    sum += *r;
                    ++raters;
                }
            }
            if (raters == 0)
                continue;
            double evidence = sum / static_cast<double>(raters);
            if (evidence < threshold)
                continue;
            auto it = best.find(c);
            if (it == best.end() || overlap > it->second.overlap ||
                (overlap == it->second.overlap && rule.lift > it->second.lift)) {
                FallbackRecommendation rec;
                rec.item = c;
                rec.score_evidence = evidence;
                rec.overlap = overlap;
                rec.lift = rule.lift;
                rec.supporting_rule = rule;
                best[c] = std::move(rec);
            }
        }
    }

    std::vector<FallbackRecommendation> out;
    out.reserve(best.size());
    for (auto& [item, rec] : best)
        out.push_back(std::move(rec));
    std::sort(out.begin(), out.end(),
              [](const FallbackRecommendation& a, const FallbackRecommendation& b) {
                  if (a.overlap != b.overlap)
                      return a.overlap > b.overlap;
                  if (a.lift != b.lift)
                      return a.lift > b.lift;
                  return a.item > b.item;
              });
    if (out.size() > config.top_k)
        out.resize(config.top_k);
    return out;
}

} // namespace cci
