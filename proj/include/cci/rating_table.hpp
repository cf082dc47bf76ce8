#pragma once

#include <atomic>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cci/types.hpp"

namespace cci {

/// Read-only view over sparse (user, item) -> rating data. The walker,
/// the similarity functions and the recommenders only ever see this
/// interface, so a leave-one-out mask can be slid underneath them
/// without touching the stored table.
class RatingView {
public:
    virtual ~RatingView() = default;

    virtual std::optional<double> get(UserId u, ItemId i) const = 0;
    virtual bool has(UserId u, ItemId i) const { return get(u, i).has_value(); }

    /// Items rated by u, sorted by item id. Empty for unknown users.
    virtual std::span<const RatedItem> items_of(UserId u) const = 0;

    /// Users who rated i, sorted by user id. Empty for unknown items.
    virtual std::span<const UserId> raters_of(ItemId i) const = 0;

    virtual const RatingScale& scale() const = 0;
    virtual std::size_t size() const = 0;
};

/// Mean rating of u over everything visible in the view; nullopt if u
/// has no visible ratings.
std::optional<double> user_mean(const RatingView& view, UserId u);

/// Sparse rating storage with per-user and per-item indices.
class RatingTable : public RatingView {
public:
    RatingTable() = default;
    explicit RatingTable(RatingScale scale) : scale_(scale) {}

    /// Inserts or replaces. Returns true when an existing rating was
    /// replaced (callers count those as duplicate warnings).
    bool add(UserId u, ItemId i, double rating);
    bool erase(UserId u, ItemId i);

    std::optional<double> get(UserId u, ItemId i) const override;
    std::span<const RatedItem> items_of(UserId u) const override;
    std::span<const UserId> raters_of(ItemId i) const override;
    const RatingScale& scale() const override { return scale_; }
    std::size_t size() const override { return size_; }

    void set_scale(const RatingScale& s) { scale_ = s; }

    /// Users with at least one rating, ascending.
    std::vector<UserId> users() const;
    /// Items with at least one rater, ascending.
    std::vector<ItemId> items() const;

    bool operator==(const RatingTable& other) const;

private:
    std::map<UserId, std::vector<RatedItem>> by_user_;
    std::map<ItemId, std::vector<UserId>> by_item_;
    RatingScale scale_;
    std::size_t size_ = 0;
};

/// RatingView with exactly one (user, item) cell hidden. Used by the
/// leave-one-out harness: the engine predicts through this view, so the
/// held-out rating is unreachable by construction.
///
/// Every accessor re-scans its response for the masked cell before
/// returning and counts a violation if it is about to leak; the counter
/// staying at zero across a run is the hygiene proof the evaluation
/// asserts. `masked_queries` separately counts how often callers asked
/// for the hidden cell (those are expected and answered "absent").
class MaskedRatingView : public RatingView {
public:
    MaskedRatingView(const RatingView& base, UserId user, ItemId item);

    std::optional<double> get(UserId u, ItemId i) const override;
    std::span<const RatedItem> items_of(UserId u) const override;
    std::span<const UserId> raters_of(ItemId i) const override;
    const RatingScale& scale() const override { return base_.scale(); }
    std::size_t size() const override;

    UserId masked_user() const { return user_; }
    ItemId masked_item() const { return item_; }

    std::size_t violations() const { return violations_.load(); }
    std::size_t masked_queries() const { return masked_queries_.load(); }

private:
    const RatingView& base_;
    UserId user_;
    ItemId item_;
    bool cell_present_;
    std::vector<RatedItem> filtered_items_; // masked user's items minus the cell
    std::vector<UserId> filtered_raters_;   // masked item's raters minus the user
    mutable std::atomic<std::size_t> violations_{0};
    mutable std::atomic<std::size_t> masked_queries_{0};
};

struct LoadReport {
    std::size_t lines = 0;
    std::size_t records = 0;
    std::size_t duplicates = 0; // ratings replaced by a later line
    std::size_t self_loops = 0; // social edges u-u dropped
    std::size_t zero_edges = 0; // social lines with trust value 0
};

/// Line format: `<user> <item> <rating>`; `#` starts a comment line and
/// blank lines are skipped. Duplicate (user, item) keeps the last
/// occurrence. Throws ParseError / ValidationError with line numbers.
RatingTable load_ratings(const std::string& path, const RatingScale& scale,
                         LoadReport* report = nullptr);

/// Writes the canonical line format sorted by (user, item); reloading
/// the output yields an identical table.
void save_ratings(const RatingTable& table, const std::string& path);

/// (1 - ratings / (users * items)) * 100. Throws DomainError on zero
/// dimensions or an impossible rating count.
double sparsity(std::size_t n_ratings, std::size_t num_users, std::size_t num_items);
double sparsity(const RatingTable& ratings, std::size_t num_users, std::size_t num_items);

} // namespace cci
