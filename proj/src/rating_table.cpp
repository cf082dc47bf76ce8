#include "cci/rating_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cci/errors.hpp"

namespace cci {

void RatingScale::validate() const {
    if (!(min < max))
        throw DomainError("rating scale: min must be < max");
    if (step < 0)
        throw DomainError("rating scale: step must be >= 0");
    if (step > 0) {
        double k = (max - min) / step;
        if (std::fabs(k - std::round(k)) > 1e-9)
            throw DomainError("rating scale: (max - min) must be a multiple of step");
    }
    if (!(rmse_max > 0))
        throw DomainError("rating scale: rmse_max must be > 0");
}

std::optional<double> user_mean(const RatingView& view, UserId u) {
    auto items = view.items_of(u);
    if (items.empty())
        return std::nullopt;
    double sum = 0;
    for (const auto& ri : items)
        sum += ri.rating;
    return sum / static_cast<double>(items.size());
}

// ---------------------------------------------------------------------------
// RatingTable

bool RatingTable::add(UserId u, ItemId i, double rating) {
    auto& items = by_user_[u];
    auto it = std::lower_bound(items.begin(), items.end(), i,
                               [](const RatedItem& a, ItemId b) { return a.item < b; });
    if (it != items.end() && it->item == i) {
        it->rating = rating;
        return true;
    }
    items.insert(it, RatedItem{i, rating});

    auto& raters = by_item_[i];
    auto rt = std::lower_bound(raters.begin(), raters.end(), u);
    raters.insert(rt, u);
    ++size_;
    return false;
}

bool RatingTable::erase(UserId u, ItemId i) {
    auto uit = by_user_.find(u);
    if (uit == by_user_.end())
        return false;
    auto& items = uit->second;
    auto it = std::lower_bound(items.begin(), items.end(), i,
                               [](const RatedItem& a, ItemId b) { return a.item < b; });
    if (it == items.end() || it->item != i)
        return false;
    items.erase(it);
    if (items.empty())
        by_user_.erase(uit);

    auto iit = by_item_.find(i);
    auto& raters = iit->second;
    raters.erase(std::lower_bound(raters.begin(), raters.end(), u));
    if (raters.empty())
        by_item_.erase(iit);
    --size_;
    return true;
}

std::optional<double> RatingTable::get(UserId u, ItemId i) const {
    auto uit = by_user_.find(u);
    if (uit == by_user_.end())
        return std::nullopt;
    const auto& items = uit->second;
    auto it = std::lower_bound(items.begin(), items.end(), i,
                               [](const RatedItem& a, ItemId b) { return a.item < b; });
    if (it == items.end() || it->item != i)
        return std::nullopt;
    return it->rating;
}

std::span<const RatedItem> RatingTable::items_of(UserId u) const {
    auto it = by_user_.find(u);
    if (it == by_user_.end())
        return {};
    return it->second;
}

std::span<const UserId> RatingTable::raters_of(ItemId i) const {
    auto it = by_item_.find(i);
    if (it == by_item_.end())
        return {};
    return it->second;
}

std::vector<UserId> RatingTable::users() const {
    std::vector<UserId> out;
    out.reserve(by_user_.size());
    for (const auto& [u, items] : by_user_)
        out.push_back(u);
    return out;
}

std::vector<ItemId> RatingTable::items() const {
    std::vector<ItemId> out;
    out.reserve(by_item_.size());
    for (const auto& [i, raters] : by_item_)
        out.push_back(i);
    return out;
}

bool RatingTable::operator==(const RatingTable& other) const {
    if (size_ != other.size_)
        return false;
    if (by_user_.size() != other.by_user_.size())
        return false;
    for (const auto& [u, items] : by_user_) {
        auto it = other.by_user_.find(u);
        if (it == other.by_user_.end() || it->second.size() != items.size())
            return false;
        for (std::size_t k = 0; k < items.size(); ++k)
            if (items[k].item != it->second[k].item ||
                items[k].rating != it->second[k].rating)
                return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// MaskedRatingView

MaskedRatingView::MaskedRatingView(const RatingView& base, UserId user, ItemId item)
    : base_(base), user_(user), item_(item) {
    cell_present_ = base.get(user, item).has_value();
    for (const auto& ri : base.items_of(user))
        if (ri.item != item)
            filtered_items_.push_back(ri);
    for (UserId r : base.raters_of(item))
        if (r != user)
            filtered_raters_.push_back(r);
}

std::optional<double> MaskedRatingView::get(UserId u, ItemId i) const {
    if (u == user_ && i == item_) {
        ++masked_queries_;
        return std::nullopt;
    }
    return base_.get(u, i);
}

std::span<const RatedItem> MaskedRatingView::items_of(UserId u) const {
    if (u != user_)
        return base_.items_of(u);
    // independent post-check: the hidden item must not be in the response
    for (const auto& ri : filtered_items_)
        if (ri.item == item_)
            ++violations_;
    return filtered_items_;
}

std::span<const UserId> MaskedRatingView::raters_of(ItemId i) const {
    if (i != item_)
        return base_.raters_of(i);
    for (UserId r : filtered_raters_)
        if (r == user_)
            ++violations_;
    return filtered_raters_;
}

std::size_t MaskedRatingView::size() const {
    return base_.size() - (cell_present_ ? 1 : 0);
}

// ---------------------------------------------------------------------------
// I/O

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok)
        fields.push_back(tok);
    return fields;
}

bool comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == ' ' || c == '\t' || c == '\r')
            continue;
        return c == '#';
    }
    return true;
}

std::uint32_t parse_id(const std::string& tok, const std::string& path,
                       std::size_t line_no, const char* what) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(tok, &pos);
        if (pos != tok.size() || v < 0 || v > 0xFFFFFFFFLL)
            throw std::invalid_argument(tok);
        return static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
        throw ParseError(path, line_no, std::string("bad ") + what + " '" + tok + "'");
    }
}

double parse_rating(const std::string& tok, const std::string& path, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size() || !std::isfinite(v))
            throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path, line_no, "bad rating '" + tok + "'");
    }
}

} // namespace

RatingTable load_ratings(const std::string& path, const RatingScale& scale,
                         LoadReport* report) {
    scale.validate();
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open ratings file: " + path);

    RatingTable table(scale);
    LoadReport local;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        ++local.lines;
        if (comment_or_blank(line))
            continue;
        auto fields = split_fields(line);
        if (fields.size() != 3)
            throw ParseError(path, line_no,
                             "expected 3 fields (user item rating), got " +
                                 std::to_string(fields.size()));
        UserId u = parse_id(fields[0], path, line_no, "user id");
        ItemId i = parse_id(fields[1], path, line_no, "item id");
        double r = parse_rating(fields[2], path, line_no);
        if (!scale.contains(r))
            throw ValidationError(path, line_no,
                                  "rating " + fields[2] + " outside scale [" +
                                      std::to_string(scale.min) + "," +
                                      std::to_string(scale.max) + "]");
        if (table.add(u, i, r))
            ++local.duplicates;
        ++local.records;
    }
    if (report)
        *report = local;
    return table;
}

void save_ratings(const RatingTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write ratings file: " + path);
    char buf[64];
    for (UserId u : table.users()) {
        for (const auto& ri : table.items_of(u)) {
            std::snprintf(buf, sizeof(buf), "%.17g", ri.rating);
            out << u << ' ' << ri.item << ' ' << buf << '\n';
        }
    }
}

double sparsity(std::size_t n_ratings, std::size_t num_users, std::size_t num_items) {
    if (num_users == 0 || num_items == 0)
        throw DomainError("sparsity: user and item counts must be > 0");
    double cells = static_cast<double>(num_users) * static_cast<double>(num_items);
    if (static_cast<double>(n_ratings) > cells)
        throw DomainError("sparsity: more ratings than user x item cells");
    return (1.0 - static_cast<double>(n_ratings) / cells) * 100.0;
}

double sparsity(const RatingTable& ratings, std::size_t num_users, std::size_t num_items) {
    return sparsity(ratings.size(), num_users, num_items);
}

} // namespace cci
