#include "cci/trust_network.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>
#include <unordered_set>

#include "cci/centrality.hpp"
#include "cci/errors.hpp"
#include "cci/similarity.hpp"

namespace cci {

namespace {

std::uint64_t pack_pair(UserId a, UserId b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct PairComponents {
    UserId a = 0, b = 0;
    double alpha1_raw = 0;        // symmetric
    PearsonSign sign = PearsonSign::undefined;
    double con_ab = 0, con_ba = 0; // sim_con is asymmetric
};

PearsonSign sign_of(const std::optional<double>& p) {
    if (!p)
        return PearsonSign::undefined;
    return *p > 0 ? PearsonSign::positive : PearsonSign::nonpositive;
}

TrustEdge make_edge(UserId from, UserId to, double a1_raw, PearsonSign sign,
                    double a2_raw, double a3_raw, const NormRecord& norms) {
    TrustEdge e;
    e.from = from;
    e.to = to;
    e.pearson_sign = sign;
    e.alpha1 = sign == PearsonSign::positive ? norms.scale1(a1_raw) : 0.0;
    e.alpha2 = norms.scale2(a2_raw);
    e.alpha3 = norms.scale3(a3_raw);
    e.weight = 2.0 * e.alpha1 + e.alpha2 + e.alpha3;
    return e;
}

} // namespace

TrustEdge compute_edge_weight(UserId a, UserId b, const RatingView& ratings,
                              const SocialGraph& social, const NormRecord& norms) {
    auto p = pearson(a, b, ratings);
    PearsonSign sign = sign_of(p);
    double a1_raw =
        sign == PearsonSign::positive ? sim_item(a, b, ratings).value_or(0.0) : 0.0;
    double a2_raw = sim_con(a, b, social).value_or(0.0);
    double a3_raw = impact_factor(b, social);
    return make_edge(a, b, a1_raw, sign, a2_raw, a3_raw, norms);
}

TrustNetwork TrustNetwork::build(const Dataset& dataset, const NetworkConfig& config) {
    if (dataset.empty())
        throw DomainError("empty dataset");

    TrustNetwork net;
    net.nodes_ = dataset.all_users();
    net.index_.reserve(net.nodes_.size());
    for (std::uint32_t i = 0; i < net.nodes_.size(); ++i)
        net.index_[net.nodes_[i]] = i;
    net.adj_.resize(net.nodes_.size());
    net.out_sum_.assign(net.nodes_.size(), 0.0);
    net.norms_.raw = config.raw_weights;

    const SocialGraph& social = dataset.social;
    const RatingTable& ratings = dataset.ratings;

    // candidate pairs from the three edge criteria, via inverted indices
    std::unordered_set<std::uint64_t> pair_set;
    for (UserId u : social.users())
        for (UserId v : social.neighbors(u)) {
            if (u == v)
                continue;
            pair_set.insert(u < v ? pack_pair(u, v) : pack_pair(v, u));
        }
    for (ItemId i : ratings.items()) {
        auto raters = ratings.raters_of(i);
        for (std::size_t x = 0; x < raters.size(); ++x)
            for (std::size_t y = x + 1; y < raters.size(); ++y)
                pair_set.insert(pack_pair(raters[x], raters[y]));
    }
    // mutual friends: any two in-neighbors of w share the friend w
    {
        std::map<UserId, std::vector<UserId>> in_adj;
        for (UserId u : social.users())
            for (UserId v : social.neighbors(u))
                in_adj[v].push_back(u);
        for (auto& [w, ins] : in_adj) {
            std::sort(ins.begin(), ins.end());
            ins.erase(std::unique(ins.begin(), ins.end()), ins.end());
            for (std::size_t x = 0; x < ins.size(); ++x)
                for (std::size_t y = x + 1; y < ins.size(); ++y)
                    pair_set.insert(pack_pair(ins[x], ins[y]));
        }
    }

    std::vector<std::uint64_t> pairs(pair_set.begin(), pair_set.end());
    std::sort(pairs.begin(), pairs.end());

    // destination centrality, shared by every edge into a node
    std::vector<double> impact(net.nodes_.size(), 0.0);
    {
        auto work = [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i)
                impact[i] = impact_factor(net.nodes_[i], social);
        };
        int threads = std::max(1, config.threads);
        if (threads == 1 || net.nodes_.size() < 256) {
            work(0, net.nodes_.size());
        } else {
            std::vector<std::thread> pool;
            std::size_t chunk = (net.nodes_.size() + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                std::size_t b = std::min<std::size_t>(t * chunk, net.nodes_.size());
                std::size_t e = std::min<std::size_t>(b + chunk, net.nodes_.size());
                if (b < e)
                    pool.emplace_back(work, b, e);
            }
            for (auto& th : pool)
                th.join();
        }
    }

    std::vector<PairComponents> comps(pairs.size());
    {
        auto work = [&](std::size_t begin, std::size_t end) {
            for (std::size_t idx = begin; idx < end; ++idx) {
                UserId a = static_cast<UserId>(pairs[idx] >> 32);
                UserId b = static_cast<UserId>(pairs[idx] & 0xFFFFFFFFu);
                PairComponents& c = comps[idx];
                c.a = a;
                c.b = b;
                auto p = pearson(a, b, ratings);
                c.sign = sign_of(p);
                if (c.sign == PearsonSign::positive)
                    c.alpha1_raw = sim_item(a, b, ratings).value_or(0.0);
                c.con_ab = sim_con(a, b, social).value_or(0.0);
                c.con_ba = sim_con(b, a, social).value_or(0.0);
            }
        };
        int threads = std::max(1, config.threads);
        if (threads == 1 || pairs.size() < 256) {
            work(0, pairs.size());
        } else {
            std::vector<std::thread> pool;
            std::size_t chunk = (pairs.size() + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                std::size_t b = std::min<std::size_t>(t * chunk, pairs.size());
                std::size_t e = std::min<std::size_t>(b + chunk, pairs.size());
                if (b < e)
                    pool.emplace_back(work, b, e);
            }
            for (auto& th : pool)
                th.join();
        }
    }

    if (!config.raw_weights && !comps.empty()) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        net.norms_.alpha1 = net.norms_.alpha2 = net.norms_.alpha3 = {inf, -inf};
        auto take = [](ComponentNorm& n, double v) {
            n.min = std::min(n.min, v);
            n.max = std::max(n.max, v);
        };
        for (const PairComponents& c : comps) {
            double a1 = c.sign == PearsonSign::positive ? c.alpha1_raw : 0.0;
            take(net.norms_.alpha1, a1);
            take(net.norms_.alpha2, c.con_ab);
            take(net.norms_.alpha2, c.con_ba);
            take(net.norms_.alpha3, impact[net.slot(c.b)]);
            take(net.norms_.alpha3, impact[net.slot(c.a)]);
        }
    }

    for (const PairComponents& c : comps) {
        net.adj_[net.slot(c.a)].push_back(make_edge(c.a, c.b, c.alpha1_raw, c.sign,
                                                    c.con_ab, impact[net.slot(c.b)],
                                                    net.norms_));
        net.adj_[net.slot(c.b)].push_back(make_edge(c.b, c.a, c.alpha1_raw, c.sign,
                                                    c.con_ba, impact[net.slot(c.a)],
                                                    net.norms_));
    }
    for (std::size_t i = 0; i < net.adj_.size(); ++i) {
        auto& edges = net.adj_[i];
        std::sort(edges.begin(), edges.end(),
                  [](const TrustEdge& x, const TrustEdge& y) { return x.to < y.to; });
        double sum = 0;
        for (const TrustEdge& e : edges)
            sum += e.weight;
        net.out_sum_[i] = sum;
        net.num_edges_ += edges.size();
    }
    return net;
}

TrustNetwork TrustNetwork::from_raw_edges(
    const std::vector<std::tuple<UserId, UserId, double>>& edges) {
    TrustNetwork net;
    std::vector<UserId> users;
    for (const auto& [f, t, w] : edges) {
        users.push_back(f);
        users.push_back(t);
    }
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());
    net.nodes_ = users;
    for (std::uint32_t i = 0; i < net.nodes_.size(); ++i)
        net.index_[net.nodes_[i]] = i;
    net.adj_.resize(net.nodes_.size());
    net.out_sum_.assign(net.nodes_.size(), 0.0);
    net.norms_.raw = true;

    for (const auto& [f, t, w] : edges) {
        if (f == t || w < 0 || w > 4)
            throw DomainError("from_raw_edges: need from != to and weight in [0,4]");
        TrustEdge e;
        e.from = f;
        e.to = t;
        e.alpha1 = e.alpha2 = e.alpha3 = w / 4.0;
        e.weight = 2.0 * e.alpha1 + e.alpha2 + e.alpha3;
        e.pearson_sign = PearsonSign::undefined;
        net.adj_[net.slot(f)].push_back(e);
    }
    for (std::size_t i = 0; i < net.adj_.size(); ++i) {
        auto& out = net.adj_[i];
        std::sort(out.begin(), out.end(),
                  [](const TrustEdge& x, const TrustEdge& y) { return x.to < y.to; });
        for (std::size_t k = 1; k < out.size(); ++k)
            if (out[k].to == out[k - 1].to)
                throw DomainError("from_raw_edges: duplicate edge");
        double sum = 0;
        for (const TrustEdge& e : out)
            sum += e.weight;
        net.out_sum_[i] = sum;
        net.num_edges_ += out.size();
    }
    return net;
}

std::span<const TrustEdge> TrustNetwork::out_edges(UserId u) const {
    auto it = index_.find(u);
    if (it == index_.end())
        return {};
    return adj_[it->second];
}

double TrustNetwork::out_weight_sum(UserId u) const {
    auto it = index_.find(u);
    if (it == index_.end())
        return 0.0;
    return out_sum_[it->second];
}

const TrustEdge* TrustNetwork::find_edge(UserId from, UserId to) const {
    auto edges = out_edges(from);
    auto it = std::lower_bound(edges.begin(), edges.end(), to,
                               [](const TrustEdge& e, UserId t) { return e.to < t; });
    if (it == edges.end() || it->to != to)
        return nullptr;
    return &*it;
}

void TrustNetwork::export_edges(std::ostream& out) const {
    char buf[160];
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        for (const TrustEdge& e : adj_[i]) {
            std::snprintf(buf, sizeof(buf), "%u %u %.6f %.6f %.6f %.6f\n", e.from, e.to,
                          e.alpha1, e.alpha2, e.alpha3, e.weight);
            out << buf;
        }
    }
}

EdgePatch TrustNetwork::loo_patch(const MaskedRatingView& masked,
                                  const SocialGraph& social) const {
    EdgePatch patch;
    UserId u = masked.masked_user();
    ItemId item = masked.masked_item();
    if (!has_node(u))
        return patch;

    struct Change {
        UserId other;
        bool drop;
        double alpha1_raw;
        PearsonSign sign;
    };
    std::vector<Change> changes;
    for (UserId b : masked.raters_of(item)) {
        const TrustEdge* e = find_edge(u, b);
        if (!e)
            continue;
        bool linked = social.has_edge(u, b) || social.has_edge(b, u) ||
                      social.mutual_friend_count(u, b) > 0;
        bool co_rated = !co_ratings(u, b, masked).empty();
        if (!linked && !co_rated) {
            changes.push_back({b, true, 0.0, PearsonSign::undefined});
            continue;
        }
        auto p = pearson(u, b, masked);
        PearsonSign sign = sign_of(p);
        double a1_raw = sign == PearsonSign::positive
                            ? sim_item(u, b, masked).value_or(0.0)
                            : 0.0;
        changes.push_back({b, false, a1_raw, sign});
    }
    if (changes.empty())
        return patch;

    auto patched_list = [&](UserId node) -> std::vector<TrustEdge>& {
        auto it = patch.adj.find(node);
        if (it == patch.adj.end()) {
            auto base = out_edges(node);
            it = patch.adj.emplace(node, std::vector<TrustEdge>(base.begin(), base.end()))
                     .first;
        }
        return it->second;
    };
    auto apply = [&](UserId from, UserId to, const Change& c) {
        auto& list = patched_list(from);
        auto it = std::lower_bound(list.begin(), list.end(), to,
                                   [](const TrustEdge& e, UserId t) { return e.to < t; });
        if (it == list.end() || it->to != to)
            return;
        if (c.drop) {
            list.erase(it);
            return;
        }
        it->pearson_sign = c.sign;
        it->alpha1 = c.sign == PearsonSign::positive ? norms_.scale1(c.alpha1_raw) : 0.0;
        it->weight = 2.0 * it->alpha1 + it->alpha2 + it->alpha3;
    };
    for (const Change& c : changes) {
        apply(u, c.other, c);
        apply(c.other, u, c);
    }
    for (auto& [node, list] : patch.adj) {
        double sum = 0;
        for (const TrustEdge& e : list)
            sum += e.weight;
        patch.sums[node] = sum;
    }
    return patch;
}

std::span<const TrustEdge> NetView::out_edges(UserId u) const {
    if (patch) {
        auto it = patch->adj.find(u);
        if (it != patch->adj.end())
            return it->second;
    }
    return net->out_edges(u);
}

double NetView::out_weight_sum(UserId u) const {
    if (patch) {
        auto it = patch->sums.find(u);
        if (it != patch->sums.end())
            return it->second;
    }
    return net->out_weight_sum(u);
}

double NetView::weight(UserId from, UserId to) const {
    auto edges = out_edges(from);
    auto it = std::lower_bound(edges.begin(), edges.end(), to,
                               [](const TrustEdge& e, UserId t) { return e.to < t; });
    if (it == edges.end() || it->to != to)
        return 0.0;
    return it->weight;
}

} // namespace cci
