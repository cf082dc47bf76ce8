#include "cci/social_graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cci/errors.hpp"
#include "cci/rating_table.hpp"

namespace cci {

namespace {

bool insert_sorted(std::vector<UserId>& v, UserId x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x)
        return false;
    v.insert(it, x);
    return true;
}

} // namespace

bool SocialGraph::add_edge(UserId from, UserId to) {
    if (from == to)
        return false;
    bool inserted = insert_sorted(adj_[from], to);
    if (inserted)
        ++num_edges_;
    if (!directed_) {
        if (insert_sorted(adj_[to], from))
            ++num_edges_;
    }
    return inserted;
}

bool SocialGraph::has_edge(UserId from, UserId to) const {
    auto it = adj_.find(from);
    if (it == adj_.end())
        return false;
    return std::binary_search(it->second.begin(), it->second.end(), to);
}

std::span<const UserId> SocialGraph::neighbors(UserId u) const {
    auto it = adj_.find(u);
    if (it == adj_.end())
        return {};
    return it->second;
}

std::vector<UserId> SocialGraph::users() const {
    std::vector<UserId> out;
    out.reserve(adj_.size());
    for (const auto& [u, nbrs] : adj_)
        out.push_back(u);
    return out;
}

void SocialGraph::symmetrize() {
    std::vector<std::pair<UserId, UserId>> missing;
    for (const auto& [u, nbrs] : adj_)
        for (UserId v : nbrs)
            if (!has_edge(v, u))
                missing.emplace_back(v, u);
    for (const auto& [f, t] : missing)
        if (insert_sorted(adj_[f], t))
            ++num_edges_;
    directed_ = false;
}

std::size_t SocialGraph::mutual_friend_count(UserId a, UserId b) const {
    auto na = neighbors(a);
    auto nb = neighbors(b);
    std::size_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < na.size() && j < nb.size()) {
        if (na[i] < nb[j])
            ++i;
        else if (nb[j] < na[i])
            ++j;
        else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

SocialGraph load_social(const std::string& path, bool directed, LoadReport* report) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open social file: " + path);

    SocialGraph graph(directed);
    LoadReport local;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        ++local.lines;

        bool blank = true;
        for (char c : line) {
            if (c == ' ' || c == '\t' || c == '\r')
                continue;
            blank = (c == '#');
            break;
        }
        if (blank)
            continue;

        std::istringstream fields(line);
        std::vector<std::string> toks;
        std::string tok;
        while (fields >> tok)
            toks.push_back(tok);
        if (toks.size() != 2 && toks.size() != 3)
            throw ParseError(path, line_no,
                             "expected 2 or 3 fields (user user [0|1]), got " +
                                 std::to_string(toks.size()));

        auto parse_user = [&](const std::string& t) -> UserId {
            try {
                std::size_t pos = 0;
                long long v = std::stoll(t, &pos);
                if (pos != t.size() || v < 0 || v > 0xFFFFFFFFLL)
                    throw std::invalid_argument(t);
                return static_cast<UserId>(v);
            } catch (const std::exception&) {
                throw ParseError(path, line_no, "bad user id '" + t + "'");
            }
        };
        UserId a = parse_user(toks[0]);
        UserId b = parse_user(toks[1]);

        if (toks.size() == 3) {
            if (toks[2] == "0") {
                ++local.zero_edges;
                continue;
            }
            if (toks[2] != "1")
                throw ParseError(path, line_no, "trust value must be 0 or 1, got '" + toks[2] + "'");
        }
        if (a == b) {
            ++local.self_loops;
            continue;
        }
        graph.add_edge(a, b);
        ++local.records;
    }
    if (report)
        *report = local;
    return graph;
}

void save_social(const SocialGraph& graph, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write social file: " + path);
    for (UserId u : graph.users())
        for (UserId v : graph.neighbors(u))
            if (graph.directed() || u < v)
                out << u << ' ' << v << " 1\n";
}

} // namespace cci
