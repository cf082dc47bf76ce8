#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cci/types.hpp"

namespace cci {

struct LoadReport;

/// Binary friendship/trust adjacency. Neighbor lists are kept sorted and
/// deduplicated; self-loops are rejected at insert time.
class SocialGraph {
public:
    explicit SocialGraph(bool directed = false) : directed_(directed) {}

    /// Returns false (and inserts nothing) for self-loops. In undirected
    /// mode the reverse edge is inserted as well.
    bool add_edge(UserId from, UserId to);

    bool has_edge(UserId from, UserId to) const;
    std::span<const UserId> neighbors(UserId u) const;
    std::size_t degree(UserId u) const { return neighbors(u).size(); }

    bool directed() const { return directed_; }
    std::size_t num_edges() const { return num_edges_; } // directed count
    std::vector<UserId> users() const;

    /// Adds the reverse of every edge. Idempotent.
    void symmetrize();

    std::size_t mutual_friend_count(UserId a, UserId b) const;

private:
    std::map<UserId, std::vector<UserId>> adj_;
    bool directed_;
    std::size_t num_edges_ = 0;
};

/// Line format: `<user> <user> [0|1]`; `#` comment lines and blank lines
/// are skipped. Value 0 lines are ignored, self-loops dropped with a
/// warning count. With directed=false edges are symmetrized.
SocialGraph load_social(const std::string& path, bool directed,
                        LoadReport* report = nullptr);

void save_social(const SocialGraph& graph, const std::string& path);

} // namespace cci
