#pragma once

#include <string>
#include <vector>

#include "cci/rating_table.hpp"
#include "cci/social_graph.hpp"

namespace cci {

struct Dataset {
    RatingTable ratings;
    SocialGraph social;
    std::string name;

    /// All users seen in either the rating table or the social graph,
    /// ascending.
    std::vector<UserId> all_users() const;

    bool empty() const { return ratings.size() == 0 && social.num_edges() == 0; }
};

Dataset load_dataset(const std::string& ratings_path, const std::string& social_path,
                     const RatingScale& scale, bool social_directed,
                     const std::string& name, LoadReport* report = nullptr);

} // namespace cci
