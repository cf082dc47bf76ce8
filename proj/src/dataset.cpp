#include "cci/dataset.hpp"

#include <algorithm>

namespace cci {

std::vector<UserId> Dataset::all_users() const {
    std::vector<UserId> out = ratings.users();
    std::vector<UserId> social_users = social.users();
    std::vector<UserId> merged;
    merged.reserve(out.size() + social_users.size());
    std::set_union(out.begin(), out.end(), social_users.begin(), social_users.end(),
                   std::back_inserter(merged));
    return merged;
}

Dataset load_dataset(const std::string& ratings_path, const std::string& social_path,
                     const RatingScale& scale, bool social_directed,
                     const std::string& name, LoadReport* report) {
    Dataset ds;
    LoadReport ratings_report, social_report;
    ds.ratings = load_ratings(ratings_path, scale, &ratings_report);
    ds.social = load_social(social_path, social_directed, &social_report);
    ds.name = name;
    if (report) {
        *report = ratings_report;
        report->lines += social_report.lines;
        report->records += social_report.records;
        report->self_loops = social_report.self_loops;
        report->zero_edges = social_report.zero_edges;
    }
    return ds;
}

} // namespace cci
