#pragma once

#include <cstdint>
#include <cstddef>

namespace cci {

using UserId = std::uint32_t;
using ItemId = std::uint32_t;

struct RatedItem {
    ItemId item;
    double rating;
};

/// Rating scale in force for a dataset. `step == 0` means continuous.
/// `rmse_max` is carried here because the precision metric needs the
/// maximum possible error, which is configured per dataset and is not
/// always `max - min`.
struct RatingScale {
    double min = 1.0;
    double max = 5.0;
    double step = 1.0;
    double rmse_max = 4.0;

    bool contains(double r) const { return r >= min && r <= max; }
    double clamp(double r) const { return r < min ? min : (r > max ? max : r); }

    // throws DomainError on an inconsistent scale
    void validate() const;
};

} // namespace cci
