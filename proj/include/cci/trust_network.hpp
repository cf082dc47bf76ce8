#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "cci/dataset.hpp"

namespace cci {

enum class PearsonSign : std::uint8_t { positive, nonpositive, undefined };

/// Directed trust edge. Components are min-max scaled to [0, 1] over the
/// whole network unless the network was built in raw mode; the weight is
/// always exactly 2*alpha1 + alpha2 + alpha3.
struct TrustEdge {
    UserId from = 0;
    UserId to = 0;
    double alpha1 = 0; // item similarity, zeroed unless pearson > 0
    double alpha2 = 0; // connection similarity
    double alpha3 = 0; // destination centrality
    double weight = 0;
    PearsonSign pearson_sign = PearsonSign::undefined;
};

/// Min-max record for one component. A degenerate component (min == max)
/// scales to 1 for positive raw values and 0 otherwise.
struct ComponentNorm {
    double min = 0;
    double max = 0;

    double scale(double raw) const {
        if (max > min) {
            double s = (raw - min) / (max - min);
            return s < 0 ? 0.0 : (s > 1 ? 1.0 : s);
        }
        return raw > 0 ? 1.0 : 0.0;
    }
};

struct NormRecord {
    ComponentNorm alpha1;
    ComponentNorm alpha2;
    ComponentNorm alpha3;
    bool raw = false; // raw mode: scale() is identity

    double scale1(double v) const { return raw ? v : alpha1.scale(v); }
    double scale2(double v) const { return raw ? v : alpha2.scale(v); }
    double scale3(double v) const { return raw ? v : alpha3.scale(v); }
};

struct NetworkConfig {
    bool raw_weights = false;
    int threads = 1;
};

/// Single directed edge from raw signals: alpha1 = item similarity gated
/// on a strictly positive pearson, alpha2 = connection similarity,
/// alpha3 = the destination node's impact factor, all scaled through
/// `norms`. Callers must have established that the (a, b) pair passes
/// the edge-existence test.
TrustEdge compute_edge_weight(UserId a, UserId b, const RatingView& ratings,
                              const SocialGraph& social, const NormRecord& norms);

/// Per-query weight overrides for leave-one-out evaluation: full
/// replacement out-edge lists (and their weight sums) for the handful of
/// nodes whose edges depend on the held-out rating.
struct EdgePatch {
    std::unordered_map<UserId, std::vector<TrustEdge>> adj;
    std::unordered_map<UserId, double> sums;

    bool empty() const { return adj.empty(); }
};

class TrustNetwork {
public:
    /// Builds the full trust graph: an edge pair (a, b) exists iff the
    /// users are socially linked, co-rated at least one item, or share
    /// at least one friend. Component normalization is recorded so that
    /// per-query recomputation can reuse the same scaling.
    static TrustNetwork build(const Dataset& dataset, const NetworkConfig& config = {});

    /// Test/benchmark constructor: explicit directed weighted edges. Each
    /// weight w is split into components (w/4, w/4, w/4) so the edge
    /// invariant holds; weights must lie in [0, 4].
    static TrustNetwork from_raw_edges(
        const std::vector<std::tuple<UserId, UserId, double>>& edges);

    const std::vector<UserId>& nodes() const { return nodes_; }
    bool has_node(UserId u) const { return index_.count(u) != 0; }
    std::span<const TrustEdge> out_edges(UserId u) const;
    double out_weight_sum(UserId u) const;
    const TrustEdge* find_edge(UserId from, UserId to) const;
    std::size_t num_edges() const { return num_edges_; }
    const NormRecord& norms() const { return norms_; }

    /// One line per edge `<from> <to> <a1> <a2> <a3> <w>`, 6 decimals,
    /// sorted by (from, to).
    void export_edges(std::ostream& out) const;

    /// Recomputes the edges whose alpha1 depends on the rating hidden by
    /// `masked` (edges between the masked user and raters of the masked
    /// item), reusing the stored normalization record. Edges whose
    /// existence rested solely on that co-rating are dropped.
    EdgePatch loo_patch(const MaskedRatingView& masked, const SocialGraph& social) const;

private:
    std::uint32_t slot(UserId u) const { return index_.at(u); }

    std::vector<UserId> nodes_;
    std::unordered_map<UserId, std::uint32_t> index_;
    std::vector<std::vector<TrustEdge>> adj_;
    std::vector<double> out_sum_;
    NormRecord norms_;
    std::size_t num_edges_ = 0;
};

/// Read access used by the walker: base network plus optional per-query
/// patch.
struct NetView {
    const TrustNetwork* net;
    const EdgePatch* patch = nullptr;

    std::span<const TrustEdge> out_edges(UserId u) const;
    double out_weight_sum(UserId u) const;
    /// Weight of (from, to), 0 when absent.
    double weight(UserId from, UserId to) const;
};

} // namespace cci
