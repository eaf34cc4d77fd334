#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "folknet/percolation.hpp"

namespace folknet {

enum class TauCounting {
    attributions,  ///< one count per (user, item, tag) triple
    weighted,      ///< link weight 1/k per triple
};

/// Tag usage counts of one user, or of the whole sample when owner is empty.
struct TagSpectrum {
    std::optional<EntityId> owner;
    std::map<EntityId, double> counts;
    double total = 0.0;

    bool empty() const { return counts.empty(); }
    double count(EntityId tag) const {
        auto it = counts.find(tag);
        return it == counts.end() ? 0.0 : it->second;
    }
    /// Builds a spectrum from explicit counts; zero counts are dropped.
    static TagSpectrum from_counts(std::map<EntityId, double> counts, std::optional<EntityId> owner = std::nullopt);
};

TagSpectrum tag_spectrum(const TripartiteNetwork& net, EntityId user, TauCounting counting = TauCounting::attributions);
TagSpectrum sample_spectrum(const TripartiteNetwork& net, TauCounting counting = TauCounting::attributions);

/// Shannon entropy in nats. Throws DataError for an empty spectrum.
double entropy(const TagSpectrum& spectrum);

/// Elementwise sqrt(1 - C^2) over a correlation matrix.
class SineMatrix {
public:
    explicit SineMatrix(const CorrelationMatrix& c);

    std::size_t size() const { return members_.size(); }
    std::span<const EntityId> members() const { return members_; }
    double operator()(std::size_t a, std::size_t b) const { return values_[a * size() + b]; }
    std::optional<std::size_t> position_of(EntityId tag) const;

private:
    std::vector<EntityId> members_;
    std::vector<std::size_t> position_;
    std::vector<double> values_;
};

inline SineMatrix sine_matrix(const CorrelationMatrix& c) { return SineMatrix(c); }

/// Sum over ordered tag pairs of S[I][J] * a[I] * b[J]. Exactly symmetric in (a, b).
double cross_diversity(const TagSpectrum& a, const TagSpectrum& b, const SineMatrix& s);
/// d = sum over ordered pairs S[I][J] tau_I tau_J; unordered-pair sum is d / 2.
double diversity(const TagSpectrum& spectrum, const SineMatrix& s);
/// Normalized cross sum; throws DataError if either diversity is zero.
double pairwise_distance(const TagSpectrum& a, const TagSpectrum& b, const SineMatrix& s);

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Green (low r) to blue (high r) over log2(r) clamped to [-2, 2];
/// undefined r maps to gray.
Rgb activity_color(std::optional<double> ratio);

struct IslandActivity {
    std::size_t island = 0;
    double p_sample = 0.0;
    double p_user = 0.0;
    std::optional<double> ratio;
    Rgb color;
};

struct ActivityReport {
    std::size_t tree_islands = 0;  ///< island count (root included) of the tree it describes
    std::vector<IslandActivity> records;  ///< indexed by island id
};

/// Per-island probabilities that a tag use (restricted to the tree's tags)
/// falls in the island, for the user and for the sample, and their ratio.
ActivityReport island_activity(const IslandTree& tree, const TagSpectrum& user, const TagSpectrum& sample);

}  // namespace folknet
