#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "folknet/model.hpp"

namespace folknet {

/// Sparse nonnegative profile of one entity over another entity family.
/// Entries are sorted by coordinate and strictly positive.
struct SignatureVector {
    EntityKind owner_kind = EntityKind::user;
    EntityId owner = 0;
    EntityKind axis = EntityKind::item;
    std::vector<std::pair<EntityId, double>> entries;

    bool empty() const { return entries.empty(); }
    double value(EntityId coordinate) const;
    double norm() const;
};

/// Binary ownership vector of a user over items.
SignatureVector user_item_signature(const TripartiteNetwork& net, EntityId user);
/// Binary audience vector of an item over users.
SignatureVector item_user_signature(const TripartiteNetwork& net, EntityId item);
/// Item profile over tags, summed over users.
SignatureVector item_tag_signature(const TripartiteNetwork& net, EntityId item);

enum class TagItemWeighting {
    summed,  ///< entry = summed link weight over users
    binary,  ///< entry = 1 if the tag was ever attributed to the item
};

/// Tag profile over items; transpose view of item_tag_signature().
SignatureVector tag_item_signature(const TripartiteNetwork& net, EntityId tag,
                                   TagItemWeighting weighting = TagItemWeighting::summed);

/// Cosine of two profiles on the same axis; 0 if either vector is empty.
double cosine(const SignatureVector& u, const SignatureVector& v);

enum class View {
    users_via_items,
    items_via_users,
    items_via_tags,
    tags_via_items,
};

std::string_view to_string(View view);
View parse_view(std::string_view text);
EntityKind view_family(View view);
EntityKind view_axis(View view);
/// Resolves a (family, axis) combination; throws for unsupported pairs.
View view_for(EntityKind family, EntityKind axis);
View default_view(EntityKind family);

struct CorrelationOptions {
    TagItemWeighting tag_weighting = TagItemWeighting::summed;
    /// Matrices with more members than this use sparse row storage.
    std::size_t dense_limit = 4096;
    unsigned threads = 1;
};

/// Symmetric matrix of cosine similarities among members of one family.
class CorrelationMatrix {
public:
    using Row = std::vector<std::pair<std::uint32_t, double>>;

    /// Builds a dense matrix from explicit values (row-major, n*n).
    /// Throws std::invalid_argument unless symmetric with entries in [0,1].
    static CorrelationMatrix from_dense(EntityKind family, View view, std::vector<EntityId> members,
                                        std::vector<double> values);

    EntityKind family() const { return family_; }
    View view() const { return view_; }
    std::size_t size() const { return members_.size(); }
    std::span<const EntityId> members() const { return members_; }
    bool is_dense() const { return !dense_.empty() || members_.empty(); }

    /// Entry at matrix positions (a, b).
    double operator()(std::size_t a, std::size_t b) const;
    std::optional<std::size_t> position_of(EntityId id) const;

    /// Members whose signature under the view is empty (diagonal forced to 0).
    const std::vector<bool>& zero_signature() const { return zero_signature_; }

    /// Calls f(a, b, value) for every nonzero entry with a < b, row-major.
    template <class F>
    void for_each_upper(F&& f) const {
        const std::size_t n = size();
        if (is_dense()) {
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b)
                    if (const double v = dense_[a * n + b]; v != 0.0) f(a, b, v);
        } else {
            for (std::size_t a = 0; a < n; ++a)
                for (const auto& [b, v] : rows_[a])
                    if (b > a) f(a, static_cast<std::size_t>(b), v);
        }
    }

    std::vector<double> to_dense() const;

private:
    friend CorrelationMatrix correlation_matrix(const TripartiteNetwork&, View,
                                                std::optional<std::vector<EntityId>>,
                                                const CorrelationOptions&);

    EntityKind family_ = EntityKind::tag;
    View view_ = View::tags_via_items;
    std::vector<EntityId> members_;
    std::vector<std::size_t> position_;  // entity id -> position + 1, 0 if absent
    std::vector<bool> zero_signature_;
    std::vector<double> dense_;
    std::vector<Row> rows_;  // sparse storage, sorted by column, diagonal included

    void index_members();
};

/// Correlation matrix of `members` (default: the whole family) under `view`.
CorrelationMatrix correlation_matrix(const TripartiteNetwork& net, View view,
                                     std::optional<std::vector<EntityId>> members = std::nullopt,
                                     const CorrelationOptions& options = {});

SignatureVector signature(const TripartiteNetwork& net, View view, EntityId id,
                          TagItemWeighting tag_weighting = TagItemWeighting::summed);

/// Usage of an entity: link count for tags, audience for items, library size for users.
std::size_t usage(const TripartiteNetwork& net, EntityKind family, EntityId id);

/// The n most used entities of a family, ties broken by smaller id.
std::vector<EntityId> top_n(const TripartiteNetwork& net, EntityKind family, std::size_t n);

}  // namespace folknet
