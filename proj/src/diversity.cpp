#include "folknet/diversity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace folknet {

TagSpectrum TagSpectrum::from_counts(std::map<EntityId, double> counts, std::optional<EntityId> owner) {
    TagSpectrum s;
    s.owner = owner;
    for (const auto& [tag, v] : counts) {
        if (v < 0.0) throw std::invalid_argument("tag spectrum: negative count");
        if (v > 0.0) {
            s.counts.emplace(tag, v);
            s.total += v;
        }
    }
    return s;
}

namespace {

void accumulate(const Ownership& own, TauCounting counting, std::map<EntityId, double>& counts) {
    const double w = counting == TauCounting::weighted ? own.link_weight().to_double() : 1.0;
    for (EntityId tag : own.tags) counts[tag] += w;
}

}  // namespace

TagSpectrum tag_spectrum(const TripartiteNetwork& net, EntityId user, TauCounting counting) {
    if (user >= net.users().size()) throw DataError("unknown user id " + std::to_string(user));
    std::map<EntityId, double> counts;
    for (auto idx : net.ownerships_of_user(user)) accumulate(net.ownerships()[idx], counting, counts);
    return TagSpectrum::from_counts(std::move(counts), user);
}

TagSpectrum sample_spectrum(const TripartiteNetwork& net, TauCounting counting) {
    std::map<EntityId, double> counts;
    for (const auto& own : net.ownerships()) accumulate(own, counting, counts);
    return TagSpectrum::from_counts(std::move(counts));
}

double entropy(const TagSpectrum& spectrum) {
    if (spectrum.empty() || spectrum.total <= 0.0) throw DataError("entropy of an empty tag spectrum is undefined");
    double h = 0.0;
    for (const auto& [tag, count] : spectrum.counts) {
        const double p = count / spectrum.total;
        h -= p * std::log(p);
    }
    return std::max(0.0, h);
}

SineMatrix::SineMatrix(const CorrelationMatrix& c) : members_(c.members().begin(), c.members().end()) {
    const std::size_t n = members_.size();
    const auto dense = c.to_dense();
    values_.resize(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
        const double v = dense[k];
        values_[k] = std::sqrt(std::max(0.0, 1.0 - v * v));
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (members_[p] >= position_.size()) position_.resize(static_cast<std::size_t>(members_[p]) + 1, 0);
        position_[members_[p]] = p + 1;
    }
}

std::optional<std::size_t> SineMatrix::position_of(EntityId tag) const {
    if (tag >= position_.size() || position_[tag] == 0) return std::nullopt;
    return position_[tag] - 1;
}

namespace {

std::vector<std::pair<std::size_t, double>> locate(const TagSpectrum& spectrum, const SineMatrix& s) {
    std::vector<std::pair<std::size_t, double>> out;
    std::string missing;
    for (const auto& [tag, count] : spectrum.counts) {
        if (auto p = s.position_of(tag)) {
            out.emplace_back(*p, count);
        } else {
            missing += (missing.empty() ? "" : ", ") + std::to_string(tag);
        }
    }
    if (!missing.empty()) throw DataError("tags missing from sine matrix: " + missing);
    return out;
}

double one_sided(const std::vector<std::pair<std::size_t, double>>& a,
                 const std::vector<std::pair<std::size_t, double>>& b, const SineMatrix& s) {
    double total = 0.0;
    for (const auto& [pa, ca] : a) {
        double row = 0.0;
        for (const auto& [pb, cb] : b) row += s(pa, pb) * cb;
        total += ca * row;
    }
    return total;
}

}  // namespace

double cross_diversity(const TagSpectrum& a, const TagSpectrum& b, const SineMatrix& s) {
    const auto la = locate(a, s);
    const auto lb = locate(b, s);
    return 0.5 * (one_sided(la, lb, s) + one_sided(lb, la, s));
}

double diversity(const TagSpectrum& spectrum, const SineMatrix& s) {
    const auto l = locate(spectrum, s);
    return one_sided(l, l, s);
}

double pairwise_distance(const TagSpectrum& a, const TagSpectrum& b, const SineMatrix& s) {
    const double da = diversity(a, s);
    const double db = diversity(b, s);
    if (da <= 0.0 || db <= 0.0) throw DataError("pairwise distance undefined: a spectrum has zero diversity");
    return cross_diversity(a, b, s) / std::sqrt(da * db);
}

Rgb activity_color(std::optional<double> ratio) {
    if (!ratio || std::isnan(*ratio) || *ratio < 0.0) return {128, 128, 128};
    const double l = std::clamp(std::log2(*ratio), -2.0, 2.0);
    const double t = (l + 2.0) / 4.0;
    auto channel = [t](double from, double to) {
        return static_cast<std::uint8_t>(std::lround(from + (to - from) * t));
    };
    return {0, channel(200.0, 0.0), channel(0.0, 220.0)};
}

ActivityReport island_activity(const IslandTree& tree, const TagSpectrum& user, const TagSpectrum& sample) {
    if (tree.family != EntityKind::tag) throw std::invalid_argument("island_activity: tree is not over tags");
    if (user.empty()) throw DataError("island activity: user tag spectrum is empty");

    const auto& all = tree.root().members;
    auto restricted_total = [&](const TagSpectrum& s) {
        double total = 0.0;
        for (EntityId tag : all) total += s.count(tag);
        return total;
    };
    const double sample_total = restricted_total(sample);
    const double user_total = restricted_total(user);
    if (sample_total <= 0.0) throw DataError("island activity: sample uses none of the tree's tags");
    if (user_total <= 0.0) throw DataError("island activity: user uses none of the tree's tags");

    ActivityReport report;
    report.tree_islands = tree.islands.size();
    report.records.reserve(tree.islands.size());
    for (const auto& island : tree.islands) {
        double s = 0.0, u = 0.0;
        for (EntityId tag : island.members) {
            s += sample.count(tag);
            u += user.count(tag);
        }
        IslandActivity rec;
        rec.island = island.id;
        rec.p_sample = s / sample_total;
        rec.p_user = u / user_total;
        if (rec.p_sample > 0.0) rec.ratio = rec.p_user / rec.p_sample;
        rec.color = activity_color(rec.ratio);
        report.records.push_back(rec);
    }
    return report;
}

}  // namespace folknet
