#include "folknet/synth.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace folknet::synth {

std::uint64_t Rng::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: empty range");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t r = next();
        if (r >= threshold) return r % n;
    }
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

void PlantedConfig::validate() const {
    if (communities < 1) throw std::invalid_argument("planted config: need at least one community");
    if (tags_per_community < 1 || users_per_community < 1 || items_per_community < 1 || items_per_user < 1)
        throw std::invalid_argument("planted config: counts must be positive");
    if (!(p_intra >= 0.0 && p_intra <= 1.0) || !(p_inter >= 0.0 && p_inter <= 1.0))
        throw std::invalid_argument("planted config: probabilities must lie in [0,1]");
    if (p_intra + p_inter > 1.0) throw std::invalid_argument("planted config: p_intra + p_inter exceeds 1");
}

namespace {

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    if constexpr (std::is_floating_point_v<T>) {
        try {
            std::size_t used = 0;
            value = static_cast<T>(std::stod(std::string(text), &used));
            if (used == text.size()) return value;
        } catch (const std::exception&) {
        }
    } else {
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc() && ptr == text.data() + text.size()) return value;
    }
    throw DataError("planted config: bad value for '" + std::string(key) + "': '" + std::string(text) + "'");
}

std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

PlantedConfig parse_config(std::string_view text) {
    PlantedConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = strip(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw DataError("planted config line " + std::to_string(line_no) + ": expected key = value");
        const auto key = strip(view.substr(0, eq));
        const auto value = strip(view.substr(eq + 1));
        if (key == "communities") cfg.communities = parse_number<int>(key, value);
        else if (key == "tags_per_community") cfg.tags_per_community = parse_number<int>(key, value);
        else if (key == "users_per_community") cfg.users_per_community = parse_number<int>(key, value);
        else if (key == "items_per_community") cfg.items_per_community = parse_number<int>(key, value);
        else if (key == "items_per_user") cfg.items_per_user = parse_number<int>(key, value);
        else if (key == "p_intra") cfg.p_intra = parse_number<double>(key, value);
        else if (key == "p_inter") cfg.p_inter = parse_number<double>(key, value);
        else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
        else throw DataError("planted config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
    return cfg;
}

PlantedConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string tag_name(int community, int index) {
    return "c" + std::to_string(community) + "_tag" + std::to_string(index);
}
std::string user_name(int community, int index) {
    return "c" + std::to_string(community) + "_user" + std::to_string(index);
}
std::string item_name(int community, int index) {
    return "c" + std::to_string(community) + "_item" + std::to_string(index);
}

Corpus generate(const PlantedConfig& config) {
    config.validate();
    Rng rng(config.seed);
    Corpus corpus;
    for (int c = 0; c < config.communities; ++c)
        for (int t = 0; t < config.tags_per_community; ++t) corpus.tag_community[tag_name(c, t)] = c;

    const int owned = std::min(config.items_per_user, config.items_per_community);
    std::vector<int> item_order(static_cast<std::size_t>(config.items_per_community));

    auto draw_tag = [&](int community) {
        return tag_name(community, static_cast<int>(rng.below(static_cast<std::uint64_t>(config.tags_per_community))));
    };

    for (int c = 0; c < config.communities; ++c) {
        for (int u = 0; u < config.users_per_community; ++u) {
            const std::string user = user_name(c, u);
            // Partial Fisher-Yates: the first `owned` slots are the user's library.
            std::iota(item_order.begin(), item_order.end(), 0);
            for (int k = 0; k < owned; ++k) {
                const auto j = k + static_cast<int>(rng.below(static_cast<std::uint64_t>(config.items_per_community - k)));
                std::swap(item_order[static_cast<std::size_t>(k)], item_order[static_cast<std::size_t>(j)]);
            }
            for (int k = 0; k < owned; ++k) {
                TaggingEvent event{user, item_name(c, item_order[static_cast<std::size_t>(k)]), {}};
                const int draws = 1 + static_cast<int>(rng.below(3));
                for (int d = 0; d < draws; ++d) {
                    const double x = rng.uniform();
                    std::string tag;
                    if (x < config.p_intra) {
                        tag = draw_tag(c);
                    } else if (x < config.p_intra + config.p_inter && config.communities > 1) {
                        int other = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.communities - 1)));
                        if (other >= c) ++other;
                        tag = draw_tag(other);
                    } else {
                        continue;
                    }
                    if (std::find(event.tags.begin(), event.tags.end(), tag) == event.tags.end())
                        event.tags.push_back(std::move(tag));
                }
                if (event.tags.empty()) event.tags.push_back(draw_tag(c));
                corpus.events.push_back(std::move(event));
            }
        }
    }
    return corpus;
}

double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("rand_index: labelings differ in length");
    const std::size_t n = a.size();
    if (n < 2) return 1.0;
    std::size_t agree = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            agree += ((a[i] == a[j]) == (b[i] == b[j])) ? 1 : 0;
            ++total;
        }
    }
    return static_cast<double>(agree) / static_cast<double>(total);
}

}  // namespace folknet::synth
