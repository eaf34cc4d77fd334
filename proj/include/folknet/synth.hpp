#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "folknet/model.hpp"

namespace folknet::synth {

/// Planted-community corpus. Users, items and tags are split into
/// `communities` groups; a user owns items of its home community and each
/// tag draw picks a home tag with probability p_intra, a foreign tag with
/// probability p_inter, and nothing otherwise.
struct PlantedConfig {
    int communities = 3;
    int tags_per_community = 20;
    int users_per_community = 30;
    int items_per_community = 40;
    int items_per_user = 10;
    double p_intra = 0.9;
    double p_inter = 0.05;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown keys are errors.
PlantedConfig parse_config(std::string_view text);
PlantedConfig load_config(const std::filesystem::path& path);

struct Corpus {
    std::vector<TaggingEvent> events;
    std::map<std::string, int> tag_community;  ///< every configured tag name -> community
};

Corpus generate(const PlantedConfig& config);

std::string tag_name(int community, int index);
std::string user_name(int community, int index);
std::string item_name(int community, int index);

/// Deterministic splitmix64 stream with portable bounded draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Uniform in [0, 1).
    double uniform();

private:
    std::uint64_t state_;
};

/// Rand index between two labelings of the same elements.
double rand_index(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace folknet::synth
