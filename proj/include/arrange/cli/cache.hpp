#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arrange/intersection_poset.hpp"
#include "arrange/sheaf_decomposition.hpp"

namespace arrange::cli {

struct CacheEntry {
    IntersectionPoset poset;
    std::optional<IntersectionPoset> input_poset;
    std::vector<StalkTable> stalks;
};

/**
 * On-disk store of posets and stalk tables keyed by a hash of the model
 * section. Unreadable or stale entries count as misses.
 */
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    /// ARRANGE_CACHE_DIR, else $XDG_CACHE_HOME/arrange, else ~/.cache/arrange.
    static std::filesystem::path default_dir();

    static std::string key(const nlohmann::json& model_section);

    std::optional<CacheEntry> load(const std::string& key) const;
    /// Best effort; failures to write are ignored.
    void store(const std::string& key, const CacheEntry& entry) const;

    const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
};

} // namespace arrange::cli
