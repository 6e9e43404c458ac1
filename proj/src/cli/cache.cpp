#include "arrange/cli/cache.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "arrange/cli/job.hpp"
#include "arrange/cli/serialize.hpp"
#include "arrange/error.hpp"

namespace arrange::cli {

namespace fs = std::filesystem;

namespace {

// Bumped whenever the stored layout or the algorithms behind it change.
constexpr int kCacheFormat = 1;

std::uint64_t fnv1a(const std::string& data)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

fs::path ResultCache::default_dir()
{
    if (const char* d = std::getenv("ARRANGE_CACHE_DIR"); d && *d)
        return d;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x)
        return fs::path(x) / "arrange";
    if (const char* home = std::getenv("HOME"); home && *home)
        return fs::path(home) / ".cache" / "arrange";
    return fs::temp_directory_path() / "arrange-cache";
}

std::string ResultCache::key(const nlohmann::json& model_section)
{
    // nlohmann::json keeps object keys sorted, so dump() is canonical.
    std::string canonical = std::to_string(kSchemaVersion) + ":" + std::to_string(kCacheFormat) + ":"
                            + model_section.dump();
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << fnv1a(canonical);
    return out.str();
}

std::optional<CacheEntry> ResultCache::load(const std::string& key) const
{
    std::ifstream in(dir_ / (key + ".json"));
    if (!in)
        return std::nullopt;
    try {
        nlohmann::json doc = nlohmann::json::parse(in);
        if (doc.at("format").get<int>() != kCacheFormat)
            return std::nullopt;
        CacheEntry e;
        e.poset = poset_from_json(doc.at("poset"));
        if (!doc.at("input_poset").is_null())
            e.input_poset = poset_from_json(doc.at("input_poset"));
        e.stalks = stalks_from_json(doc.at("stalks"));
        if (e.stalks.size() != e.poset.size())
            return std::nullopt;
        return e;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void ResultCache::store(const std::string& key, const CacheEntry& entry) const
{
    Json doc;
    doc["format"] = kCacheFormat;
    doc["poset"] = poset_to_json(entry.poset);
    doc["input_poset"] = entry.input_poset ? poset_to_json(*entry.input_poset) : Json(nullptr);
    doc["stalks"] = stalks_to_json(entry.stalks);
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec)
        return;
    const fs::path tmp = dir_ / (key + ".json.tmp");
    {
        std::ofstream out(tmp);
        if (!out)
            return;
        out << doc.dump();
        if (!out)
            return;
    }
    fs::rename(tmp, dir_ / (key + ".json"), ec);
    if (ec)
        fs::remove(tmp, ec);
}

} // namespace arrange::cli
