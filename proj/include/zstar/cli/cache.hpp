#ifndef ZSTAR_CLI_CACHE_HPP
#define ZSTAR_CLI_CACHE_HPP

#include <zstar/enclosure.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>

namespace zstar::cli
{

struct CacheEntry {
    std::string key; // "prefix|tail|precision|truncation"
    std::string mid_hex;
    std::string rad_hex; // "inf" for an enclosure unbounded above
    std::string created_at;

    friend bool operator==(const CacheEntry &, const CacheEntry &) = default;
};

std::string cache_key(const std::string &prefix, const std::string &tail, mpfr_prec_t precision, unsigned long truncation);

CacheEntry encode(const std::string &key, const Enclosure &e, std::string created_at);
// CorruptCache on malformed fields.
Enclosure decode(const CacheEntry &entry, mpfr_prec_t precision);

std::string to_json_line(const CacheEntry &e);
// CorruptCache on a line that is not a complete entry.
CacheEntry from_json_line(const std::string &line);

struct CacheStats {
    std::size_t entries = 0;
    std::size_t corrupt_lines = 0; // discarded while loading
    std::size_t hits = 0;
    std::size_t misses = 0;
    std::filesystem::path file;
};

// One JSON object per line in <dir>/values.jsonl. Writes go to a temporary
// file that replaces the cache atomically.
class EvalCache
{
public:
    explicit EvalCache(std::filesystem::path dir);

    std::optional<Enclosure> lookup(const std::string &key, mpfr_prec_t precision);
    void store(const std::string &key, const Enclosure &e);
    void flush();
    void clear();

    const CacheStats &stats() const
    {
        return stats_;
    }

private:
    void load();

    std::filesystem::path dir_;
    std::map<std::string, CacheEntry> entries_;
    CacheStats stats_;
    bool dirty_ = false;
};

} // namespace zstar::cli

#endif
