#include <zstar/cli/cache.hpp>
#include <zstar/error.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <unistd.h>

namespace zstar::cli
{

namespace
{

std::string now_utc()
{
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

std::string cache_key(const std::string &prefix, const std::string &tail, mpfr_prec_t precision, unsigned long truncation)
{
    return prefix + "|" + tail + "|" + std::to_string(precision) + "|" + std::to_string(truncation);
}

CacheEntry encode(const std::string &key, const Enclosure &e, std::string created_at)
{
    if (e.upper_infinite()) {
        return CacheEntry{key, e.mid().to_hex(), "inf", std::move(created_at)};
    }
    return CacheEntry{key, e.mid().to_hex(), e.rad().to_hex(), std::move(created_at)};
}

Enclosure decode(const CacheEntry &entry, mpfr_prec_t precision)
{
    const BigFloat mid = BigFloat::from_hex(entry.mid_hex, precision);
    if (entry.rad_hex == "inf") {
        return Enclosure::from_bounds(mid, BigFloat::from_hex("inf", precision), precision);
    }
    const BigFloat rad = BigFloat::from_hex(entry.rad_hex, precision);
    if (rad.sign() < 0 || mid.is_inf()) {
        raise(ErrorKind::CorruptCache, "invalid enclosure in cache entry " + entry.key);
    }
    return Enclosure::from_mid_rad(mid, rad);
}

std::string to_json_line(const CacheEntry &e)
{
    const nlohmann::json j = {{"key", e.key}, {"mid_hex", e.mid_hex}, {"rad_hex", e.rad_hex}, {"created_at", e.created_at}};
    return j.dump();
}

CacheEntry from_json_line(const std::string &line)
{
    try {
        const nlohmann::json j = nlohmann::json::parse(line);
        return CacheEntry{j.at("key").get<std::string>(), j.at("mid_hex").get<std::string>(), j.at("rad_hex").get<std::string>(),
                          j.at("created_at").get<std::string>()};
    } catch (const nlohmann::json::exception &ex) {
        raise(ErrorKind::CorruptCache, std::string("unreadable cache line: ") + ex.what());
    }
}

EvalCache::EvalCache(std::filesystem::path dir) : dir_(std::move(dir))
{
    stats_.file = dir_ / "values.jsonl";
    load();
}

void EvalCache::load()
{
    std::ifstream in(stats_.file);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        try {
            CacheEntry e = from_json_line(line);
            const auto last = e.key.rfind('|');
            const auto prec_start = e.key.rfind('|', last - 1);
            if (last == std::string::npos || prec_start == std::string::npos) {
                raise(ErrorKind::CorruptCache, "malformed key");
            }
            // the stored value must decode at the precision named in its key
            decode(e, std::stol(e.key.substr(prec_start + 1, last - prec_start - 1)));
            entries_[e.key] = std::move(e);
        } catch (const Error &) {
            ++stats_.corrupt_lines;
            dirty_ = true; // rewrite without the broken lines
        } catch (const std::logic_error &) {
            ++stats_.corrupt_lines;
            dirty_ = true;
        }
    }
    stats_.entries = entries_.size();
}

std::optional<Enclosure> EvalCache::lookup(const std::string &key, mpfr_prec_t precision)
{
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        ++stats_.misses;
        return std::nullopt;
    }
    try {
        Enclosure e = decode(it->second, precision);
        ++stats_.hits;
        return e;
    } catch (const Error &) {
        entries_.erase(it);
        ++stats_.corrupt_lines;
        ++stats_.misses;
        dirty_ = true;
        return std::nullopt;
    }
}

void EvalCache::store(const std::string &key, const Enclosure &e)
{
    entries_[key] = encode(key, e, now_utc());
    stats_.entries = entries_.size();
    dirty_ = true;
}

void EvalCache::flush()
{
    if (!dirty_) {
        return;
    }
    std::filesystem::create_directories(dir_);
    const std::filesystem::path tmp = dir_ / ("values.jsonl.tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::trunc);
        for (const auto &[key, e] : entries_) {
            out << to_json_line(e) << '\n';
        }
        out.flush();
        if (!out) {
            raise(ErrorKind::CorruptCache, "could not write " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, stats_.file);
    dirty_ = false;
}

void EvalCache::clear()
{
    entries_.clear();
    std::filesystem::remove(stats_.file);
    stats_.entries = 0;
    dirty_ = false;
}

} // namespace zstar::cli
