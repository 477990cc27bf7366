#pragma once

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "entrovel/series.hpp"

namespace entrovel {

class DatasourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Network failure inside a Transport.
class TransportError : public DatasourceError {
public:
    using DatasourceError::DatasourceError;
};

/// One dataset: where it lives and which source columns become `year,value`.
struct ManifestEntry {
    std::string id;
    std::string source;  ///< http(s) URL or filesystem path
    std::string year_column = "year";
    std::string value_column = "value";
    std::string checksum;    ///< lowercase hex SHA-256 of the raw source bytes; empty = unchecked
    std::string unresolved;  ///< non-empty when the source is known to be unavailable; reason text

    [[nodiscard]] bool is_remote() const {
        return source.starts_with("http://") || source.starts_with("https://");
    }
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
};

/// Network access point; the only way `fetch` reaches a remote source.
class Transport {
public:
    virtual ~Transport() = default;
    /// Returns the body of a successful GET or throws TransportError.
    virtual std::string get(const std::string& url) = 0;
};

/// Transport for offline use: every request fails.
class OfflineTransport final : public Transport {
public:
    std::string get(const std::string& url) override {
        throw TransportError("network access disabled; cannot fetch " + url);
    }
};

inline std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw DatasourceError("SHA-256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

namespace detail {

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline std::string normalize_checksum(std::string_view text) {
    std::string s = lower(std::string(trim(text)));
    if (s.starts_with("sha256:")) s.erase(0, 7);
    if (s.size() != 64 || s.find_first_not_of("0123456789abcdef") != std::string::npos)
        throw DatasourceError("checksum must be 64 hex digits (optionally prefixed 'sha256:')");
    return s;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DatasourceError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file_atomic(const std::filesystem::path& p, std::string_view contents) {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    auto tmp = p;
    tmp += ".tmp-" + std::to_string(rng());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DatasourceError("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw DatasourceError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, p, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DatasourceError("cannot move cache file into place: " + p.string());
    }
}

inline std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[std::string(trim(std::string_view(line).substr(0, eq)))] = std::string(trim(std::string_view(line).substr(eq + 1)));
    }
    return kv;
}

// Splits one CSV record; double-quoted fields may contain commas.
inline std::vector<std::string> split_csv_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::string(trim(cur)));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::string(trim(cur)));
    return fields;
}

// Accepts "2001" or an ISO-style date such as "2001-01-01".
inline std::optional<int> parse_year_cell(std::string_view cell) {
    cell = trim(cell);
    if (auto y = parse_int(cell)) return y;
    if (cell.size() > 5 && (cell[4] == '-' || cell[4] == '/')) return parse_int(cell.substr(0, 4));
    return std::nullopt;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace detail

/**
 * Parses the stanza manifest format:
 *
 *     # comment
 *     [money]
 *     source = https://example.org/money.csv
 *     year_column = DATE
 *     value_column = VALUE
 *     checksum = sha256:<64 hex digits>
 *
 * Relative local sources are resolved against `base_dir`.
 */
inline DatasetManifest parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {}) {
    DatasetManifest m;
    std::set<std::string> ids;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t lineno = 0;
    auto finish = [&](std::size_t at) {
        if (m.entries.empty()) return;
        auto& e = m.entries.back();
        if (e.source.empty() && e.unresolved.empty())
            throw DatasourceError("manifest line " + std::to_string(at) + ": entry '" + e.id + "' has no source");
        if (!e.source.empty() && !e.is_remote() && !base_dir.empty() && std::filesystem::path(e.source).is_relative())
            e.source = (base_dir / e.source).lexically_normal().string();
    };
    while (std::getline(in, raw)) {
        ++lineno;
        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw DatasourceError("manifest line " + std::to_string(lineno) + ": malformed section header");
            finish(lineno);
            ManifestEntry e;
            e.id = std::string(detail::trim(line.substr(1, line.size() - 2)));
            if (!ids.insert(e.id).second)
                throw DatasourceError("manifest line " + std::to_string(lineno) + ": duplicate id '" + e.id + "'");
            m.entries.push_back(std::move(e));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos || m.entries.empty())
            throw DatasourceError("manifest line " + std::to_string(lineno) + ": expected 'key = value' inside a [id] stanza");
        const auto key = std::string(detail::trim(line.substr(0, eq)));
        const auto value = std::string(detail::trim(line.substr(eq + 1)));
        auto& e = m.entries.back();
        if (key == "source")
            e.source = value;
        else if (key == "year_column")
            e.year_column = value;
        else if (key == "value_column")
            e.value_column = value;
        else if (key == "checksum")
            e.checksum = value.empty() ? std::string{} : detail::normalize_checksum(value);
        else if (key == "unresolved")
            e.unresolved = value.empty() ? "unresolved" : value;
        else if (key != "note")
            throw DatasourceError("manifest line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    finish(lineno);
    return m;
}

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
    return parse_manifest(detail::read_file(path), path.parent_path());
}

/// Maps the entry's source columns to a normalized `year,value` CSV. Value
/// tokens are copied verbatim so the normalized file preserves source precision.
inline std::string normalize_source(const ManifestEntry& entry, std::string_view raw) {
    std::istringstream in{std::string(raw)};
    std::string line;
    std::optional<std::size_t> year_col, value_col;
    std::size_t lineno = 0;
    std::string out = "year,value\n";
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split_csv_record(line);
        if (!year_col) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                if (fields[i] == entry.year_column) year_col = i;
                if (fields[i] == entry.value_column) value_col = i;
            }
            if (!year_col || !value_col)
                throw DatasourceError("entry '" + entry.id + "': source lacks columns '" + entry.year_column + "' and/or '" +
                                      entry.value_column + "'");
            continue;
        }
        if (std::max(*year_col, *value_col) >= fields.size())
            throw DatasourceError("entry '" + entry.id + "': source line " + std::to_string(lineno) + " has too few fields");
        const auto year = detail::parse_year_cell(fields[*year_col]);
        if (!year)
            throw DatasourceError("entry '" + entry.id + "': source line " + std::to_string(lineno) + ": cannot map '" +
                                  fields[*year_col] + "' to a year");
        out += std::to_string(*year) + "," + fields[*value_col] + "\n";
    }
    if (!year_col) throw DatasourceError("entry '" + entry.id + "': source is empty");
    return out;
}

/// Where a fetched dataset came from on this invocation.
enum class FetchOrigin { cache, local, network };

struct FetchResult {
    std::map<std::string, AnnualSeries> series;
    std::map<std::string, FetchOrigin> origin;
};

/// Cache directory: explicit choice, then $ENTROVEL_CACHE, then the user cache dir.
inline std::filesystem::path resolve_cache_dir(const std::optional<std::filesystem::path>& explicit_dir = std::nullopt) {
    if (explicit_dir && !explicit_dir->empty()) return *explicit_dir;
    if (const char* env = std::getenv("ENTROVEL_CACHE"); env && *env) return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) return std::filesystem::path(xdg) / "entrovel";
    if (const char* home = std::getenv("HOME"); home && *home) return std::filesystem::path(home) / ".cache" / "entrovel";
    return ".entrovel-cache";
}

namespace detail {

struct CacheRecord {
    std::string source;
    std::string checksum;
    std::string csv_sha256;
};

inline std::optional<AnnualSeries> try_cache(const ManifestEntry& entry, const std::filesystem::path& dir) {
    const auto csv_path = dir / (entry.id + ".csv");
    const auto meta_path = dir / (entry.id + ".meta");
    std::error_code ec;
    if (!std::filesystem::exists(csv_path, ec) || !std::filesystem::exists(meta_path, ec)) return std::nullopt;
    try {
        const auto meta = parse_key_values(read_file(meta_path));
        const auto get = [&](const char* k) {
            auto it = meta.find(k);
            return it == meta.end() ? std::string{} : it->second;
        };
        if (get("source") != entry.source) return std::nullopt;
        if (!entry.checksum.empty() && get("checksum") != entry.checksum) return std::nullopt;
        const auto csv = read_file(csv_path);
        if (sha256_hex(csv) != get("csv_sha256")) return std::nullopt;
        return parse_csv(csv, entry.id);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace detail

/**
 * Materializes every resolved manifest entry as `<cache_dir>/<id>.csv` with
 * a `<id>.meta` sidecar, and returns the parsed series.
 *
 * Remote entries with a valid cache record are served without touching the
 * transport. Local entries are re-read on every call so edits are noticed.
 * Entries marked unresolved are skipped with a warning.
 */
inline FetchResult fetch(const DatasetManifest& manifest, const std::filesystem::path& cache_dir, Transport& transport,
                         const WarningSink& warn = {}) {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    if (ec) throw DatasourceError("cannot create cache directory " + cache_dir.string() + ": " + ec.message());

    FetchResult result;
    for (const auto& entry : manifest.entries) {
        if (!entry.unresolved.empty()) {
            if (warn) warn("entry '" + entry.id + "' skipped: " + entry.unresolved);
            continue;
        }
        if (entry.is_remote()) {
            if (auto cached = detail::try_cache(entry, cache_dir)) {
                result.series.emplace(entry.id, std::move(*cached));
                result.origin[entry.id] = FetchOrigin::cache;
                continue;
            }
        }

        std::string raw;
        try {
            raw = entry.is_remote() ? transport.get(entry.source) : detail::read_file(entry.source);
        } catch (const std::exception& e) {
            throw DatasourceError("entry '" + entry.id + "': " + e.what());
        }
        const auto digest = sha256_hex(raw);
        if (!entry.checksum.empty() && digest != entry.checksum)
            throw DatasourceError("entry '" + entry.id + "': checksum mismatch (expected " + entry.checksum + ", got " +
                                  digest + ")");

        const auto normalized = normalize_source(entry, raw);
        AnnualSeries series = [&] {
            try {
                return parse_csv(normalized, entry.id);
            } catch (const SeriesError& e) {
                throw DatasourceError("entry '" + entry.id + "': " + e.what());
            }
        }();

        detail::write_file_atomic(cache_dir / (entry.id + ".csv"), normalized);
        const std::string meta = "source=" + entry.source + "\nchecksum=" + digest + "\ncsv_sha256=" +
                                 sha256_hex(normalized) + "\nretrieved=" + detail::utc_timestamp() + "\n";
        detail::write_file_atomic(cache_dir / (entry.id + ".meta"), meta);

        result.series.emplace(entry.id, std::move(series));
        result.origin[entry.id] = entry.is_remote() ? FetchOrigin::network : FetchOrigin::local;
    }
    return result;
}

}  // namespace entrovel
