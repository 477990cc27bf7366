#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entrovel {

/// Raised for any violation of the annual-series contract (bad CSV, gaps,
/// non-positive values, empty rebase, insufficient overlap).
class SeriesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One annual observation; `t` is whole years since the reference year.
struct Observation {
    int t = 0;
    double value = 0.0;

    friend bool operator==(const Observation&, const Observation&) = default;
};

/// Callback receiving non-fatal diagnostics (e.g. observations dropped by a rebase).
using WarningSink = std::function<void(const std::string&)>;

/**
 * A named sequence of strictly positive annual observations.
 *
 * Calendar year of observation i is `reference_year() + t_i`. Observation
 * times are non-negative and consecutive: interior gaps are rejected because
 * the fitted rate constant is read as per-year.
 */
class AnnualSeries {
public:
    AnnualSeries(std::string name, int reference_year, std::vector<Observation> observations)
        : name_(std::move(name)), reference_year_(reference_year), observations_(std::move(observations)) {
        validate();
    }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] int reference_year() const noexcept { return reference_year_; }
    [[nodiscard]] std::span<const Observation> observations() const noexcept { return observations_; }
    [[nodiscard]] std::size_t size() const noexcept { return observations_.size(); }

    [[nodiscard]] int year_of(std::size_t i) const { return reference_year_ + observations_.at(i).t; }
    [[nodiscard]] int first_year() const { return year_of(0); }
    [[nodiscard]] int last_year() const { return year_of(size() - 1); }

    [[nodiscard]] std::vector<double> times() const {
        std::vector<double> out;
        out.reserve(size());
        for (const auto& o : observations_) out.push_back(static_cast<double>(o.t));
        return out;
    }

    [[nodiscard]] std::vector<double> values() const {
        std::vector<double> out;
        out.reserve(size());
        for (const auto& o : observations_) out.push_back(o.value);
        return out;
    }

    [[nodiscard]] AnnualSeries renamed(std::string name) const {
        return AnnualSeries(std::move(name), reference_year_, observations_);
    }

    friend bool operator==(const AnnualSeries&, const AnnualSeries&) = default;

private:
    void validate() const {
        if (observations_.empty()) throw SeriesError("series '" + name_ + "' has no observations");
        for (std::size_t i = 0; i < observations_.size(); ++i) {
            const auto& o = observations_[i];
            if (o.t < 0) throw SeriesError("series '" + name_ + "': negative time offset " + std::to_string(o.t));
            if (!(o.value > 0.0))
                throw SeriesError("series '" + name_ + "': non-positive value at year " +
                                  std::to_string(reference_year_ + o.t));
            if (i > 0) {
                const int prev = observations_[i - 1].t;
                if (o.t == prev)
                    throw SeriesError("series '" + name_ + "': duplicate year " + std::to_string(reference_year_ + o.t));
                if (o.t < prev) throw SeriesError("series '" + name_ + "': years not increasing");
                if (o.t != prev + 1)
                    throw SeriesError("series '" + name_ + "': missing year " + std::to_string(reference_year_ + prev + 1));
            }
        }
    }

    std::string name_;
    int reference_year_;
    std::vector<Observation> observations_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::optional<int> parse_int(std::string_view s) {
    s = trim(s);
    int v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || p != end) return std::nullopt;
    return v;
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (s.empty() || ec != std::errc{} || p != end) return std::nullopt;
    return v;
}

inline std::string line_error(std::size_t line, const std::string& what) {
    return "line " + std::to_string(line) + ": " + what;
}

}  // namespace detail

/**
 * Parses a `year,value` CSV (LF or CRLF, '.' decimals, no thousands
 * separators). The result's reference year is the smallest year present.
 * Rows may arrive in any order; they are sorted by year before validation.
 */
inline AnnualSeries parse_csv(std::istream& in, std::string name = "series") {
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::vector<std::pair<int, double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header) {
            // A UTF-8 BOM is tolerated on the header only.
            std::string_view h = line;
            if (h.starts_with("\xEF\xBB\xBF")) h.remove_prefix(3);
            if (h != "year,value") throw SeriesError(detail::line_error(lineno, "expected header 'year,value'"));
            have_header = true;
            continue;
        }
        if (detail::trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw SeriesError(detail::line_error(lineno, "expected two fields"));
        const auto year = detail::parse_int(std::string_view(line).substr(0, comma));
        if (!year) throw SeriesError(detail::line_error(lineno, "malformed year"));
        const auto value = detail::parse_double(std::string_view(line).substr(comma + 1));
        if (!value) throw SeriesError(detail::line_error(lineno, "malformed value"));
        if (!(*value > 0.0))
            throw SeriesError(detail::line_error(lineno, "non-positive value for year " + std::to_string(*year)));
        rows.emplace_back(*year, *value);
    }
    if (!have_header) throw SeriesError("empty input: expected header 'year,value'");
    if (rows.size() < 2) throw SeriesError("fewer than 2 rows");

    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].first == rows[i - 1].first) throw SeriesError("duplicate year " + std::to_string(rows[i].first));

    const int ref = rows.front().first;
    std::vector<Observation> obs;
    obs.reserve(rows.size());
    for (const auto& [y, v] : rows) obs.push_back({y - ref, v});
    return AnnualSeries(std::move(name), ref, std::move(obs));
}

inline AnnualSeries parse_csv(std::string_view text, std::string name = "series") {
    std::istringstream in{std::string(text)};
    return parse_csv(in, std::move(name));
}

/// Writes calendar years with round-trippable (17 significant digit) values.
inline std::string to_csv(const AnnualSeries& s) {
    std::string out = "year,value\n";
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%d,%.17g\n", s.year_of(i), s.observations()[i].value);
        out += buf;
    }
    return out;
}

/// Keeps only observations whose calendar year lies in [first_year, last_year].
/// The reference year is unchanged.
inline AnnualSeries restrict_years(const AnnualSeries& s, int first_year, int last_year) {
    std::vector<Observation> kept;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const int y = s.year_of(i);
        if (y >= first_year && y <= last_year) kept.push_back(s.observations()[i]);
    }
    if (kept.empty())
        throw SeriesError("series '" + s.name() + "' has no observations in " + std::to_string(first_year) + "-" +
                          std::to_string(last_year));
    return AnnualSeries(s.name(), s.reference_year(), std::move(kept));
}

/**
 * Moves t=0 to `reference_year`. Observations before the new reference year
 * are dropped and reported to `warn`; a reference year before the first
 * observation simply shifts t upward.
 */
inline AnnualSeries rebase(const AnnualSeries& s, int reference_year, const WarningSink& warn = {}) {
    if (reference_year > s.last_year())
        throw SeriesError("reference year " + std::to_string(reference_year) + " is after the last observation (" +
                          std::to_string(s.last_year()) + ") of series '" + s.name() + "'");
    std::vector<Observation> kept;
    std::size_t dropped = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const int y = s.year_of(i);
        if (y < reference_year) {
            ++dropped;
            continue;
        }
        kept.push_back({y - reference_year, s.observations()[i].value});
    }
    if (dropped > 0 && warn)
        warn("series '" + s.name() + "': dropped " + std::to_string(dropped) + " observation(s) before reference year " +
             std::to_string(reference_year));
    return AnnualSeries(s.name(), reference_year, std::move(kept));
}

/// Restricts every series to the common calendar window and rebases each to
/// the window's first year. Requires an overlap of at least two years.
inline std::vector<AnnualSeries> align_all(std::span<const AnnualSeries> all) {
    if (all.empty()) return {};
    int lo = all.front().first_year();
    int hi = all.front().last_year();
    for (const auto& s : all) {
        lo = std::max(lo, s.first_year());
        hi = std::min(hi, s.last_year());
    }
    if (hi - lo + 1 < 2) {
        std::string names;
        for (const auto& s : all) names += (names.empty() ? "'" : ", '") + s.name() + "'";
        throw SeriesError("series " + names + " overlap in fewer than 2 years");
    }
    std::vector<AnnualSeries> out;
    out.reserve(all.size());
    for (const auto& s : all) out.push_back(rebase(restrict_years(s, lo, hi), lo));
    return out;
}

inline std::pair<AnnualSeries, AnnualSeries> align(const AnnualSeries& a, const AnnualSeries& b) {
    const AnnualSeries both[] = {a, b};
    auto out = align_all(both);
    return {std::move(out[0]), std::move(out[1])};
}

}  // namespace entrovel
