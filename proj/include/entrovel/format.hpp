#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace entrovel::fmt {

/// Fixed-point rendering rounded half away from zero; never prints "-0".
inline std::string fixed(double x, int decimals) {
    if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    const double scale = std::pow(10.0, decimals);
    double r = std::round(x * scale) / scale;
    if (r == 0.0) r = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, r);
    return buf;
}

/// Rate constant as presented in reports: 4 decimals.
inline std::string lambda(double x) { return fixed(x, 4); }

/// A fraction rendered as a percentage, e.g. 0.05707 -> "5.7%".
inline std::string percent(double fraction, int decimals = 1) { return fixed(fraction * 100.0, decimals) + "%"; }

/// Signed fixed rendering with an explicit '+' for positive values.
inline std::string signed_fixed(double x, int decimals) {
    std::string s = fixed(x, decimals);
    if (s.front() != '-') s.insert(s.begin(), '+');
    return s;
}

/// `digits` significant figures, keeping trailing zeros ("1.00", "0.894", "1.17").
inline std::string significant(double x, int digits) {
    if (x == 0.0 || !std::isfinite(x)) return fixed(x, digits - 1);
    const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(x))));
    int decimals = digits - 1 - magnitude;
    // Rounding may carry into the next power of ten (0.9996 -> 1.00).
    const double rounded = std::round(x * std::pow(10.0, decimals)) / std::pow(10.0, decimals);
    if (rounded != 0.0 && static_cast<int>(std::floor(std::log10(std::abs(rounded)))) > magnitude) --decimals;
    return fixed(x, decimals < 0 ? 0 : decimals);
}

/// Number of displayed code points in a UTF-8 string.
inline std::size_t display_width(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s)
        if ((c & 0xC0) != 0x80) ++n;
    return n;
}

/// Left-aligned text table with two-space column gaps and no trailing spaces.
class Table {
public:
    explicit Table(std::vector<std::string> header) : rows_{std::move(header)} {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    [[nodiscard]] std::string str() const {
        std::vector<std::size_t> width;
        for (const auto& row : rows_) {
            if (width.size() < row.size()) width.resize(row.size(), 0);
            for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], display_width(row[i]));
        }
        std::string out;
        for (const auto& row : rows_) {
            std::string line;
            for (std::size_t i = 0; i < row.size(); ++i) {
                line += row[i];
                if (i + 1 < row.size()) line.append(width[i] - display_width(row[i]) + 2, ' ');
            }
            while (!line.empty() && line.back() == ' ') line.pop_back();
            out += line + "\n";
        }
        return out;
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

/// Quotes a CSV field when it contains a comma, quote or newline.
inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += csv_field(fields[i]);
    }
    return out + "\n";
}

}  // namespace entrovel::fmt
