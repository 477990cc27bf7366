#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "entrovel/datasource.hpp"
#include "entrovel/report.hpp"
#include "entrovel/rolling.hpp"
#include "entrovel/series.hpp"
#include "entrovel/svg.hpp"

namespace entrovel {

using TransportFactory = std::function<std::unique_ptr<Transport>()>;

namespace cli {

/// Series named after the file stem ("data/money.csv" -> "money").
inline AnnualSeries load_series(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SeriesError("cannot open " + path.string());
    try {
        return parse_csv(in, path.stem().string());
    } catch (const SeriesError& e) {
        throw SeriesError(path.filename().string() + ": " + e.what());
    }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("short write to " + path.string());
}

inline OutputFormat parse_format(const std::string& s) { return s == "csv" ? OutputFormat::csv : OutputFormat::table; }

inline std::vector<AnnualSeries> maybe_rebase(std::vector<AnnualSeries> all, const std::optional<int>& reference_year,
                                              std::ostream& err) {
    if (!reference_year) return all;
    const WarningSink warn = [&err](const std::string& m) { err << "warning: " << m << "\n"; };
    for (auto& s : all) s = rebase(s, *reference_year, warn);
    return all;
}

}  // namespace cli

/**
 * Runs the `entrovel` command line. Data goes to `out`, diagnostics to
 * `err`; the return value is the process exit status.
 */
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                   const TransportFactory& make_transport = {}) {
    CLI::App app{"Exponential growth fits, information-entropy lines and growth decompositions for annual series",
                 "entrovel"};
    app.require_subcommand(1);
    const std::vector<std::string> formats{"table", "csv"};

    std::string input, svg_path, format = "table", scale = "linear";
    std::optional<int> reference_year;
    std::vector<std::string> components, inputs;
    std::size_t window = default_rolling_window;
    std::optional<double> lambda_arg, rate_arg;
    bool exclude_zero = false;
    std::string manifest_path, cache_dir;

    auto add_format = [&](CLI::App* c) {
        c->add_option("--format", format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
    };

    auto* fit = app.add_subcommand("fit", "Fit an exponential to one series");
    fit->add_option("--input", input, "year,value CSV")->required();
    fit->add_option("--reference-year", reference_year, "Calendar year mapped to t = 0");
    fit->add_option("--scale", scale, "SVG y scale")->check(CLI::IsMember({"linear", "log"}))->capture_default_str();
    fit->add_option("--svg", svg_path, "Write the figure to this SVG file");
    add_format(fit);

    auto* hyp = app.add_subcommand("hypothesis", "Rank signed decompositions of a target into components");
    hyp->add_option("--input", input, "Target series CSV")->required();
    hyp->add_option("--component", components, "Component series CSV (repeatable, 1-4)")->required();
    hyp->add_option("--reference-year", reference_year, "Calendar year mapped to t = 0");
    hyp->add_flag("--exclude-zero", exclude_zero, "Only sign vectors in which every component participates");
    add_format(hyp);

    auto* cmp = app.add_subcommand("compare", "Overlay the entropy lines of several series");
    cmp->add_option("--input", inputs, "Series CSV (repeatable, at least 2)")->required();
    cmp->add_option("--reference-year", reference_year, "Calendar year mapped to t = 0");
    cmp->add_option("--svg", svg_path, "Write the figure to this SVG file");
    add_format(cmp);

    auto* rates = app.add_subcommand("rates", "Convert between rate constant and annual growth rate");
    auto* lambda_opt = rates->add_option("--lambda", lambda_arg, "Rate constant per year");
    auto* rate_opt = rates->add_option("--rate", rate_arg, "Annual growth as a fraction (0.02 = 2%)");
    lambda_opt->excludes(rate_opt);
    add_format(rates);

    auto* roll = app.add_subcommand("rolling", "Windowed rate constant and its first differences");
    roll->add_option("--input", input, "year,value CSV")->required();
    roll->add_option("--window", window, "Window length in years")->capture_default_str();
    roll->add_option("--reference-year", reference_year, "Calendar year mapped to t = 0");
    roll->add_option("--svg", svg_path, "Write the two-panel figure to this SVG file");
    add_format(roll);

    auto* fetch_cmd = app.add_subcommand("fetch", "Materialize manifest datasets into the cache");
    fetch_cmd->add_option("--manifest", manifest_path, "Dataset manifest")->required();
    fetch_cmd->add_option("--cache-dir", cache_dir, "Cache directory (default: $ENTROVEL_CACHE or ~/.cache/entrovel)");
    add_format(fetch_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    const OutputFormat fmt_choice = cli::parse_format(format);
    try {
        if (*fit) {
            auto series = cli::maybe_rebase({cli::load_series(input)}, reference_year, err);
            const auto bundle = build_fit_report(series.front(), scale == "log" ? svg::Scale::log : svg::Scale::linear);
            out << render_fit(bundle, fmt_choice);
            if (!svg_path.empty()) cli::write_text(svg_path, svg::render(bundle.figures.front()));
        } else if (*hyp) {
            if (components.size() > max_hypothesis_components)
                throw std::runtime_error("at most " + std::to_string(max_hypothesis_components) + " components are supported");
            std::vector<AnnualSeries> all{cli::load_series(input)};
            for (const auto& c : components) all.push_back(cli::load_series(c));
            all = cli::maybe_rebase(align_all(all), reference_year, err);
            const std::span<const AnnualSeries> comps(all.begin() + 1, all.end());
            const auto domain = exclude_zero ? SignDomain::nonzero : SignDomain::with_zero;
            out << render_hypotheses(build_hypothesis_report(all.front(), comps, domain), fmt_choice);
        } else if (*cmp) {
            if (inputs.size() < 2) throw std::runtime_error("compare needs at least 2 --input series");
            std::vector<AnnualSeries> all;
            for (const auto& p : inputs) all.push_back(cli::load_series(p));
            all = cli::maybe_rebase(align_all(all), reference_year, err);
            const auto bundle = build_compare_report(all);
            out << render_compare(bundle, fmt_choice);
            if (!svg_path.empty()) cli::write_text(svg_path, svg::render(bundle.figures.front()));
        } else if (*rates) {
            if (!lambda_arg && !rate_arg) throw std::runtime_error("rates needs exactly one of --lambda or --rate");
            const double lambda = lambda_arg ? *lambda_arg : rate_to_lambda(*rate_arg);
            const double rate = rate_arg ? *rate_arg : lambda_to_rate(lambda);
            if (fmt_choice == OutputFormat::csv)
                out << fmt::csv_row({"lambda", "rate"}) << fmt::csv_row({fmt::lambda(lambda), fmt::fixed(rate, 4)});
            else if (lambda_arg)
                out << "λ = " << fmt::lambda(lambda) << " -> rate = " << fmt::percent(rate) << " (" << fmt::fixed(rate, 4) << ")\n";
            else
                out << "rate = " << fmt::percent(rate) << " (" << fmt::fixed(rate, 4) << ") -> λ = " << fmt::lambda(lambda) << "\n";
        } else if (*roll) {
            auto series = cli::maybe_rebase({cli::load_series(input)}, reference_year, err);
            const auto& s = series.front();
            const auto rv = rolling_lambda(s, window);
            out << render_rolling(s, rv, fmt_choice);
            if (!svg_path.empty()) cli::write_text(svg_path, svg::render(rolling_figure(s, rv)));
        } else if (*fetch_cmd) {
            const auto manifest = load_manifest(manifest_path);
            auto transport = make_transport ? make_transport() : std::make_unique<OfflineTransport>();
            const auto dir = resolve_cache_dir(cache_dir.empty() ? std::nullopt
                                                                 : std::optional<std::filesystem::path>(cache_dir));
            const WarningSink warn = [&err](const std::string& m) { err << "warning: " << m << "\n"; };
            const auto result = fetch(manifest, dir, *transport, warn);
            const auto origin_name = [](FetchOrigin o) {
                return o == FetchOrigin::cache ? "cache" : o == FetchOrigin::local ? "local" : "network";
            };
            fmt::Table table({"id", "origin", "years", "n", "λ", "rate"});
            std::string csv = fmt::csv_row({"id", "origin", "first_year", "last_year", "n", "lambda", "rate_pct"});
            for (const auto& [id, s] : result.series) {
                const auto row = make_fit_row(s);
                const std::string origin = origin_name(result.origin.at(id));
                table.add({id, origin, std::to_string(s.first_year()) + "-" + std::to_string(s.last_year()),
                           std::to_string(s.size()), fmt::lambda(row.fit.lambda), fmt::percent(row.rate)});
                csv += fmt::csv_row({id, origin, std::to_string(s.first_year()), std::to_string(s.last_year()),
                                     std::to_string(s.size()), fmt::lambda(row.fit.lambda), fmt::fixed(row.rate * 100.0, 1)});
            }
            out << (fmt_choice == OutputFormat::csv ? csv : table.str());
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace entrovel
