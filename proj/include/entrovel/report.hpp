#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entrovel/entropy.hpp"
#include "entrovel/expfit.hpp"
#include "entrovel/format.hpp"
#include "entrovel/rolling.hpp"
#include "entrovel/series.hpp"
#include "entrovel/svg.hpp"

namespace entrovel {

enum class OutputFormat { table, csv };

struct FitRow {
    std::string id;
    int reference_year = 0;
    int first_year = 0;
    int last_year = 0;
    ExpFit fit;
    double rate = 0.0;  ///< exp(lambda) - 1
};

/// Everything a command renders. Renderers only format these values.
struct ReportBundle {
    std::vector<FitRow> fits;
    std::vector<std::string> entropy_equations;
    std::optional<EntropyLine> target;
    std::vector<EntropyLine> components;
    std::vector<HypothesisResult> hypotheses;
    std::vector<std::string> notes;  ///< per-fit annotations (compare: overlap markers)
    std::vector<std::string> footnotes;
    std::vector<svg::Figure> figures;
};

inline FitRow make_fit_row(const AnnualSeries& s) {
    const ExpFit fit = fit_exponential(s);
    return {s.name(), s.reference_year(), s.first_year(), s.last_year(), fit, lambda_to_rate(fit.lambda)};
}

/// "Info Ent(X) = 0.0555 × t"
inline std::string entropy_equation(const EntropyLine& line) {
    return "Info Ent(" + line.label + ") = " + fmt::lambda(line.lambda) + " × t";
}

/// "Info Ent(T) = Info Ent(A) - Info Ent(B) - 0.0038 = 0.0320 × t"
inline std::string hypothesis_equation(const HypothesisResult& h, const EntropyLine& target,
                                       std::span<const EntropyLine> components) {
    std::string rhs;
    for (std::size_t i = 0; i < h.signs.size(); ++i) {
        if (h.signs[i] == Sign::zero) continue;
        const std::string term = "Info Ent(" + components[i].label + ")";
        if (rhs.empty())
            rhs = h.signs[i] == Sign::minus ? "-" + term : term;
        else
            rhs += (h.signs[i] == Sign::minus ? " - " : " + ") + term;
    }
    const std::string d = fmt::lambda(h.delta);
    std::string constant;
    if (d == "0.0000")
        constant = " ± 0.0000";
    else if (d.front() == '-')
        constant = " - " + d.substr(1);
    else
        constant = " + " + d;
    return "Info Ent(" + target.label + ") = " + rhs + constant + " = " + fmt::lambda(target.lambda) + " × t";
}

inline std::string sign_pattern(const std::vector<Sign>& signs) {
    std::string out = "(";
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (i) out += ",";
        out += signs[i] == Sign::plus ? "+1" : signs[i] == Sign::minus ? "-1" : "0";
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// Published decompositions. When the rounded rate constants of a hypothesis
// match a published statement, a differing published residual is footnoted
// instead of being reproduced.

struct PublishedDecomposition {
    const char* subject;
    double target_lambda;
    double component_lambdas[2];
    int signs[2];
    double residual;
};

inline constexpr PublishedDecomposition published_decompositions[] = {
    {"home price index", 0.0320, {0.0555, 0.0197}, {+1, -1}, -0.0038},
    {"Russell 2000 index", 0.0624, {0.0555, 0.0197}, {+1, +1}, -0.0128},
    {"S&P 500 index", 0.0358, {0.0555, 0.0197}, {+1, -1}, 0.0000},
    {"NASDAQ index", 0.0878, {0.0555, 0.0197}, {+1, +1}, 0.0137},
};

inline std::vector<std::string> published_residual_footnotes(const EntropyLine& target,
                                                             std::span<const EntropyLine> components,
                                                             std::span<const HypothesisResult> hypotheses) {
    std::vector<std::string> notes;
    if (components.size() != 2) return notes;
    const auto same = [](double a, double b) { return fmt::lambda(a) == fmt::lambda(b); };
    for (const auto& pub : published_decompositions) {
        if (!same(target.lambda, pub.target_lambda) || !same(components[0].lambda, pub.component_lambdas[0]) ||
            !same(components[1].lambda, pub.component_lambdas[1]))
            continue;
        for (const auto& h : hypotheses) {
            if (to_int(h.signs[0]) != pub.signs[0] || to_int(h.signs[1]) != pub.signs[1]) continue;
            if (fmt::lambda(h.delta) == fmt::lambda(pub.residual)) break;
            notes.push_back("published " + std::string(pub.subject) + " decomposition " + sign_pattern(h.signs) +
                            " states a residual of " + fmt::signed_fixed(pub.residual, 4) +
                            "; the 4-decimal rate constants give " + fmt::signed_fixed(h.delta, 4) +
                            " (rounding inconsistency in the published figure)");
            break;
        }
    }
    return notes;
}

// ---------------------------------------------------------------------------
// Bundles

inline ReportBundle build_fit_report(const AnnualSeries& s, svg::Scale scale) {
    ReportBundle b;
    b.fits.push_back(make_fit_row(s));
    const auto& row = b.fits.back();
    b.entropy_equations.push_back(entropy_equation(entropy_line(row.fit, row.id)));

    svg::Panel panel;
    panel.x_label = "t (years since " + std::to_string(s.reference_year()) + ")";
    panel.y_label = s.name();
    panel.y_scale = scale;
    svg::PlotSeries observed{"observed", {}, svg::PlotSeries::Style::markers, false};
    for (const auto& o : s.observations()) observed.points.push_back({static_cast<double>(o.t), o.value});
    svg::PlotSeries fitted{"fit λ = " + fmt::lambda(row.fit.lambda), {}, svg::PlotSeries::Style::line, false};
    const double t0 = s.observations().front().t;
    const double t1 = s.observations().back().t;
    constexpr int samples = 100;
    for (int i = 0; i <= samples; ++i) {
        const double t = t0 + (t1 - t0) * i / samples;
        fitted.points.push_back({t, predict(row.fit, t)});
    }
    panel.series = {std::move(observed), std::move(fitted)};
    b.figures.push_back({"Exponential fit: " + s.name() + (scale == svg::Scale::log ? " (semi-log)" : ""), {std::move(panel)}});
    return b;
}

/// Fits target and components (already aligned) and ranks every decomposition.
inline ReportBundle build_hypothesis_report(const AnnualSeries& target, std::span<const AnnualSeries> components,
                                            SignDomain domain = SignDomain::with_zero) {
    ReportBundle b;
    b.fits.push_back(make_fit_row(target));
    for (const auto& c : components) b.fits.push_back(make_fit_row(c));
    b.target = entropy_line(b.fits.front().fit, target.name());
    for (std::size_t i = 1; i < b.fits.size(); ++i) b.components.push_back(entropy_line(b.fits[i].fit, b.fits[i].id));
    for (std::size_t i = 0; i < b.fits.size(); ++i)
        b.entropy_equations.push_back(entropy_equation(i == 0 ? *b.target : b.components[i - 1]));
    b.hypotheses = enumerate_hypotheses(*b.target, b.components, domain);
    b.footnotes = published_residual_footnotes(*b.target, b.components, b.hypotheses);
    return b;
}

/// Entropy lines of aligned series on one figure. A line whose rounded slope
/// equals an earlier one is drawn dashed so both stay visible.
inline ReportBundle build_compare_report(std::span<const AnnualSeries> series) {
    ReportBundle b;
    svg::Panel panel;
    panel.x_label = "t (years since " + std::to_string(series.front().reference_year()) + ")";
    panel.y_label = "Info Ent (λ × t)";
    for (const auto& s : series) {
        b.fits.push_back(make_fit_row(s));
        const auto line = entropy_line(b.fits.back().fit, s.name());
        b.entropy_equations.push_back(entropy_equation(line));

        std::string note;
        for (std::size_t j = 0; j + 1 < b.fits.size(); ++j)
            if (fmt::lambda(b.fits[j].fit.lambda) == fmt::lambda(line.lambda)) {
                note = "overlaps " + b.fits[j].id;
                break;
            }
        b.notes.push_back(note);

        const double t0 = s.observations().front().t;
        const double t1 = s.observations().back().t;
        panel.series.push_back(
            {line.label, {{t0, line.at(t0)}, {t1, line.at(t1)}}, svg::PlotSeries::Style::line, !note.empty()});
    }
    panel.y_scale = svg::Scale::linear;
    b.figures.push_back({"Information entropy comparison", {std::move(panel)}});
    return b;
}

inline svg::Figure rolling_figure(const AnnualSeries& s, const RollingVelocity& rv) {
    svg::Panel top;
    top.x_label = "t (years since " + std::to_string(s.reference_year()) + ")";
    top.y_label = "local λ";
    svg::PlotSeries v{"local λ (window " + std::to_string(rv.window) + ")", {}, svg::PlotSeries::Style::line, false};
    for (const auto& p : rv.points) v.points.push_back({p.t_center, p.local_lambda});
    top.series.push_back(v);
    top.series.push_back({"", v.points, svg::PlotSeries::Style::markers, false});
    top.series.back().label = "window centres";

    std::vector<svg::Panel> panels{std::move(top)};
    if (!rv.accel.empty()) {
        svg::Panel bottom;
        bottom.x_label = panels.front().x_label;
        bottom.y_label = "dλ/dt";
        svg::PlotSeries a{"acceleration", {}, svg::PlotSeries::Style::line, false};
        for (const auto& p : rv.accel) a.points.push_back({p.t_mid, p.dlambda_dt});
        bottom.series.push_back(std::move(a));
        panels.push_back(std::move(bottom));
    }
    return {"Rolling rate constant: " + s.name(), std::move(panels)};
}

// ---------------------------------------------------------------------------
// Renderers

inline std::string years_text(const FitRow& r) {
    return std::to_string(r.first_year) + "-" + std::to_string(r.last_year);
}

inline std::string render_fit(const ReportBundle& b, OutputFormat format) {
    const auto& r = b.fits.front();
    if (format == OutputFormat::csv)
        return fmt::csv_row({"series", "reference_year", "first_year", "last_year", "n", "lambda", "rate_pct", "g0",
                             "r2_log_pct", "r2_linear_pct"}) +
               fmt::csv_row({r.id, std::to_string(r.reference_year), std::to_string(r.first_year), std::to_string(r.last_year),
                             std::to_string(r.fit.n), fmt::lambda(r.fit.lambda), fmt::fixed(r.rate * 100.0, 1),
                             fmt::fixed(r.fit.g0, 4), fmt::fixed(r.fit.r2_log * 100.0, 0),
                             fmt::fixed(r.fit.r2_linear * 100.0, 0)});
    std::string out;
    out += "series: " + r.id + " (" + years_text(r) + ", reference year " + std::to_string(r.reference_year) +
           ", n = " + std::to_string(r.fit.n) + ")\n";
    out += "λ = " + fmt::lambda(r.fit.lambda) + ", rate = " + fmt::percent(r.rate) + "\n";
    out += "g0 = " + fmt::fixed(r.fit.g0, 4) + " (fitted value at t = 0)\n";
    out += "R² (log) = " + fmt::percent(r.fit.r2_log, 0) + ", R² (linear) = " + fmt::percent(r.fit.r2_linear, 0) + "\n";
    out += b.entropy_equations.front() + "\n";
    return out;
}

inline std::string render_hypotheses(const ReportBundle& b, OutputFormat format) {
    const auto& comps = b.components;
    auto ratio_text = [](const HypothesisResult& h, bool pct) -> std::string {
        if (!h.velocity_ratio) return "n/a";
        return pct ? fmt::percent(*h.velocity_ratio) : fmt::significant(*h.velocity_ratio, 3);
    };
    if (format == OutputFormat::csv) {
        std::string out = fmt::csv_row({"rank", "signs", "combination", "combined_lambda", "delta", "delta_annual_pct",
                                        "velocity_ratio", "velocity_ratio_pct", "equation", "best"});
        for (std::size_t i = 0; i < b.hypotheses.size(); ++i) {
            const auto& h = b.hypotheses[i];
            out += fmt::csv_row({std::to_string(i + 1), sign_pattern(h.signs), hypothesis_line(h, comps).label,
                                 fmt::lambda(h.combined_lambda), fmt::lambda(h.delta), fmt::fixed(std::expm1(h.delta) * 100.0, 1),
                                 ratio_text(h, false), h.velocity_ratio ? fmt::fixed(*h.velocity_ratio * 100.0, 1) : "n/a",
                                 hypothesis_equation(h, *b.target, comps), i == 0 ? "BEST" : ""});
        }
        return out;
    }

    std::string out;
    const auto& t = b.fits.front();
    out += "target: " + t.id + " (λ = " + fmt::lambda(t.fit.lambda) + ", rate = " + fmt::percent(t.rate) + ")\n";
    out += "window: " + years_text(t) + " (reference year " + std::to_string(t.reference_year) + ", n = " +
           std::to_string(t.fit.n) + ")\n";
    out += "components:\n";
    for (std::size_t i = 1; i < b.fits.size(); ++i)
        out += "  " + b.fits[i].id + ": λ = " + fmt::lambda(b.fits[i].fit.lambda) + ", rate = " + fmt::percent(b.fits[i].rate) +
               "\n";
    out += "\n";
    fmt::Table table({"rank", "signs", "combination", "combined λ", "delta", "delta/yr", "ratio", "ratio %", ""});
    for (std::size_t i = 0; i < b.hypotheses.size(); ++i) {
        const auto& h = b.hypotheses[i];
        table.add({std::to_string(i + 1), sign_pattern(h.signs), hypothesis_line(h, comps).label, fmt::lambda(h.combined_lambda),
                   fmt::lambda(h.delta), fmt::percent(std::expm1(h.delta)), ratio_text(h, false), ratio_text(h, true),
                   i == 0 ? "BEST" : ""});
    }
    out += table.str();
    out += "\nbest: " + hypothesis_equation(b.hypotheses.front(), *b.target, comps) + "\n";
    for (std::size_t i = 0; i < b.footnotes.size(); ++i)
        out += "note " + std::to_string(i + 1) + ": " + b.footnotes[i] + "\n";
    return out;
}

inline std::string render_compare(const ReportBundle& b, OutputFormat format) {
    if (format == OutputFormat::csv) {
        std::string out = fmt::csv_row({"series", "lambda", "rate_pct", "r2_log_pct", "equation", "note"});
        for (std::size_t i = 0; i < b.fits.size(); ++i)
            out += fmt::csv_row({b.fits[i].id, fmt::lambda(b.fits[i].fit.lambda), fmt::fixed(b.fits[i].rate * 100.0, 1),
                                 fmt::fixed(b.fits[i].fit.r2_log * 100.0, 0), b.entropy_equations[i], b.notes[i]});
        return out;
    }
    const auto& first = b.fits.front();
    std::string out = "window: " + years_text(first) + " (reference year " + std::to_string(first.reference_year) +
                      ", n = " + std::to_string(first.fit.n) + ")\n\n";
    fmt::Table table({"series", "λ", "rate", "R² (log)", "entropy line", ""});
    for (std::size_t i = 0; i < b.fits.size(); ++i)
        table.add({b.fits[i].id, fmt::lambda(b.fits[i].fit.lambda), fmt::percent(b.fits[i].rate),
                   fmt::percent(b.fits[i].fit.r2_log, 0), b.entropy_equations[i], b.notes[i]});
    return out + table.str();
}

inline std::string render_rolling(const AnnualSeries& s, const RollingVelocity& rv, OutputFormat format) {
    const int ref = s.reference_year();
    if (format == OutputFormat::csv) {
        std::string out = fmt::csv_row({"kind", "t", "year", "value"});
        for (const auto& p : rv.points)
            out += fmt::csv_row({"velocity", fmt::fixed(p.t_center, 1), fmt::fixed(ref + p.t_center, 1), fmt::lambda(p.local_lambda)});
        for (const auto& a : rv.accel)
            out += fmt::csv_row({"acceleration", fmt::fixed(a.t_mid, 1), fmt::fixed(ref + a.t_mid, 1), fmt::lambda(a.dlambda_dt)});
        return out;
    }
    std::string out = "series: " + s.name() + " (" + std::to_string(s.first_year()) + "-" + std::to_string(s.last_year()) +
                      ", n = " + std::to_string(s.size()) + ", window = " + std::to_string(rv.window) + ")\n\nvelocity\n";
    fmt::Table v({"t", "year", "local λ", "rate"});
    for (const auto& p : rv.points)
        v.add({fmt::fixed(p.t_center, 1), fmt::fixed(ref + p.t_center, 1), fmt::lambda(p.local_lambda),
               fmt::percent(lambda_to_rate(p.local_lambda))});
    out += v.str() + "\nacceleration\n";
    if (rv.accel.empty()) return out + "(none: single window)\n";
    fmt::Table a({"t", "year", "dλ/dt"});
    for (const auto& p : rv.accel) a.add({fmt::fixed(p.t_mid, 1), fmt::fixed(ref + p.t_mid, 1), fmt::lambda(p.dlambda_dt)});
    return out + a.str();
}

}  // namespace entrovel
