#pragma once

#include "gossiplab/analysis.hpp"
#include "gossiplab/graph.hpp"
#include "gossiplab/sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gossiplab {

inline constexpr const char* kToolName = "gossiplab";
inline constexpr const char* kToolVersion = "0.1.0";

/// Ordered key=value pairs describing how an output was produced. No timestamps.
struct OutputHeader {
    std::vector<std::pair<std::string, std::string>> entries;

    OutputHeader& add(std::string key, std::string value) {
        entries.emplace_back(std::move(key), std::move(value));
        return *this;
    }

    /// Comment block: tool line, then one "# key=value" per entry.
    void write_comment(std::ostream& os) const {
        os << "# " << kToolName << ' ' << kToolVersion << '\n';
        for (const auto& [k, v] : entries) os << "# " << k << '=' << v << '\n';
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json config = nlohmann::ordered_json::object();
        for (const auto& [k, v] : entries) config[k] = v;
        return {{"tool", kToolName}, {"version", kToolVersion}, {"config", config}};
    }
};

// ---------------------------------------------------------------------------
// CSV. Every float is printed with 17 significant digits.
// ---------------------------------------------------------------------------

inline void write_sweep_csv(std::ostream& os, const OutputHeader& header, std::span<const SweepPoint> points) {
    header.write_comment(os);
    os << "epsilon,mean_broadcasts,median_broadcasts,mean_q_final,mean_r_final,trials,analytic_lambda2\n";
    for (const auto& p : points) {
        os << format_double(p.epsilon) << ',' << format_double(p.result.mean_broadcasts) << ','
           << format_double(p.result.median_broadcasts) << ',' << format_double(p.result.mean_q_final) << ','
           << format_double(p.result.mean_r_final) << ',' << p.result.trials << ','
           << format_double(p.analytic_lambda2) << '\n';
    }
}

inline void write_trial_trajectory_csv(std::ostream& os, const OutputHeader& header, const TrialRecord& rec) {
    header.write_comment(os);
    os << "t,r,q\n";
    for (std::size_t i = 0; i < rec.t_series.size(); ++i) {
        os << rec.t_series[i] << ',' << format_double(rec.r_series[i]) << ',' << format_double(rec.q_series[i])
           << '\n';
    }
}

inline void write_aggregate_trajectory_csv(std::ostream& os, const OutputHeader& header,
                                           std::span<const TrajectoryPoint> points) {
    header.write_comment(os);
    os << "t,mean_r,mean_q\n";
    for (const auto& p : points) {
        os << p.t << ',' << format_double(p.mean_r) << ',' << format_double(p.mean_q) << '\n';
    }
}

/// Per-trial summary of a campaign: one row per trial.
inline void write_trials_csv(std::ostream& os, const OutputHeader& header, std::span<const TrialRecord> records) {
    header.write_comment(os);
    os << "trial,seed,converged_at,broadcasts,consensus_value,predicted,final_r,final_q,failed\n";
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        os << i << ',' << r.seed << ',' << (r.converged_at ? std::to_string(*r.converged_at) : std::string{}) << ','
           << r.broadcasts << ',' << format_double(r.consensus_value) << ','
           << (r.predicted ? format_double(*r.predicted) : std::string{}) << ',' << format_double(r.final_r) << ','
           << format_double(r.final_q) << ',' << (r.failed ? 1 : 0) << '\n';
    }
}

struct AnalysisRow {
    double epsilon;
    double second_largest_modulus;
    bool is_simple_one;
    std::optional<double> eta;
    std::optional<double> epsilon_star;
};

inline void write_analysis_csv(std::ostream& os, const OutputHeader& header, std::span<const AnalysisRow> rows) {
    header.write_comment(os);
    os << "epsilon,second_largest_modulus,is_simple_one,eta,epsilon_star\n";
    for (const auto& r : rows) {
        os << format_double(r.epsilon) << ',' << format_double(r.second_largest_modulus) << ','
           << (r.is_simple_one ? "true" : "false") << ',' << (r.eta ? format_double(*r.eta) : std::string{}) << ','
           << (r.epsilon_star ? format_double(*r.epsilon_star) : std::string{}) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Structured analysis report (JSON). Key names are part of the file format.
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json complex_json(Complex c) { return nlohmann::ordered_json::array({c.real(), c.imag()}); }

inline nlohmann::ordered_json spectrum_json(const ComplexSpectrum& s) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& v : s) arr.push_back(complex_json(v));
    return arr;
}

inline nlohmann::ordered_json vector_json(const Vector& v) {
    auto arr = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

inline nlohmann::ordered_json spectral_report_json(const SpectralReport& r) {
    nlohmann::ordered_json j;
    j["spectrum"] = spectrum_json(r.spectrum);
    j["is_simple_one"] = r.is_simple_one;
    j["second_largest_modulus"] = r.second_largest_modulus;
    j["second_largest_value"] = complex_json(r.second_largest_value);
    j["w1"] = r.is_simple_one ? vector_json(r.w1) : nlohmann::ordered_json(nullptr);
    j["w2"] = r.is_simple_one ? vector_json(r.w2) : nlohmann::ordered_json(nullptr);
    return j;
}

inline nlohmann::ordered_json epsilon_report_json(const EpsilonReport& r) {
    nlohmann::ordered_json j;
    j["xi"] = spectrum_json(r.xi);
    j["spectrum_real"] = r.spectrum_real;
    j["xi2"] = r.xi2;
    j["xi_n"] = r.xi_n;
    j["eta"] = r.eta_formula ? nlohmann::ordered_json(*r.eta_formula) : nlohmann::ordered_json(nullptr);
    j["eta_practical"] = r.eta_practical;
    j["epsilon_star"] = r.epsilon_star;
    j["lambda2_at_star"] = r.lambda2_at_star;
    j["approximate"] = r.approximate;
    return j;
}

// ---------------------------------------------------------------------------
// Minimal SVG line chart for convergence curves (log-scale y).
// ---------------------------------------------------------------------------

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

inline void write_svg_chart(std::ostream& os, const std::string& title, std::span<const ChartSeries> series) {
    constexpr double width = 720, height = 440, left = 70, right = 160, top = 40, bottom = 50;
    static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

    double xmax = 1.0, ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            xmax = std::max(xmax, x);
            if (y > 0) {
                ymin = std::min(ymin, std::log10(y));
                ymax = std::max(ymax, std::log10(y));
            }
        }
    }
    if (!std::isfinite(ymin)) ymin = -1, ymax = 0;
    ymin = std::floor(ymin);
    ymax = std::max(std::ceil(ymax), ymin + 1);
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double x) { return left + pw * x / xmax; };
    auto py = [&](double ly) { return top + ph * (ymax - ly) / (ymax - ymin); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double d = ymin; d <= ymax; d += 1) {
        os << "<text x=\"" << left - 8 << "\" y=\"" << py(d) + 4
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">1e" << d << "</text>\n";
    }
    os << "<text x=\"" << left + pw << "\" y=\"" << height - 20
       << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << format_double(xmax)
       << " broadcasts</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto* colour = palette[i % std::size(palette)];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : series[i].points) {
            if (y > 0) os << px(x) << ',' << py(std::log10(y)) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << left + pw + 10 << "\" y=\"" << top + 16 * (i + 1) << "\" fill=\"" << colour
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << series[i].label << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace gossiplab
