#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "efht/bound_engine.hpp"
#include "efht/config.hpp"
#include "efht/validator.hpp"

namespace efht {

// Artifacts: CSV with a `# meta: {json}` line ahead of the header, or JSON.
// Numbers are written with %.17g so every double round-trips.

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Writes to a sibling temporary file and renames it over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json read_json(const std::filesystem::path& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": invalid JSON (" + e.what() + ")");
    }
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace detail {

struct CsvDocument {
    json meta = json::object();
    std::string header;
    std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline CsvDocument parse_csv(const std::string& text, const std::string& name) {
    CsvDocument doc;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# meta:", 0) == 0) {
            try {
                doc.meta = json::parse(line.substr(7));
            } catch (const json::parse_error& e) {
                throw std::runtime_error(name + ": malformed meta line (" + e.what() + ")");
            }
            continue;
        }
        if (line[0] == '#') continue;
        if (!have_header) {
            doc.header = line;
            have_header = true;
            continue;
        }
        doc.rows.push_back(split(line, ','));
    }
    if (!have_header) throw std::runtime_error(name + ": missing CSV header");
    return doc;
}

template <class T>
T parse_field(const std::string& s, const std::string& what) {
    T v{};
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw std::runtime_error("cannot parse " + what + " value '" + s + "'");
    return v;
}

inline void expect_header(const CsvDocument& doc, const char* header, const std::string& name) {
    if (doc.header != header)
        throw std::runtime_error(name + ": unexpected header '" + doc.header + "', expected '" + header + "'");
}

}  // namespace detail

// ---------------------------------------------------------------- samples

inline json to_json(const SampleMeta& m) {
    return {{"problem", m.problem},      {"evolver", m.evolver},     {"seed", m.seed},
            {"k", m.probe_count},        {"pop_size", m.pop_size},   {"epsilon_collect", m.epsilon_collect},
            {"probe_population", "parents+offspring"}, {"advance_batch", "fresh"}};
}

inline SampleMeta sample_meta_from_json(const json& j) {
    SampleMeta m;
    detail::read_field(j, "problem", m.problem);
    detail::read_field(j, "evolver", m.evolver);
    detail::read_field(j, "seed", m.seed);
    detail::read_field(j, "k", m.probe_count);
    detail::read_field(j, "pop_size", m.pop_size);
    detail::read_field(j, "epsilon_collect", m.epsilon_collect);
    return m;
}

inline constexpr const char* samples_header = "n,t,psi,avg_gain,probe_count";

/// `extra` is merged into the meta object (typically {"config": ...}).
inline std::string samples_to_csv(const SampleSet& set, const json& extra = json::object()) {
    json meta = to_json(set.meta);
    meta["dims"] = set.dims;
    for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
    std::string out = "# meta: " + meta.dump() + "\n" + samples_header + "\n";
    for (const auto& s : set.samples)
        out += std::to_string(s.n) + "," + std::to_string(s.t) + "," + format_number(s.psi) + "," +
               format_number(s.avg_gain) + "," + std::to_string(s.probe_count) + "\n";
    return out;
}

struct LoadedSamples {
    SampleSet set;
    json meta;
};

inline LoadedSamples samples_from_csv(const std::string& text, const std::string& name = "samples") {
    const auto doc = detail::parse_csv(text, name);
    detail::expect_header(doc, samples_header, name);
    LoadedSamples out;
    out.meta = doc.meta;
    out.set.meta = sample_meta_from_json(doc.meta);
    for (const auto& r : doc.rows) {
        if (r.size() != 5) throw std::runtime_error(name + ": expected 5 columns per row");
        GainSample s;
        s.n = detail::parse_field<std::size_t>(r[0], "n");
        s.t = detail::parse_field<long>(r[1], "t");
        s.psi = detail::parse_field<double>(r[2], "psi");
        s.avg_gain = detail::parse_field<double>(r[3], "avg_gain");
        s.probe_count = detail::parse_field<std::size_t>(r[4], "probe_count");
        out.set.samples.push_back(s);
        if (std::find(out.set.dims.begin(), out.set.dims.end(), s.n) == out.set.dims.end()) out.set.dims.push_back(s.n);
    }
    return out;
}

// ---------------------------------------------------------------- selected

inline json to_json(const DimensionSelection& d) {
    return {{"n", d.n},
            {"M", d.target_m},
            {"selected", d.selected},
            {"shortfall", d.shortfall()},
            {"input_count", d.input_count},
            {"nonzero_count", d.nonzero_count},
            {"dropped_nonpositive", d.dropped_nonpositive},
            {"smoothed", d.smoothed},
            {"lambda", d.lambda},
            {"psi_min", d.psi_min},
            {"psi_max", d.psi_max},
            {"span", d.span}};
}

inline constexpr const char* selected_header = "n,psi,gain";

inline std::string selected_to_csv(const SelectedSamples& sel, const json& extra = json::object()) {
    json meta = to_json(sel.source);
    json dims = json::array();
    for (const auto& d : sel.dims) dims.push_back(to_json(d));
    meta["selection"] = dims;
    for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = it.value();
    std::string out = "# meta: " + meta.dump() + "\n" + selected_header + "\n";
    for (const auto& p : sel.points)
        out += std::to_string(p.n) + "," + format_number(p.psi) + "," + format_number(p.gain) + "\n";
    return out;
}

struct LoadedSelected {
    SelectedSamples sel;
    json meta;
};

inline LoadedSelected selected_from_csv(const std::string& text, const std::string& name = "selected") {
    const auto doc = detail::parse_csv(text, name);
    detail::expect_header(doc, selected_header, name);
    LoadedSelected out;
    out.meta = doc.meta;
    out.sel.source = sample_meta_from_json(doc.meta);
    for (const auto& r : doc.rows) {
        if (r.size() != 3) throw std::runtime_error(name + ": expected 3 columns per row");
        out.sel.points.push_back({detail::parse_field<std::size_t>(r[0], "n"), detail::parse_field<double>(r[1], "psi"),
                                  detail::parse_field<double>(r[2], "gain")});
    }
    return out;
}

/// True when the CSV text is a raw sample set rather than a selection.
inline bool is_samples_csv(const std::string& text) {
    return detail::parse_csv(text, "input").header == samples_header;
}

// ---------------------------------------------------------------- fit

inline json to_json(const FitParams& p) {
    return {{"A", p.A},
            {"b", p.b},
            {"d", p.d},
            {"r2", p.r2},
            {"kappa", p.kappa},
            {"constraints", to_json(p.box)},
            {"violation_fraction", p.violation_fraction},
            {"coefficient", p.coefficient()},
            {"d_fixed", p.d_fixed},
            {"lower_bound_shrink", p.lower_bound_shrink},
            {"expression", expression_string(p)},
            {"complexity", complexity_class(p)}};
}

inline FitParams fit_from_json(const json& j) {
    FitParams p;
    for (const char* key : {"A", "b", "d", "r2"})
        if (!j.contains(key)) throw std::runtime_error(std::string("fit: missing field '") + key + "'");
    p.A = j.at("A").get<double>();
    p.b = j.at("b").get<double>();
    p.d = j.at("d").get<double>();
    p.r2 = j.at("r2").get<double>();
    detail::read_field(j, "kappa", p.kappa);
    detail::read_field(j, "d_fixed", p.d_fixed);
    detail::read_field(j, "violation_fraction", p.violation_fraction);
    detail::read_field(j, "lower_bound_shrink", p.lower_bound_shrink);
    if (auto it = j.find("constraints"); it != j.end()) p.box = fit_box_from_json(*it);
    return p;
}

// ---------------------------------------------------------------- stats, bounds, verdicts

inline json to_json(const RunStats& s) {
    return {{"problem", s.problem},
            {"evolver", s.evolver},
            {"n", s.n},
            {"epsilon", s.epsilon},
            {"runs", s.runs},
            {"budget", s.budget},
            {"offspring_per_generation", s.offspring_per_generation},
            {"mean", s.mean},
            {"std", s.std},
            {"mean_evaluations", s.mean_evaluations},
            {"std_evaluations", s.std_evaluations},
            {"mean_x0", s.mean_x0},
            {"hit_rate", s.hit_rate},
            {"hitting_generations", s.hitting_generations},
            {"x0", s.x0}};
}

inline RunStats stats_from_json(const json& j) {
    RunStats s;
    for (const char* key : {"n", "epsilon", "mean", "offspring_per_generation"})
        if (!j.contains(key)) throw std::runtime_error(std::string("stats: missing field '") + key + "'");
    detail::read_field(j, "problem", s.problem);
    detail::read_field(j, "evolver", s.evolver);
    detail::read_field(j, "n", s.n);
    detail::read_field(j, "epsilon", s.epsilon);
    detail::read_field(j, "runs", s.runs);
    detail::read_field(j, "budget", s.budget);
    detail::read_field(j, "offspring_per_generation", s.offspring_per_generation);
    detail::read_field(j, "mean", s.mean);
    detail::read_field(j, "std", s.std);
    detail::read_field(j, "mean_evaluations", s.mean_evaluations);
    detail::read_field(j, "std_evaluations", s.std_evaluations);
    detail::read_field(j, "mean_x0", s.mean_x0);
    detail::read_field(j, "hit_rate", s.hit_rate);
    detail::read_field(j, "hitting_generations", s.hitting_generations);
    detail::read_field(j, "x0", s.x0);
    return s;
}

inline json to_json(const BoundEstimate& b) {
    return {{"problem", b.problem},
            {"evolver", b.evolver},
            {"n", b.n},
            {"x0", b.x0},
            {"epsilon", b.epsilon},
            {"value", b.value},
            {"value_evaluations", b.value_evaluations},
            {"offspring_per_generation", b.offspring_per_generation},
            {"case", to_string(b.bound_case)},
            {"complexity", b.complexity},
            {"expression", b.expression},
            {"fit", to_json(b.params)}};
}

inline BoundEstimate bound_from_json(const json& j) {
    for (const char* key : {"n", "x0", "epsilon", "value", "fit"})
        if (!j.contains(key)) throw std::runtime_error(std::string("bound: missing field '") + key + "'");
    BoundEstimate b;
    b.params = fit_from_json(j.at("fit"));
    detail::read_field(j, "problem", b.problem);
    detail::read_field(j, "evolver", b.evolver);
    detail::read_field(j, "n", b.n);
    detail::read_field(j, "x0", b.x0);
    detail::read_field(j, "epsilon", b.epsilon);
    detail::read_field(j, "value", b.value);
    detail::read_field(j, "value_evaluations", b.value_evaluations);
    detail::read_field(j, "offspring_per_generation", b.offspring_per_generation);
    detail::read_field(j, "complexity", b.complexity);
    detail::read_field(j, "expression", b.expression);
    b.bound_case = b.params.linear_case() ? BoundCase::logarithmic : BoundCase::polynomial;
    return b;
}

inline json to_json(const BoundCheck& c) {
    return {{"verdict", to_string(c.verdict)},
            {"unit", to_string(c.unit)},
            {"bound", c.bound},
            {"empirical_mean", c.empirical_mean},
            {"r2", c.r2}};
}

inline json to_json(const ComparisonReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"evolver", e.evolver},
                           {"bound", e.bound},
                           {"empirical_mean", e.empirical_mean},
                           {"bound_rank", e.bound_rank},
                           {"empirical_rank", e.empirical_rank}});
    return {{"problem", r.problem}, {"n", r.n}, {"epsilon", r.epsilon}, {"consistent", r.consistent}, {"entries", entries}};
}

inline json to_json(const StabilityReport& r) {
    json trials = json::array();
    for (const auto& p : r.params) trials.push_back(to_json(p));
    return {{"trials", r.trials},
            {"cv_coefficient", r.cv_coefficient},
            {"cv_exponent", r.cv_exponent},
            {"mean_coefficient", r.mean_coefficient},
            {"mean_exponent", r.mean_exponent},
            {"fits", trials}};
}

// ---------------------------------------------------------------- fronts and plot data

inline std::string front_to_csv(const ReferenceFront& front, std::string_view problem) {
    std::string out = "# problem=" + std::string(problem) + "\n";
    for (const auto& p : front.points) {
        for (std::size_t k = 0; k < p.size(); ++k) out += (k ? "," : "") + format_number(p[k]);
        out += "\n";
    }
    return out;
}

/// Values of f(psi, n) on a res x res grid spanning the sampled box, both
/// ends included. n is treated as continuous.
inline std::string surface_grid_csv(const FitParams& p, const std::vector<SelectedPoint>& points, std::size_t res = 50) {
    if (points.empty()) throw std::invalid_argument("surface_grid: no points");
    if (res < 2) throw std::invalid_argument("surface_grid: resolution must be at least 2");
    double psi_lo = points.front().psi, psi_hi = psi_lo;
    double n_lo = static_cast<double>(points.front().n), n_hi = n_lo;
    for (const auto& q : points) {
        psi_lo = std::min(psi_lo, q.psi);
        psi_hi = std::max(psi_hi, q.psi);
        n_lo = std::min(n_lo, static_cast<double>(q.n));
        n_hi = std::max(n_hi, static_cast<double>(q.n));
    }
    auto at = [res](double lo, double hi, std::size_t i) {
        if (i + 1 == res) return hi;
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(res - 1);
    };
    std::string out = "psi,n,f\n";
    for (std::size_t i = 0; i < res; ++i) {
        const double n = at(n_lo, n_hi, i);
        for (std::size_t j = 0; j < res; ++j) {
            const double psi = at(psi_lo, psi_hi, j);
            out += format_number(psi) + "," + format_number(n) + "," + format_number(predict_gain(p, psi, n)) + "\n";
        }
    }
    return out;
}

inline std::string scatter_csv(const std::vector<SelectedPoint>& points) {
    std::string out = "n,psi,gain\n";
    for (const auto& q : points)
        out += std::to_string(q.n) + "," + format_number(q.psi) + "," + format_number(q.gain) + "\n";
    return out;
}

// ---------------------------------------------------------------- report

inline std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2E", v);
    return buf;
}

/// Table row `expression | St.D. | Mean | Estimation | R²`, values in the
/// given unit.
inline std::string report_row(const BoundEstimate& b, const RunStats& s, Unit unit) {
    const bool gens = unit == Unit::generations;
    char r2[32];
    std::snprintf(r2, sizeof r2, "%.3f", b.params.r2);
    return b.expression + " | " + sci(gens ? s.std : s.std_evaluations) + " | " + sci(gens ? s.mean : s.mean_evaluations) +
           " | " + sci(gens ? b.value : b.value_evaluations) + " | " + r2;
}

}  // namespace efht
