#include "cantorpack/report.hpp"

#include "cantorpack/errors.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

namespace cantorpack {

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

Json log_value(const LogValue& v) { return number(v.log_or_neg_inf()); }

Json rational(const Rational& r) { return to_string(r); }

Json rational(const std::optional<Rational>& r) { return r ? Json(to_string(*r)) : Json(nullptr); }

std::string cell(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json to_json(const DigitWord& w) {
    Json a = Json::array();
    for (const auto& d : w.digits()) a.push_back(to_string(d));
    return a;
}

Json to_json(const FaithfulnessReport& r) {
    Json ratios = Json::array();
    for (std::size_t i = 0; i < r.ratios.size(); ++i) {
        const auto& e = r.ratios[i];
        ratios.push_back({{"k", e.k}, {"ratio", number(e.ratio)}, {"exact", rational(e.exact)},
                          {"running_sup", number(r.running_sup[i])}});
    }
    return {{"prefix", r.prefix},
            {"window_start", r.window_start},
            {"tolerance", r.tolerance},
            {"C", number(r.C)},
            {"C_exact", rational(r.C_exact)},
            {"verdict", to_string(r.verdict)},
            {"bounds",
             {{"lower", number(r.lower_bound)},
              {"family_upper", number(r.family_upper_bound)},
              {"lower_exact", rational(r.lower_bound_exact)},
              {"family_upper_exact", rational(r.family_upper_bound_exact)}}},
            {"ratios", ratios}};
}

Json to_json(const CriticalExponent& c) {
    Json rows = Json::array();
    for (const auto& r : c.rows)
        rows.push_back({{"depth", r.depth},
                        {"log_eps", number(r.log_eps)},
                        {"threshold", number(r.threshold)},
                        {"degenerate", r.degenerate},
                        {"iterations", r.iterations}});
    return {{"rows", rows},
            {"last", number(c.last)},
            {"trend", number(c.trend)},
            {"windowed_limsup", number(c.windowed_limsup)},
            {"windowed_liminf", number(c.windowed_liminf)},
            {"nonincreasing", c.nonincreasing},
            {"nondecreasing", c.nondecreasing},
            {"degenerate", c.degenerate}};
}

Json to_json(const CounterexampleReport& r) {
    Json qv = Json::array();
    for (const auto& p : r.qv_curve)
        qv.push_back({{"s", p.s},
                      {"k", p.k},
                      {"log_Q", number(p.log_Q)},
                      {"log_V", number(p.log_V)},
                      {"L_prev", number(p.L_prev)},
                      {"threshold", number(p.threshold)},
                      {"threshold_exact", rational(p.threshold_exact)}});
    Json sel = {{"indices", r.selection.indices},
                {"ratio_first", Json::array()},
                {"ratio_second", Json::array()},
                {"limsup_estimate", number(r.selection.limsup_estimate)},
                {"note", r.selection.note}};
    for (double x : r.selection.ratio_first) sel["ratio_first"].push_back(number(x));
    for (double x : r.selection.ratio_second) sel["ratio_second"].push_back(number(x));
    return {{"faithfulness", to_json(r.faithfulness)},
            {"selection", sel},
            {"stage_depths", r.stage_depths},
            {"cylinder_family", to_json(r.cylinder_family)},
            {"interval_family", to_json(r.interval_family)},
            {"qv_curve", qv},
            {"bounds", {{"lower", number(r.bounds.lower)}, {"family_upper", number(r.bounds.upper_for_family)}}},
            {"cylinder_within_bound", r.cylinder_within_bound},
            {"interval_within_bound", r.interval_within_bound},
            {"strict_gap", r.strict_gap},
            {"notes", r.notes}};
}

namespace {

Json gamma_row(const GammaEntry& e) {
    return {{"n", e.n},
            {"log_mu", log_value(e.mu)},
            {"log_nu", log_value(e.nu)},
            {"status", to_string(e.status)},
            {"gamma", e.status == GammaEntry::Status::Defined ? number(e.gamma) : Json(nullptr)},
            {"exact", rational(e.exact)}};
}

}  // namespace

Json to_json(const RatioSequence& r) {
    Json rows = Json::array();
    for (const auto& e : r.entries) rows.push_back(gamma_row(e));
    return {{"entries", rows}, {"limsup_estimate", number(r.limsup_estimate)}, {"window_start", r.window_start}};
}

Json to_json(const BlockMonotonicity& b) {
    Json rows = Json::array();
    for (const auto& e : b.per_rank) rows.push_back(gamma_row(e));
    return {{"holds", b.holds},
            {"violation_rank", b.violation_rank ? Json(*b.violation_rank) : Json(nullptr)},
            {"limsup_all", number(b.limsup_all)},
            {"limsup_selected", number(b.limsup_selected)},
            {"per_rank", rows}};
}

Json to_json(const HypothesisCheck& h) {
    return {{"holds", h.holds},
            {"worst_margin", number(h.worst_margin)},
            {"witness_rank", h.witness ? Json(h.witness_rank) : Json(nullptr)},
            {"witness", h.witness ? to_json(*h.witness) : Json(nullptr)}};
}

Json to_json(const PackingValue& v, std::size_t max_witness) {
    Json w = Json::array();
    for (std::size_t i = 0; i < v.witness.size() && i < max_witness; ++i) {
        const auto& e = v.witness[i];
        w.push_back({{"left", rational(e.left)}, {"right", rational(e.right)}, {"log_weight", number(e.log_weight)}});
    }
    return {{"log_value", log_value(v.value)},
            {"depth", v.depth},
            {"method", v.method},
            {"lower_bound", v.lower_bound},
            {"witness_rank", v.witness_rank ? Json(*v.witness_rank) : Json(nullptr)},
            {"witness_log_count", number(v.witness_log_count)},
            {"witness_complete", v.witness_complete && v.witness.size() <= max_witness},
            {"witness", w}};
}

Json to_json(const InequalityResult& r) {
    Json j = {{"hypothesis", to_json(r.hypothesis)}};
    if (!r.hypothesis.holds) {
        j["verdict"] = nullptr;
        return j;
    }
    j["verdict"] = r.verdict;
    j["log_margin"] = number(r.log_margin);
    j["mu_value"] = to_json(r.mu_value, 16);
    j["nu_value"] = to_json(r.nu_value, 16);
    return j;
}

Json to_json(const DimensionBoundReport& r) {
    return {{"delta", r.delta},
            {"continuity_ok", r.continuity_ok},
            {"log_mu_max_cylinder", log_value(r.mu_max_cylinder)},
            {"log_nu_max_cylinder", log_value(r.nu_max_cylinder)},
            {"hypothesis", to_json(r.hypothesis)},
            {"mu_estimate", to_json(r.mu_estimate)},
            {"nu_estimate", to_json(r.nu_estimate)},
            {"bound_holds", r.bound_holds},
            {"notes", r.notes}};
}

std::string render_json(const Report& r, const std::string& timestamp) {
    Json j = {{"generated_at", timestamp}, {"command", r.command}, {"negative", r.negative}, {"failures", r.failures}};
    for (auto it = r.body.begin(); it != r.body.end(); ++it) j[it.key()] = it.value();
    return j.dump(2) + "\n";
}

std::string render_csv(const CsvTable& t) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    };
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) out += (i ? "," : "") + quote(t.header[i]);
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + quote(row[i]);
        out += "\n";
    }
    return out;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::vector<std::string> write_report(const Report& r, const std::string& dir, const std::string& format) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
    std::vector<std::string> written;
    auto put = [&](const fs::path& p, const std::string& text) {
        std::ofstream out(p);
        if (!out) throw ConfigError("cannot write " + p.string());
        out << text;
        written.push_back(p.string());
    };
    if (format == "csv") {
        for (const auto& t : r.tables) put(fs::path(dir) / (r.command + "_" + t.name + ".csv"), render_csv(t));
    } else {
        put(fs::path(dir) / (r.command + ".json"), render_json(r, utc_timestamp()));
    }
    return written;
}

}  // namespace cantorpack
