#pragma once

#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "bihat/report_io.hpp"

namespace bihat {

/// Config-level failure; the CLI maps it (and JSON parse errors) to exit 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                                const std::string& where) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
}

inline Point parse_point(const json& j, int n, const std::string& where) {
    if (!j.is_array() || j.size() != static_cast<std::size_t>(n))
        throw ConfigError(where + ": expected an array of " + std::to_string(n) + " coordinate(s)");
    Point p{0.0, 0.0};
    for (int ax = 0; ax < n; ++ax) p[static_cast<std::size_t>(ax)] = j[static_cast<std::size_t>(ax)].get<double>();
    return p;
}

inline FunctionFamily parse_family(const json& j, int n, const std::string& where) {
    reject_unknown_keys(j, {"kind", "widths", "centers", "freqs", "amplitudes", "kmax", "terms", "count", "seed"},
                        where);
    FunctionFamily fam;
    fam.kind = family_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("widths")) fam.widths = j["widths"].get<std::vector<double>>();
    if (j.contains("freqs")) fam.freqs = j["freqs"].get<std::vector<double>>();
    if (j.contains("amplitudes")) fam.amplitudes = j["amplitudes"].get<std::vector<double>>();
    if (j.contains("kmax")) fam.kmax = j["kmax"].get<int>();
    if (j.contains("terms")) fam.terms = j["terms"].get<int>();
    if (j.contains("count")) fam.count = j["count"].get<int>();
    if (j.contains("seed")) fam.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("centers")) {
        std::size_t ci = 0;
        for (const auto& c : j["centers"])
            fam.centers.push_back(parse_point(c, n, where + ".centers[" + std::to_string(ci++) + "]"));
    }
    const bool needs_geometry = fam.kind != FamilyKind::trig_poly;
    if (needs_geometry && (fam.widths.empty() || fam.centers.empty()))
        throw ConfigError(where + ": kind \"" + to_string(fam.kind) + "\" requires widths and centers");
    if (fam.kind == FamilyKind::modulated_packet && fam.freqs.empty())
        throw ConfigError(where + ": modulated_packet requires freqs");
    return fam;
}

} // namespace detail

/// Parse and fully validate an experiment configuration document. Unknown
/// keys are rejected everywhere; derived exponents are resolved so that
/// defective tuples fail here (exit 2) rather than mid-run.
inline ExperimentSpec parse_experiment_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("$: config must be a JSON object");
    detail::reject_unknown_keys(doc,
                                {"id", "check_kind", "inequality", "n", "N_list", "L", "exponents", "families",
                                 "balls", "ball_family", "symbol", "t_list", "lemma", "tolerance",
                                 "stability_factor", "l_max", "output_path"},
                                "$");
    ExperimentSpec spec;
    try {
        spec.id = doc.at("id").get<std::string>();
        spec.kind = check_kind_from_string(doc.at("check_kind").get<std::string>());
        spec.inequality = doc.at("inequality").get<std::string>();
        if (doc.contains("n")) spec.n = doc["n"].get<int>();
        if (doc.contains("N_list")) spec.N_list = doc["N_list"].get<std::vector<int>>();
        if (doc.contains("L")) spec.L = doc["L"].get<double>();
        if (doc.contains("tolerance")) spec.tolerance = doc["tolerance"].get<double>();
        if (doc.contains("stability_factor")) spec.stability_factor = doc["stability_factor"].get<double>();
        if (doc.contains("l_max")) spec.l_max = doc["l_max"].get<int>();
        if (doc.contains("output_path")) spec.output_path = doc["output_path"].get<std::string>();
        if (doc.contains("t_list")) spec.t_list = doc["t_list"].get<std::vector<double>>();

        if (doc.contains("exponents")) {
            detail::reject_unknown_keys(doc["exponents"],
                                        {"p1", "p2", "q", "s", "alpha", "epsilon", "m", "lambda1", "lambda2", "t"},
                                        "$.exponents");
            spec.exponents = doc["exponents"].get<std::map<std::string, double>>();
        }
        if (doc.contains("families")) {
            std::size_t fi = 0;
            for (const auto& fj : doc["families"])
                spec.families.push_back(
                    detail::parse_family(fj, spec.n, "$.families[" + std::to_string(fi++) + "]"));
        }
        if (doc.contains("balls")) {
            detail::reject_unknown_keys(doc["balls"], {"centers", "radii"}, "$.balls");
            std::vector<Point> centers;
            std::size_t ci = 0;
            for (const auto& c : doc["balls"].at("centers"))
                centers.push_back(detail::parse_point(c, spec.n, "$.balls.centers[" + std::to_string(ci++) + "]"));
            for (const Point& c : centers)
                for (double r : doc["balls"].at("radii").get<std::vector<double>>())
                    spec.balls.push_back(Ball{c, r});
        }
        if (doc.contains("ball_family")) {
            detail::reject_unknown_keys(doc["ball_family"], {"stride"}, "$.ball_family");
            if (doc["ball_family"].contains("stride"))
                spec.ball_family_stride = doc["ball_family"]["stride"].get<int>();
        }
        if (doc.contains("symbol")) {
            detail::reject_unknown_keys(doc["symbol"], {"key", "params"}, "$.symbol");
            spec.symbol_key = doc["symbol"].at("key").get<std::string>();
            if (doc["symbol"].contains("params"))
                spec.symbol_params = doc["symbol"]["params"].get<std::map<std::string, double>>();
            make_symbol(spec.symbol_key, spec.symbol_params); // validates the key
        }
        if (doc.contains("lemma")) {
            detail::reject_unknown_keys(doc["lemma"], {"l_max", "ab_pow", "nms"}, "$.lemma");
            if (doc["lemma"].contains("l_max")) spec.lemma.l_max = doc["lemma"]["l_max"].get<int>();
            if (doc["lemma"].contains("ab_pow")) spec.lemma.ab_pow = doc["lemma"]["ab_pow"].get<int>();
            if (doc["lemma"].contains("nms")) {
                spec.lemma.nms.clear();
                for (const auto& row : doc["lemma"]["nms"]) {
                    if (!row.is_array() || row.size() != 3)
                        throw ConfigError("$.lemma.nms: each entry must be [n, m, s]");
                    spec.lemma.nms.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
                }
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("$: ") + e.what());
    }

    validate_spec(spec); // kind/resolution checks + per-inequality exponent resolution
    return spec;
}

inline int cmd_verify(const std::string& config_path, std::ostream& out, std::ostream& err) {
    ExperimentSpec spec;
    try {
        json doc = json::parse(read_text_file(config_path));
        spec = parse_experiment_config(doc);
    } catch (const json::parse_error& e) {
        err << config_path << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << config_path << ": " << e.what() << "\n";
        return 2;
    }
    const VerificationReport rep = run_experiment(spec);
    const std::string base = spec.output_path.empty() ? spec.id + "_report" : spec.output_path;
    const bool ends_json = base.size() > 5 && base.substr(base.size() - 5) == ".json";
    const std::string json_path = ends_json ? base : base + ".json";
    const std::string csv_path = (ends_json ? base.substr(0, base.size() - 5) : base) + ".csv";
    write_text_file(json_path, report_json_text(rep));
    write_text_file(csv_path, report_to_csv(rep));
    out << report_summary(rep);
    return rep.pass ? 0 : 1;
}

inline int cmd_list(std::ostream& out) {
    out << "inequalities:\n";
    for (const auto& [key, info] : inequality_registry())
        out << "  " << key << "  [" << to_string(info.kind) << "]  " << info.citation << "\n";
    out << "symbols:\n";
    for (const auto& key : symbol_registry_keys()) out << "  " << key << "\n";
    out << "families:\n";
    out << "  bump\n  gaussian\n  modulated_packet\n  trig_poly\n";
    return 0;
}

inline int cmd_report(const std::string& report_path, const std::string& format, std::ostream& out,
                      std::ostream& err) {
    VerificationReport rep;
    try {
        rep = report_from_json(json::parse(read_text_file(report_path)));
    } catch (const std::exception& e) {
        err << report_path << ": " << e.what() << "\n";
        return 2;
    }
    if (format == "json")
        out << report_json_text(rep);
    else if (format == "csv")
        out << report_to_csv(rep);
    else if (format == "summary")
        out << report_summary(rep);
    else {
        err << "unknown format: " << format << "\n";
        return 2;
    }
    return 0;
}

} // namespace bihat
