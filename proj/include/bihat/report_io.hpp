#pragma once

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bihat/harness.hpp"

namespace bihat {

using json = nlohmann::json;

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline json report_to_json(const VerificationReport& rep) {
    json j;
    j["experiment_id"] = rep.experiment_id;
    j["check_kind"] = to_string(rep.kind);
    j["inequality"] = rep.inequality;
    j["pass"] = rep.pass;
    j["message"] = rep.message;
    j["stability_achieved"] = rep.stability_achieved;
    json sups = json::object();
    for (const auto& [N, sup] : rep.sup_ratio_per_resolution) sups[std::to_string(N)] = sup;
    j["sup_ratio_per_resolution"] = sups;
    json trials = json::array();
    for (const TrialRecord& t : rep.trials) {
        json tj;
        tj["trial_id"] = t.trial_id;
        tj["resolution"] = t.resolution;
        tj["params"] = t.params;
        tj["lhs"] = t.lhs;
        tj["rhs"] = t.rhs;
        tj["ratio"] = t.ratio;
        tj["degenerate_zero"] = t.degenerate_zero;
        tj["degenerate_bad"] = t.degenerate_bad;
        trials.push_back(tj);
    }
    j["trials"] = trials;
    return j;
}

inline VerificationReport report_from_json(const json& j) {
    VerificationReport rep;
    rep.experiment_id = j.at("experiment_id").get<std::string>();
    rep.kind = check_kind_from_string(j.at("check_kind").get<std::string>());
    rep.inequality = j.at("inequality").get<std::string>();
    rep.pass = j.at("pass").get<bool>();
    rep.message = j.at("message").get<std::string>();
    rep.stability_achieved = j.at("stability_achieved").get<double>();
    for (const auto& [key, val] : j.at("sup_ratio_per_resolution").items())
        rep.sup_ratio_per_resolution[std::stoi(key)] = val.get<double>();
    for (const auto& tj : j.at("trials")) {
        TrialRecord t;
        t.trial_id = tj.at("trial_id").get<std::string>();
        t.resolution = tj.at("resolution").get<int>();
        t.params = tj.at("params").get<std::map<std::string, double>>();
        t.lhs = tj.at("lhs").get<double>();
        t.rhs = tj.at("rhs").get<double>();
        t.ratio = tj.at("ratio").get<double>();
        t.degenerate_zero = tj.at("degenerate_zero").get<bool>();
        t.degenerate_bad = tj.at("degenerate_bad").get<bool>();
        rep.trials.push_back(std::move(t));
    }
    return rep;
}

inline std::string report_json_text(const VerificationReport& rep) { return report_to_json(rep).dump(2) + "\n"; }

/// RFC-4180-style CSV: comma separated, header row, '.' decimal point,
/// 17 significant digits. The lemma sweep uses its contractual column set;
/// other kinds list trial metadata, parameters, and the three values.
inline std::string report_to_csv(const VerificationReport& rep) {
    std::ostringstream os;
    if (rep.kind == CheckKind::discrete_lemma) {
        os << "l,a,b,n,m,s,lhs,rhs,ratio\n";
        for (const TrialRecord& t : rep.trials) {
            os << format_double(t.params.at("l")) << ',' << format_double(t.params.at("a")) << ','
               << format_double(t.params.at("b")) << ',' << format_double(t.params.at("n")) << ','
               << format_double(t.params.at("m")) << ',' << format_double(t.params.at("s")) << ','
               << format_double(t.lhs) << ',' << format_double(t.rhs) << ',' << format_double(t.ratio) << '\n';
        }
        return os.str();
    }
    std::set<std::string> keys;
    for (const TrialRecord& t : rep.trials)
        for (const auto& [k, v] : t.params) keys.insert(k);
    os << "trial_id,resolution";
    for (const std::string& k : keys) os << ',' << k;
    os << ",lhs,rhs,ratio,degenerate\n";
    for (const TrialRecord& t : rep.trials) {
        os << t.trial_id << ',' << t.resolution;
        for (const std::string& k : keys) {
            os << ',';
            auto it = t.params.find(k);
            if (it != t.params.end()) os << format_double(it->second);
        }
        os << ',' << format_double(t.lhs) << ',' << format_double(t.rhs) << ',' << format_double(t.ratio)
           << ',' << (t.degenerate_bad ? "bad" : (t.degenerate_zero ? "zero" : "")) << '\n';
    }
    return os.str();
}

inline std::string report_summary(const VerificationReport& rep) {
    std::ostringstream os;
    os << "experiment " << rep.experiment_id << " [" << rep.inequality << ", " << to_string(rep.kind) << "]\n";
    os << "trials: " << rep.trials.size() << "\n";
    for (const auto& [N, sup] : rep.sup_ratio_per_resolution) {
        if (rep.kind == CheckKind::discrete_lemma)
            os << "sup ratio: " << format_double(sup) << "\n";
        else
            os << "sup ratio @N=" << N << ": " << format_double(sup) << "\n";
    }
    os << "stability factor achieved: " << format_double(rep.stability_achieved) << "\n";
    os << rep.message << "\n";
    os << (rep.pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace bihat
