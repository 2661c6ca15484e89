#include "wastesig/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wastesig/features.hpp"

namespace wastesig {

using nlohmann::json;

AppConfig::AppConfig() : feature_set(core_feature_names()) {
    segmentation.seed = seed;
    forest.seed = seed;
}

AppConfig default_config() { return AppConfig{}; }

namespace {

void reject_unknown(const json& obj, const std::vector<std::string>& known,
                    const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("unknown config key '" + key + "' in " + where);
    }
}

}  // namespace

AppConfig parse_config(const std::string& json_text) {
    AppConfig cfg;
    const json root = json::parse(json_text);
    if (!root.is_object()) throw std::invalid_argument("config root must be a JSON object");
    reject_unknown(root,
                   {"cleaning", "parse", "analysis_flow", "feature_set", "labels",
                    "segmentation", "risk", "forecast", "validation", "tariffs", "report",
                    "seed"},
                   "config root");

    if (root.contains("seed")) {
        cfg.seed = root.at("seed").get<std::uint64_t>();
        cfg.segmentation.seed = cfg.seed;
        cfg.forest.seed = cfg.seed;
    }

    if (root.contains("cleaning")) {
        const json& c = root.at("cleaning");
        reject_unknown(c,
                       {"window", "max_gap_interp", "max_missing_fraction", "deflators",
                        "cap_low_pct", "cap_high_pct"},
                       "cleaning");
        if (c.contains("window")) {
            const auto w = c.at("window");
            if (!w.is_array() || w.size() != 2)
                throw std::invalid_argument("cleaning.window must be [start, end]");
            cfg.cleaning.window_start = w[0].get<int>();
            cfg.cleaning.window_end = w[1].get<int>();
        }
        if (c.contains("max_gap_interp")) cfg.cleaning.max_gap_interp = c.at("max_gap_interp");
        if (c.contains("max_missing_fraction"))
            cfg.cleaning.max_missing_fraction = c.at("max_missing_fraction");
        if (c.contains("deflators"))
            for (const auto& [year, mult] : c.at("deflators").items())
                cfg.cleaning.deflators[std::stoi(year)] = mult.get<double>();
        if (c.contains("cap_low_pct")) cfg.cleaning.cap_low_pct = c.at("cap_low_pct");
        if (c.contains("cap_high_pct")) cfg.cleaning.cap_high_pct = c.at("cap_high_pct");
        cfg.cleaning.validate();
    }

    if (root.contains("parse")) {
        const json& p = root.at("parse");
        reject_unknown(p, {"delimiter", "aliases"}, "parse");
        if (p.contains("delimiter")) {
            const std::string d = p.at("delimiter");
            if (d == "tab" || d == "\\t" || d == "\t")
                cfg.parse.delimiter = '\t';
            else if (d.size() == 1)
                cfg.parse.delimiter = d[0];
            else
                throw std::invalid_argument("parse.delimiter must be one character or 'tab'");
        }
        if (p.contains("aliases"))
            for (const auto& [canonical, names] : p.at("aliases").items()) {
                auto& list = cfg.parse.aliases[canonical];
                for (const auto& name : names) list.push_back(name.get<std::string>());
            }
    }

    if (root.contains("analysis_flow")) {
        const auto flow = parse_flow(root.at("analysis_flow").get<std::string>());
        if (!flow) throw std::invalid_argument("analysis_flow must be export or import");
        cfg.analysis_flow = *flow;
    }

    if (root.contains("feature_set")) {
        const json& fs = root.at("feature_set");
        if (fs.is_string()) {
            const std::string name = fs.get<std::string>();
            if (name == "core")
                cfg.feature_set = core_feature_names();
            else if (name == "extended")
                cfg.feature_set = extended_feature_names();
            else
                throw std::invalid_argument("feature_set must be core, extended or a name list");
        } else if (fs.is_array()) {
            cfg.feature_set.clear();
            for (const auto& name : fs) cfg.feature_set.push_back(name.get<std::string>());
            if (cfg.feature_set.empty())
                throw std::invalid_argument("feature_set list must be non-empty");
        } else {
            throw std::invalid_argument("feature_set must be core, extended or a name list");
        }
    }

    if (root.contains("labels")) {
        const json& l = root.at("labels");
        reject_unknown(l, {"scrap", "finished"}, "labels");
        if (l.contains("scrap")) {
            cfg.labels.scrap_prefixes.clear();
            for (const auto& p : l.at("scrap")) cfg.labels.scrap_prefixes.insert(p.get<std::string>());
        }
        if (l.contains("finished")) {
            cfg.labels.finished_prefixes.clear();
            for (const auto& p : l.at("finished"))
                cfg.labels.finished_prefixes.insert(p.get<std::string>());
        }
        for (const auto& p : cfg.labels.scrap_prefixes)
            if (cfg.labels.finished_prefixes.count(p))
                throw std::invalid_argument("label prefix '" + p + "' appears in both classes");
    }

    if (root.contains("segmentation")) {
        const json& s = root.at("segmentation");
        reject_unknown(s, {"k_max", "k", "eps", "min_pts", "restarts", "max_iter", "tol", "seed"},
                       "segmentation");
        if (s.contains("k_max")) cfg.segmentation.k_max = s.at("k_max");
        if (s.contains("k") && !s.at("k").is_null()) cfg.segmentation.k_override = s.at("k").get<int>();
        if (s.contains("eps") && !s.at("eps").is_null())
            cfg.segmentation.eps = s.at("eps").get<double>();
        if (s.contains("min_pts")) cfg.segmentation.min_pts = s.at("min_pts");
        if (s.contains("restarts")) cfg.segmentation.n_restarts = s.at("restarts");
        if (s.contains("max_iter")) cfg.segmentation.max_iter = s.at("max_iter");
        if (s.contains("tol")) cfg.segmentation.tol = s.at("tol");
        if (s.contains("seed")) cfg.segmentation.seed = s.at("seed").get<std::uint64_t>();
    }

    if (root.contains("risk")) {
        const json& r = root.at("risk");
        reject_unknown(r, {"l2_lambda"}, "risk");
        if (r.contains("l2_lambda")) cfg.l2_lambda = r.at("l2_lambda");
    }

    if (root.contains("forecast")) {
        const json& f = root.at("forecast");
        reject_unknown(f, {"horizon", "top"}, "forecast");
        if (f.contains("horizon")) cfg.forecast_horizon = f.at("horizon");
        if (f.contains("top")) cfg.forecast_top = f.at("top");
    }

    if (root.contains("validation")) {
        const json& v = root.at("validation");
        reject_unknown(v, {"trees", "depth", "min_leaf", "feature_subsample", "seed"},
                       "validation");
        if (v.contains("trees")) cfg.forest.n_trees = v.at("trees");
        if (v.contains("depth")) cfg.forest.max_depth = v.at("depth");
        if (v.contains("min_leaf")) cfg.forest.min_leaf = v.at("min_leaf");
        if (v.contains("feature_subsample")) cfg.forest.feature_subsample = v.at("feature_subsample");
        if (v.contains("seed")) cfg.forest.seed = v.at("seed").get<std::uint64_t>();
    }

    if (root.contains("tariffs"))
        for (const auto& [prefix, rate] : root.at("tariffs").items())
            cfg.tariffs[prefix] = rate.get<double>();

    if (root.contains("report")) {
        const json& r = root.at("report");
        reject_unknown(r, {"top_partners", "value_weighted_partners"}, "report");
        if (r.contains("top_partners")) cfg.top_partners = r.at("top_partners");
        if (r.contains("value_weighted_partners"))
            cfg.value_weighted_partners = r.at("value_weighted_partners");
    }

    return cfg;
}

AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const AppConfig& cfg) {
    json root;
    root["seed"] = cfg.seed;
    root["cleaning"] = {
        {"window", {cfg.cleaning.window_start, cfg.cleaning.window_end}},
        {"max_gap_interp", cfg.cleaning.max_gap_interp},
        {"max_missing_fraction", cfg.cleaning.max_missing_fraction},
        {"cap_low_pct", cfg.cleaning.cap_low_pct},
        {"cap_high_pct", cfg.cleaning.cap_high_pct},
    };
    if (!cfg.cleaning.deflators.empty()) {
        json d = json::object();
        for (const auto& [year, mult] : cfg.cleaning.deflators) d[std::to_string(year)] = mult;
        root["cleaning"]["deflators"] = d;
    }
    root["analysis_flow"] = to_string(cfg.analysis_flow);
    root["feature_set"] = cfg.feature_set;
    root["labels"] = {
        {"scrap", cfg.labels.scrap_prefixes},
        {"finished", cfg.labels.finished_prefixes},
    };
    root["segmentation"] = {
        {"k_max", cfg.segmentation.k_max},
        {"min_pts", cfg.segmentation.min_pts},
        {"restarts", cfg.segmentation.n_restarts},
        {"max_iter", cfg.segmentation.max_iter},
        {"tol", cfg.segmentation.tol},
        {"seed", cfg.segmentation.seed},
    };
    if (cfg.segmentation.k_override) root["segmentation"]["k"] = *cfg.segmentation.k_override;
    if (cfg.segmentation.eps) root["segmentation"]["eps"] = *cfg.segmentation.eps;
    root["risk"] = {{"l2_lambda", cfg.l2_lambda}};
    root["forecast"] = {{"horizon", cfg.forecast_horizon}, {"top", cfg.forecast_top}};
    root["validation"] = {
        {"trees", cfg.forest.n_trees},
        {"depth", cfg.forest.max_depth},
        {"min_leaf", cfg.forest.min_leaf},
        {"feature_subsample", cfg.forest.feature_subsample},
        {"seed", cfg.forest.seed},
    };
    root["tariffs"] = cfg.tariffs;
    root["report"] = {
        {"top_partners", cfg.top_partners},
        {"value_weighted_partners", cfg.value_weighted_partners},
    };
    return root.dump(2) + "\n";
}

double tariff_for(const std::map<std::string, double>& tariffs, const std::string& hs_code,
                  bool* found) {
    std::size_t best_len = 0;
    double rate = -1.0;
    bool hit = false;
    for (const auto& [prefix, r] : tariffs) {
        if (hs_code.rfind(prefix, 0) == 0 && prefix.size() >= best_len) {
            best_len = prefix.size();
            rate = r;
            hit = true;
        }
    }
    if (found) *found = hit;
    return rate;
}

}  // namespace wastesig
