// Flat `key = value` experiment configuration: `#` comments, no nesting,
// unknown and duplicate keys are hard errors.
#pragma once

#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "emix/trainer.hpp"

namespace emix {

struct ConfigError : std::runtime_error {
    int exit_code;
    ConfigError(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
};

struct RunSettings {
    TrainConfig train;
    TaskConfig task;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(64, "config: bad boolean for key '" + key + "': " + v);
}

inline double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(64, "config: bad number for key '" + key + "': " + v);
    }
}

inline long long parse_int(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const long long i = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(64, "config: bad integer for key '" + key + "': " + v);
    }
}

}  // namespace detail

inline void apply_config_key(RunSettings& rs, const std::string& key, const std::string& value) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;
    TrainConfig& t = rs.train;
    TaskConfig& k = rs.task;
    if (key == "gamma") t.gamma = parse_double(value, key);
    else if (key == "eta0") t.eta0 = parse_double(value, key);
    else if (key == "delta") t.delta = parse_double(value, key);
    else if (key == "l0") t.l0 = parse_double(value, key);
    else if (key == "lr_scale") t.lr_scale = parse_double(value, key);
    else if (key == "beta") t.beta = parse_double(value, key);
    else if (key == "momentum") t.momentum = parse_double(value, key);
    else if (key == "alpha") t.alpha = parse_double(value, key);
    else if (key == "tau") t.tau = parse_double(value, key);
    else if (key == "iterations") t.iterations = static_cast<int>(parse_int(value, key));
    else if (key == "batch_size") t.batch_size = static_cast<int>(parse_int(value, key));
    else if (key == "use_proxy") t.use_proxy = parse_bool(value, key);
    else if (key == "pool_source") t.pool_source = parse_bool(value, key);
    else if (key == "pool_target") t.pool_target = parse_bool(value, key);
    else if (key == "use_mixup") t.use_mixup = parse_bool(value, key);
    else if (key == "use_emixup") t.use_emixup = parse_bool(value, key);
    else if (key == "seed") t.seed = static_cast<std::uint64_t>(parse_int(value, key));
    else if (key == "eval_interval") t.eval_interval = static_cast<int>(parse_int(value, key));
    else if (key == "eta_form") {
        if (value == "progressive") t.eta_form = EtaForm::Progressive;
        else if (value == "paper") t.eta_form = EtaForm::Paper;
        else throw ConfigError(64, "config: eta_form must be progressive|paper");
    } else if (key == "emix_partner") {
        if (value == "different") t.emix_partner = PartnerMode::Different;
        else if (value == "same") t.emix_partner = PartnerMode::Same;
        else throw ConfigError(64, "config: emix_partner must be different|same");
    } else if (key == "proxy_to_g") t.proxy_to_g = parse_bool(value, key);
    else if (key == "proxy_loss") {
        if (value == "mse") t.proxy_loss = ProxyLossKind::Mse;
        else if (value == "ce") t.proxy_loss = ProxyLossKind::CrossEntropy;
        else throw ConfigError(64, "config: proxy_loss must be mse|ce");
    } else if (key == "hidden_units") t.hidden_units = static_cast<int>(parse_int(value, key));
    else if (key == "feature_dim") t.feature_dim = static_cast<int>(parse_int(value, key));
    else if (key == "track_a_distance") t.track_a_distance = parse_bool(value, key);
    else if (key == "generator") k.generator = value;
    else if (key == "k") k.k = static_cast<int>(parse_int(value, key));
    else if (key == "n_s") k.n_s = static_cast<int>(parse_int(value, key));
    else if (key == "n_t") k.n_t = static_cast<int>(parse_int(value, key));
    else if (key == "noise") k.noise = parse_double(value, key);
    else if (key == "rotation_deg") k.rotation_deg = parse_double(value, key);
    else if (key == "translation_x") k.translation_x = parse_double(value, key);
    else if (key == "translation_y") k.translation_y = parse_double(value, key);
    else if (key == "task_seed") k.seed = static_cast<std::uint64_t>(parse_int(value, key));
    else throw ConfigError(64, "config: unknown key '" + key + "'");
}

inline RunSettings parse_run_config(std::istream& is) {
    RunSettings rs;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(64, "config: line " + std::to_string(line_no) + " is not key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(64, "config: empty key at line " + std::to_string(line_no));
        if (!seen.insert(key).second) throw ConfigError(64, "config: duplicate key '" + key + "'");
        apply_config_key(rs, key, value);
    }
    return rs;
}

// Full resolved snapshot; reparsing it reproduces the same settings.
inline void write_run_config(std::ostream& os, const RunSettings& rs) {
    const TrainConfig& t = rs.train;
    const TaskConfig& k = rs.task;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.12g", v);
        return std::string(buf);
    };
    os << "gamma = " << num(t.gamma) << "\n";
    os << "eta0 = " << num(t.eta0) << "\n";
    os << "delta = " << num(t.delta) << "\n";
    os << "l0 = " << num(t.l0) << "\n";
    os << "lr_scale = " << num(t.lr_scale) << "\n";
    os << "beta = " << num(t.beta) << "\n";
    os << "momentum = " << num(t.momentum) << "\n";
    os << "alpha = " << num(t.alpha) << "\n";
    os << "tau = " << num(t.tau) << "\n";
    os << "iterations = " << t.iterations << "\n";
    os << "batch_size = " << t.batch_size << "\n";
    os << "use_proxy = " << (t.use_proxy ? "true" : "false") << "\n";
    os << "pool_source = " << (t.pool_source ? "true" : "false") << "\n";
    os << "pool_target = " << (t.pool_target ? "true" : "false") << "\n";
    os << "use_mixup = " << (t.use_mixup ? "true" : "false") << "\n";
    os << "use_emixup = " << (t.use_emixup ? "true" : "false") << "\n";
    os << "seed = " << t.seed << "\n";
    os << "eval_interval = " << t.eval_interval << "\n";
    os << "eta_form = " << (t.eta_form == EtaForm::Progressive ? "progressive" : "paper") << "\n";
    os << "emix_partner = " << (t.emix_partner == PartnerMode::Different ? "different" : "same")
       << "\n";
    os << "proxy_to_g = " << (t.proxy_to_g ? "true" : "false") << "\n";
    os << "proxy_loss = " << (t.proxy_loss == ProxyLossKind::Mse ? "mse" : "ce") << "\n";
    os << "hidden_units = " << t.hidden_units << "\n";
    os << "feature_dim = " << t.feature_dim << "\n";
    os << "track_a_distance = " << (t.track_a_distance ? "true" : "false") << "\n";
    os << "generator = " << k.generator << "\n";
    os << "k = " << k.k << "\n";
    os << "n_s = " << k.n_s << "\n";
    os << "n_t = " << k.n_t << "\n";
    os << "noise = " << num(k.noise) << "\n";
    os << "rotation_deg = " << num(k.rotation_deg) << "\n";
    os << "translation_x = " << num(k.translation_x) << "\n";
    os << "translation_y = " << num(k.translation_y) << "\n";
    os << "task_seed = " << k.seed << "\n";
}

}  // namespace emix
