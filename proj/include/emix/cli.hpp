// Command-line entry points: bound verification, training, the ablation
// grid and parameter sweeps. Kept header-side so the test suites can drive
// the exact code path the binary runs.
#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "emix/config.hpp"
#include "emix/oracle.hpp"
#include "emix/report.hpp"

namespace emix::cli {

inline constexpr const char* kVersion = "0.1.0";

// 0 success, 2 bound violation, 3 training abort, 64 usage, 66 missing input.
enum ExitCode { kOk = 0, kBoundViolation = 2, kTrainingAbort = 3, kUsage = 64, kMissingInput = 66 };

namespace fs = std::filesystem;

inline fs::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("EMIXLAB_OUT"); env && *env) return env;
    return "out";
}

inline std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// manifest.txt goes down before any computation; its key = value body is a
// reparseable snapshot of the resolved configuration.
inline void write_manifest(const fs::path& out_dir, const std::string& command,
                           const RunSettings* settings, const std::string& extra = "") {
    fs::create_directories(out_dir);
    std::ofstream os(out_dir / "manifest.txt");
    os << "# emixlab " << kVersion << "\n";
    os << "# command: " << command << "\n";
    os << "# started: " << iso_now() << "\n";
    os << "# output: " << out_dir.string() << "\n";
    if (!extra.empty()) os << "# " << extra << "\n";
    if (settings) write_run_config(os, *settings);
}

inline RunSettings load_run_config(const std::string& path) {
    if (!fs::exists(path)) throw ConfigError(kMissingInput, "config file not found: " + path);
    std::ifstream is(path);
    if (!is) throw ConfigError(kMissingInput, "cannot open config file: " + path);
    return parse_run_config(is);
}

inline void to_json(nlohmann::json& j, const oracle::FiniteInstance& inst) {
    j = nlohmann::json{{"seed", inst.seed},
                       {"num_classes", inst.num_classes},
                       {"feature_points", inst.feature_points},
                       {"source_joint", inst.source_joint},
                       {"target_joint", inst.target_joint},
                       {"hypotheses", inst.hypotheses},
                       {"transformations", inst.transformations}};
}

inline int cmd_verify_bounds(int instances, std::uint64_t seed, const std::string& out_flag) {
    const fs::path out = resolve_out_dir(out_flag);
    write_manifest(out, "verify-bounds", nullptr,
                   "instances: " + std::to_string(instances) + ", seed: " + std::to_string(seed));

    const oracle::SuiteResult res = oracle::run_bound_suite(instances, seed);
    {
        std::ofstream csv(out / "bound_reports.csv");
        oracle::write_reports_csv(csv, res);
    }
    const int held_instances = instances - res.violations;
    std::cout << "theorems: " << res.theorems_held() << "/4 hold on " << held_instances << "/"
              << instances << " instances\n";
    std::cout << "double-loss bound strictly tighter on " << res.tighter_count << "/" << instances
              << " instances\n";
    std::cout << "reports: " << (out / "bound_reports.csv").string() << "\n";

    if (!res.all_hold()) {
        for (const oracle::InstanceChecks& ic : res.instances) {
            if (ic.all_hold()) continue;
            const oracle::FiniteInstance inst = oracle::random_instance(ic.seed);
            nlohmann::json j;
            to_json(j, inst);
            j["chosen_c"] = ic.chosen_c;
            j["chosen_g"] = ic.chosen_g;
            for (const oracle::BoundReport& r : ic.reports)
                if (r.applicable && !r.holds())
                    j["violations"].push_back({{"theorem", r.theorem_id},
                                               {"lhs", r.lhs},
                                               {"rhs", r.rhs},
                                               {"slack", r.slack()}});
            const fs::path dump = out / ("violation_" + std::to_string(ic.seed) + ".json");
            std::ofstream(dump) << j.dump(2) << "\n";
            std::cerr << "bound violation; instance serialized to " << dump.string() << "\n";
            return kBoundViolation;
        }
    }
    return kOk;
}

inline std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

inline void write_metrics_file(const fs::path& path, const std::vector<IterationMetrics>& rows) {
    std::ofstream os(path);
    write_metrics_csv(os, rows);
}

// Two-panel figure (combined risk, target accuracy) rendered purely from
// the metric CSV files on disk.
inline void render_training_svg(const fs::path& svg_path,
                                const std::vector<std::pair<std::string, fs::path>>& runs) {
    std::vector<Series> left, right;
    for (const auto& [label, csv_path] : runs) {
        std::ifstream is(csv_path);
        const std::vector<IterationMetrics> rows = read_metrics_csv(is);
        const std::string color = variant_color(label);
        left.push_back(metrics_series(rows, label, color, &IterationMetrics::combined_risk));
        right.push_back(metrics_series(rows, label, color, &IterationMetrics::target_acc));
    }
    std::ofstream(svg_path) << svg_two_panel("combined risk", "target accuracy", left, right);
}

inline int cmd_train(const std::string& config_path, std::int64_t seed_override,
                     int iters_override, const std::string& out_flag,
                     const std::string& variants_flag) {
    RunSettings rs = load_run_config(config_path);
    if (seed_override >= 0) rs.train.seed = static_cast<std::uint64_t>(seed_override);
    if (iters_override >= 0) rs.train.iterations = iters_override;
    rs.train.validate();
    rs.task.validate();

    const fs::path out = resolve_out_dir(out_flag);
    write_manifest(out, "train", &rs);
    const Task task = generate(rs.task);

    std::vector<std::pair<std::string, fs::path>> rendered;
    if (variants_flag.empty()) {
        const TrainingReport rep = train(rs.train, task);
        write_metrics_file(out / "metrics.csv", rep.metrics);
        std::ofstream model(out / "model.txt");
        write_model(model, rep.bundle);
        rendered.emplace_back("run", out / "metrics.csv");
        std::cout << "final: acc=" << rep.metrics.back().target_acc
                  << " combined_risk=" << rep.metrics.back().combined_risk << "\n";
    } else {
        for (const std::string& v : split_csv_list(variants_flag)) {
            const TrainConfig cfg = apply_variant(rs.train, v);
            const TrainingReport rep = train(cfg, task);
            const fs::path csv = out / ("metrics_" + v + ".csv");
            write_metrics_file(csv, rep.metrics);
            std::ofstream model(out / ("model_" + v + ".txt"));
            write_model(model, rep.bundle);
            rendered.emplace_back(v, csv);
            std::cout << v << ": acc=" << rep.metrics.back().target_acc
                      << " combined_risk=" << rep.metrics.back().combined_risk << "\n";
        }
    }
    render_training_svg(out / "training_curves.svg", rendered);
    return kOk;
}

inline int cmd_ablate(const std::string& config_path, int seeds, std::int64_t seed_override,
                      int iters_override, const std::string& out_flag) {
    RunSettings rs = load_run_config(config_path);
    if (seed_override >= 0) rs.train.seed = static_cast<std::uint64_t>(seed_override);
    if (iters_override >= 0) rs.train.iterations = iters_override;
    rs.task.validate();

    const fs::path out = resolve_out_dir(out_flag);
    write_manifest(out, "ablate", &rs, "seeds: " + std::to_string(seeds));

    const std::vector<AblationRow> rows = run_ablation(rs.train, rs.task, seeds);
    for (const AblationRow& row : rows)
        write_metrics_file(out / ("metrics_" + row.variant + "_s" + std::to_string(row.seed) +
                                  ".csv"),
                           row.metrics);

    std::ostringstream md;
    md << "| s | t | m | e |";
    for (int r = 0; r < seeds; ++r) md << " seed" << r << " |";
    md << " mean |\n|---|---|---|---|";
    for (int r = 0; r < seeds; ++r) md << "---|";
    md << "---|\n";
    auto mark = [](bool on) { return on ? " x |" : "   |"; };
    for (const std::string& v : ablation_variants()) {
        const TrainConfig cfg = apply_variant(rs.train, v);
        md << "|" << mark(cfg.use_proxy && cfg.pool_source) << mark(cfg.use_proxy && cfg.pool_target)
           << mark(cfg.use_mixup) << mark(cfg.use_emixup);
        double mean = 0.0;
        int n = 0;
        char buf[32];
        for (const AblationRow& row : rows)
            if (row.variant == v) {
                std::snprintf(buf, sizeof(buf), " %.2f |", 100.0 * row.final_acc);
                md << buf;
                mean += row.final_acc;
                ++n;
            }
        std::snprintf(buf, sizeof(buf), " %.2f |\n", 100.0 * mean / std::max(1, n));
        md << buf;
    }
    std::ofstream(out / "ablation.md") << md.str();
    std::cout << md.str();
    return kOk;
}

inline int cmd_sweep(const std::string& config_path, const std::string& param,
                     const std::string& values_flag, std::int64_t seed_override,
                     int iters_override, const std::string& out_flag) {
    RunSettings rs =
        config_path.empty() ? RunSettings{} : load_run_config(config_path);
    if (seed_override >= 0) rs.train.seed = static_cast<std::uint64_t>(seed_override);
    if (iters_override >= 0) rs.train.iterations = iters_override;
    rs.task.validate();

    if (param != "gamma" && param != "alpha" && param != "proxy_loss")
        throw ConfigError(kUsage, "sweep: --param must be gamma|alpha|proxy_loss");
    const std::vector<std::string> values = split_csv_list(values_flag);
    if (values.empty()) throw ConfigError(kUsage, "sweep: --values is empty");

    const fs::path out = resolve_out_dir(out_flag);
    write_manifest(out, "sweep", &rs, "param: " + param + ", values: " + values_flag);
    const Task task = generate(rs.task);

    std::vector<Series> curves;
    std::size_t color_idx = 0;
    for (const std::string& v : values) {
        TrainConfig cfg = rs.train;
        if (param == "gamma") cfg.gamma = detail::parse_double(v, param);
        else if (param == "alpha") cfg.alpha = detail::parse_double(v, param);
        else {
            if (v == "mse") cfg.proxy_loss = ProxyLossKind::Mse;
            else if (v == "ce") cfg.proxy_loss = ProxyLossKind::CrossEntropy;
            else throw ConfigError(kUsage, "sweep: proxy_loss values must be mse|ce");
        }
        cfg.validate();
        const TrainingReport rep = train(cfg, task);
        const fs::path csv = out / ("metrics_" + param + "_" + v + ".csv");
        write_metrics_file(csv, rep.metrics);
        std::ifstream is(csv);
        const std::vector<IterationMetrics> rows = read_metrics_csv(is);
        curves.push_back(metrics_series(rows, param + "=" + v,
                                        chart_palette()[color_idx++ % chart_palette().size()],
                                        &IterationMetrics::target_acc));
        std::cout << param << "=" << v << ": acc=" << rep.metrics.back().target_acc << "\n";
    }
    std::ofstream(out / ("sweep_" + param + ".svg"))
        << svg_line_chart("target accuracy vs " + param, "iteration", "target accuracy", curves);
    return kOk;
}

inline int cli_main(int argc, const char* const* argv) {
    CLI::App app{"e-mixup domain-adaptation lab"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify-bounds", "exhaustively check the learning bounds");
    int instances = 1000;
    std::int64_t vb_seed = 0;
    std::string vb_out;
    verify->add_option("--instances", instances, "number of random instances");
    verify->add_option("--seed", vb_seed, "suite seed");
    verify->add_option("--out", vb_out, "output directory");

    auto* train_cmd = app.add_subcommand("train", "run the adversarial training loop");
    std::string tr_config, tr_out, tr_variants;
    std::int64_t tr_seed = -1;
    int tr_iters = -1;
    train_cmd->add_option("--config", tr_config, "key = value config file")->required();
    train_cmd->add_option("--seed", tr_seed, "seed override");
    train_cmd->add_option("--iters", tr_iters, "iteration override");
    train_cmd->add_option("--out", tr_out, "output directory");
    train_cmd->add_option("--variants", tr_variants, "comma list of none,t,tm,stm,ste");

    auto* ablate = app.add_subcommand("ablate", "run the five-variant ablation grid");
    std::string ab_config, ab_out;
    int ab_seeds = 5, ab_iters = -1;
    std::int64_t ab_seed = -1;
    ablate->add_option("--config", ab_config, "key = value config file")->required();
    ablate->add_option("--seeds", ab_seeds, "number of shared seeds");
    ablate->add_option("--seed", ab_seed, "base seed override");
    ablate->add_option("--iters", ab_iters, "iteration override");
    ablate->add_option("--out", ab_out, "output directory");

    auto* sweep = app.add_subcommand("sweep", "one run per parameter value, shared seed");
    std::string sw_config, sw_param, sw_values, sw_out;
    std::int64_t sw_seed = -1;
    int sw_iters = -1;
    sweep->add_option("--config", sw_config, "key = value config file");
    sweep->add_option("--param", sw_param, "gamma|alpha|proxy_loss")->required();
    sweep->add_option("--values", sw_values, "comma-separated values")->required();
    sweep->add_option("--seed", sw_seed, "seed override");
    sweep->add_option("--iters", sw_iters, "iteration override");
    sweep->add_option("--out", sw_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    }

    try {
        if (verify->parsed())
            return cmd_verify_bounds(instances, static_cast<std::uint64_t>(vb_seed), vb_out);
        if (train_cmd->parsed()) return cmd_train(tr_config, tr_seed, tr_iters, tr_out, tr_variants);
        if (ablate->parsed()) return cmd_ablate(ab_config, ab_seeds, ab_seed, ab_iters, ab_out);
        if (sweep->parsed())
            return cmd_sweep(sw_config, sw_param, sw_values, sw_seed, sw_iters, sw_out);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return e.exit_code;
    } catch (const TrainingAbort& e) {
        std::cerr << "training aborted: " << e.what() << "\n";
        return kTrainingAbort;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace emix::cli
