#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "aqpe/config.hpp"
#include "aqpe/csv.hpp"
#include "aqpe/experiment.hpp"
#include "aqpe/presets.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string preset;
    std::string out_path;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = 0;
    bool timing = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Path to a JSON experiment config");
    cmd->add_option("--preset", args.preset, "Name of a built-in config (see --list-presets)");
    cmd->add_option("--out", args.out_path, "Output file (default: config output.path, else stdout)");
    cmd->add_option("--format", args.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", args.seed, "Replace the config seed list with this single seed")
        ->each([&args](const std::string&) { args.seed_given = true; });
    cmd->add_option("--threads", args.threads, "Worker thread count (default: all cores)");
    cmd->add_flag("--timing", args.timing, "Record wall-clock seconds per result row");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw aqpe::ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

aqpe::ExperimentConfig load_config(const CommonArgs& args, bool required) {
    if (!args.config_path.empty() && !args.preset.empty())
        throw aqpe::ConfigError("give either --config or --preset, not both");
    std::string text;
    if (!args.config_path.empty()) {
        text = read_file(args.config_path);
    } else if (!args.preset.empty()) {
        const char* p = aqpe::find_preset(args.preset);
        if (p == nullptr)
            throw aqpe::ConfigError("unknown preset: " + args.preset +
                                    " (see --list-presets)");
        text = p;
    } else if (required) {
        throw aqpe::ConfigError("this command needs --config or --preset");
    } else {
        text = "{}";
    }
    aqpe::ExperimentConfig cfg = aqpe::parse_experiment_config(text);
    if (args.seed_given) cfg.seeds = {args.seed};
    if (!args.out_path.empty()) cfg.output.path = args.out_path;
    if (args.format == "csv") cfg.output.format = aqpe::OutputSpec::Format::Csv;
    if (args.format == "json") cfg.output.format = aqpe::OutputSpec::Format::Json;
    return cfg;
}

void apply_threads(const CommonArgs& args) {
#ifdef _OPENMP
    if (args.threads > 0) omp_set_num_threads(args.threads);
#else
    (void)args;
#endif
}

int emit_experiment(const aqpe::ExperimentConfig& cfg, std::vector<aqpe::ResultRow> rows) {
    aqpe::write_output(aqpe::emit_results(std::move(rows), cfg.output.format),
                       cfg.output.path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive phase-estimation sensor simulator and policy trainer"};
    app.require_subcommand(0, 1);

    bool list_presets = false;
    std::string dump_preset;
    app.add_flag("--list-presets", list_presets, "List built-in config names and exit");
    app.add_option("--dump-preset", dump_preset, "Print a built-in config as JSON and exit");

    CommonArgs train_args, baseline_args, grid_args, sql_args;
    CLI::App* train = app.add_subcommand("train", "Train policies and score them held-out");
    add_common(train, train_args);
    CLI::App* baseline =
        app.add_subcommand("baseline", "Run the non-adaptive benchmark (or its histogram)");
    add_common(baseline, baseline_args);
    CLI::App* grid = app.add_subcommand("grid", "Sweep optimizer parameter pairs");
    add_common(grid, grid_args);
    CLI::App* sql = app.add_subcommand("sql", "Emit the standard-quantum-limit reference rows");
    add_common(sql, sql_args);

    CLI::App* verify = app.add_subcommand(
        "verify", "Cross-check the sampler and posterior against exact references");
    std::size_t verify_n = 6;
    std::uint64_t verify_seed = 1;
    int verify_threads = 0;
    verify->add_option("--n", verify_n, "Policy length to verify (at most 10)");
    verify->add_option("--seed", verify_seed, "Seed for the random inputs");
    verify->add_option("--threads", verify_threads, "Worker thread count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (list_presets) {
            for (const auto& e : aqpe::preset_table()) std::printf("%s\n", e.name);
            return 0;
        }
        if (!dump_preset.empty()) {
            const char* p = aqpe::find_preset(dump_preset);
            if (p == nullptr)
                throw aqpe::ConfigError("unknown preset: " + dump_preset +
                                        " (see --list-presets)");
            std::fputs(p, stdout);
            return 0;
        }
        if (train->parsed()) {
            apply_threads(train_args);
            aqpe::ExperimentConfig cfg = load_config(train_args, true);
            return emit_experiment(cfg, aqpe::run_experiment(cfg, train_args.timing, true));
        }
        if (baseline->parsed()) {
            apply_threads(baseline_args);
            aqpe::ExperimentConfig cfg = load_config(baseline_args, false);
            if (cfg.histogram.present) {
                if (cfg.scenarios.size() != 1)
                    throw aqpe::ConfigError("histogram mode needs a single scenario variant");
                auto rows = aqpe::run_histogram(cfg.histogram, cfg.scenarios[0],
                                                cfg.seeds.empty() ? 1 : cfg.seeds[0]);
                std::string text = cfg.output.format == aqpe::OutputSpec::Format::Csv
                                       ? aqpe::render_histogram_csv(rows)
                                       : aqpe::render_histogram_json(rows);
                aqpe::write_output(text, cfg.output.path);
                return 0;
            }
            std::vector<aqpe::OptimizerSpec> kept;
            for (const auto& o : cfg.optimizers)
                if (o.kind == aqpe::OptimizerSpec::Kind::Baseline) kept.push_back(o);
            if (kept.empty()) {
                aqpe::OptimizerSpec o;
                o.kind = aqpe::OptimizerSpec::Kind::Baseline;
                o.tag = "baseline";
                kept.push_back(o);
            }
            cfg.optimizers = kept;
            return emit_experiment(cfg,
                                   aqpe::run_experiment(cfg, baseline_args.timing, false));
        }
        if (grid->parsed()) {
            apply_threads(grid_args);
            aqpe::ExperimentConfig cfg = load_config(grid_args, true);
            std::uint64_t seed = grid_args.seed_given
                                     ? grid_args.seed
                                     : (cfg.seeds.empty() ? 1 : cfg.seeds[0]);
            auto rows = aqpe::run_param_grid(cfg.grid, seed, true);
            std::string text = cfg.output.format == aqpe::OutputSpec::Format::Csv
                                   ? aqpe::render_grid_csv(rows)
                                   : aqpe::render_grid_json(rows);
            aqpe::write_output(text, cfg.output.path);
            return 0;
        }
        if (sql->parsed()) {
            apply_threads(sql_args);
            aqpe::ExperimentConfig cfg = load_config(sql_args, false);
            std::vector<aqpe::OptimizerSpec> kept;
            for (const auto& o : cfg.optimizers)
                if (o.kind == aqpe::OptimizerSpec::Kind::SqlLine) kept.push_back(o);
            if (kept.empty()) {
                aqpe::OptimizerSpec o;
                o.kind = aqpe::OptimizerSpec::Kind::SqlLine;
                o.tag = "sql-line";
                kept.push_back(o);
            }
            cfg.optimizers = kept;
            return emit_experiment(cfg, aqpe::run_experiment(cfg, sql_args.timing, false));
        }
        if (verify->parsed()) {
#ifdef _OPENMP
            if (verify_threads > 0) omp_set_num_threads(verify_threads);
#endif
            aqpe::VerifyReport report = aqpe::run_verify(verify_n, verify_seed);
            for (const auto& c : report.checks)
                std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                            c.detail.c_str());
            return report.all_pass ? 0 : 2;
        }
        std::fputs(app.help().c_str(), stdout);
        return 1;
    } catch (const aqpe::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
