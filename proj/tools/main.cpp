#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "targetsearch/config_io.hpp"
#include "targetsearch/report.hpp"

namespace fs = std::filesystem;
using namespace targetsearch;

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeAbort = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void apply_overrides(ExperimentSpec& spec, const std::vector<std::uint64_t>& seeds,
                     const std::string& algorithm) {
    if (!seeds.empty()) spec.seeds = seeds;
    if (algorithm.empty()) return;
    if (algorithm == "proposed") {
        spec.algorithm = Algorithm::kProposed;
    } else if (algorithm == "lawnmower") {
        spec.algorithm = Algorithm::kLawnmower;
    } else if (algorithm == "refinement-only") {
        spec.algorithm = Algorithm::kRefinementOnly;
    } else {
        throw ConfigError("--algorithm must be proposed|lawnmower|refinement-only");
    }
}

int run_and_write(const ExperimentSpec& spec, const fs::path& out_dir) {
    const std::vector<RunRecord> records = run_experiment(spec);
    write_run_outputs(out_dir, spec, records);

    int found_total = 0;
    for (const RunRecord& r : records) found_total += static_cast<int>(r.found.size());
    std::cout << spec.name << ": " << records.size() << " run(s), " << found_total
              << " target(s) found, outputs in " << out_dir.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-target search simulation harness"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::uint64_t> seeds;
    std::string algorithm;

    CLI::App* run = app.add_subcommand("run", "Run an experiment configuration");
    run->add_option("--config", config_path, "Experiment config (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seeds", seeds, "Override the config's seed list")->delimiter(',');
    run->add_option("--algorithm", algorithm,
                    "Override the algorithm (proposed|lawnmower|refinement-only)");

    std::string sweep_param;
    std::vector<double> sweep_values;
    CLI::App* sweep = app.add_subcommand("sweep", "Re-run a config over parameter values");
    sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
    sweep->add_option("--param", sweep_param, "Parameter name or dotted path")->required();
    sweep->add_option("--values", sweep_values, "Values to sweep")->required()->delimiter(',');
    sweep->add_option("--out", out_dir, "Output directory");
    sweep->add_option("--seeds", seeds, "Override the config's seed list")->delimiter(',');

    std::string report_dir;
    CLI::App* report = app.add_subcommand("report", "Aggregate a run directory (CSV + SVG)");
    report->add_option("--in", report_dir, "Run directory with steps.csv")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            ExperimentSpec spec = parse_experiment(read_file(config_path));
            apply_overrides(spec, seeds, algorithm);
            return run_and_write(spec, out_dir);
        }
        if (sweep->parsed()) {
            const std::string base = read_file(config_path);
            std::ofstream summary;
            fs::create_directories(out_dir);
            summary.open(fs::path(out_dir) / "sweep_summary.csv", std::ios::binary);
            summary << "param,value,mean_steps_to_all_found,mean_rmse,n_seeds\n";
            for (double value : sweep_values) {
                ExperimentSpec spec =
                    parse_experiment(override_parameter(base, sweep_param, value));
                apply_overrides(spec, seeds, algorithm);
                const fs::path dir =
                    fs::path(out_dir) / (sweep_param + "=" + format_number(value));
                const std::vector<RunRecord> records = run_experiment(spec);
                write_run_outputs(dir, spec, records);

                double steps_sum = 0.0, rmse_sum = 0.0;
                int rmse_n = 0;
                for (const RunRecord& r : records) {
                    steps_sum += r.steps_to_all_found ? *r.steps_to_all_found
                                                      : static_cast<double>(r.steps.size());
                    if (r.rmse) {
                        rmse_sum += *r.rmse;
                        ++rmse_n;
                    }
                }
                summary << sweep_param << ',' << format_number(value) << ','
                        << format_number(steps_sum / records.size()) << ','
                        << (rmse_n > 0 ? format_number(rmse_sum / rmse_n) : "") << ','
                        << records.size() << '\n';
                std::cout << sweep_param << "=" << format_number(value) << " done\n";
            }
            return 0;
        }
        if (report->parsed()) {
            write_report(report_dir);
            std::cout << "report written to " << report_dir << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "aborted: " << e.what() << "\n";
        return kExitRuntimeAbort;
    }
    return 0;
}
