// eprlab command-line driver: run a scenario, sweep a parameter, or run the
// verification suite.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eprlab/eprlab.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3 };

void prepare_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw eprlab::ValidationError("cannot create output directory " + dir);
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw eprlab::ValidationError("cannot write " + path.string());
    return os;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed) {
    auto config = eprlab::load_config(config_path);
    if (seed) config.seed = *seed;
    prepare_out_dir(out_dir);
    const auto report = eprlab::run_scenario(config);
    const fs::path out(out_dir);

    open_out(out / "report.json") << eprlab::report_to_json(report).dump(2) << '\n';
    {
        auto csv = open_out(out / "histogram.csv");
        eprlab::write_histogram_csv(csv, report.sampled.histogram);
    }
    const auto& art = report.artifacts;
    eprlab::save_wavefunction((out / "joint.epwf").string(), art.joint);
    if (art.pointer) eprlab::save_wavefunction((out / "pointer.epwf").string(), *art.pointer);
    if (art.reduced) eprlab::save_wavefunction((out / "reduced.epwf").string(), *art.reduced);
    if (art.reduced_at_detector)
        eprlab::save_wavefunction((out / "reduced_at_detector.epwf").string(), *art.reduced_at_detector);

    if (!report.contracts_hold()) {
        for (const auto& c : report.contracts)
            if (!c.ok) std::cerr << "contract " << c.name << " violated: " << c.value << " > " << c.tolerance << '\n';
        return kNumerical;
    }
    return kOk;
}

int cmd_sweep(const std::string& config_path, const eprlab::SweepSpec& spec, unsigned jobs,
              const std::string& out_dir) {
    const auto config = eprlab::load_config(config_path);
    eprlab::validate_sweep(spec);
    prepare_out_dir(out_dir);
    const auto rows = eprlab::run_sweep(config, spec, jobs);
    auto csv = open_out(fs::path(out_dir) / "sweep.csv");
    eprlab::write_sweep_csv(csv, rows);
    return kOk;
}

int cmd_verify(bool full) {
    eprlab::VerifyOptions opt;
    opt.level = full ? eprlab::VerifyLevel::full : eprlab::VerifyLevel::quick;
    const auto summary = eprlab::run_verification(opt);
    eprlab::print_verify_table(std::cout, summary);
    std::cout << (summary.all_pass() ? "all checks passed" : "some checks FAILED") << " in " << summary.elapsed_s
              << " s\n";
    return summary.all_pass() ? kOk : kNumerical;
}

template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const eprlab::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const eprlab::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coincidence-detection simulator for a Gaussian EPR pair"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "Run one scenario and write report.json, histogram.csv and wavefunctions");
    run->add_option("--config", config_path, "Scenario config (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seed", seed, "Override the config seed");

    eprlab::SweepSpec spec;
    std::string param;
    bool log_scale = false;
    unsigned jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and write sweep.csv");
    sweep->add_option("--config", config_path, "Base scenario config (JSON)")->required();
    sweep->add_option("--param", param, "epsilon, sigma or omega0")->required();
    sweep->add_option("--from", spec.from, "First value")->required();
    sweep->add_option("--to", spec.to, "Last value")->required();
    sweep->add_option("--steps", spec.steps, "Number of values (>= 2)")->required();
    sweep->add_flag("--log", log_scale, "Space values logarithmically");
    sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    sweep->add_option("--out", out_dir, "Output directory")->required();

    bool full = false;
    bool quick = false;
    auto* verify = app.add_subcommand("verify", "Run the verification suite");
    auto* full_flag = verify->add_flag("--full", full, "4096-point grids and full sweeps");
    verify->add_flag("--quick", quick, "512-point grids (default)")->excludes(full_flag);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    if (*run) return guarded([&] { return cmd_run(config_path, out_dir, seed); });
    if (*sweep) {
        return guarded([&] {
            spec.parameter = eprlab::parse_sweep_parameter(param);
            spec.scale = log_scale ? eprlab::SweepScale::log : eprlab::SweepScale::linear;
            return cmd_sweep(config_path, spec, jobs, out_dir);
        });
    }
    return guarded([&] { return cmd_verify(full); });
}
