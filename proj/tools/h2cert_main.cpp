// h2cert command-line driver.
//
// Exit codes: 0 analysis ran and the verdict is positive, 1 ran with a
// negative verdict, 2 input/config error, 3 numerical failure.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "h2cert/report.hpp"
#include "h2cert/runner.hpp"
#include "h2cert/version.hpp"

namespace {

using h2cert::io::AnalysisConfig;

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::string plot_path;
    int threads = -1;  // -1: not set on the command line
    std::string grid;  // "re_min,re_max,per_decade,im_samples"
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config_path, "JSON config file");
    cmd->add_option("--out", opt.out_path, "machine report output path");
    cmd->add_option("--plot", opt.plot_path, "columnar plot-data output path");
    cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
    cmd->add_option("--grid", opt.grid, "grid spec re_min,re_max,per_decade,im_samples");
}

AnalysisConfig load_config(const CommonOptions& opt) {
    if (opt.config_path.empty()) {
        throw std::invalid_argument("config: --config is required for this subcommand");
    }
    std::ifstream in(opt.config_path);
    if (!in) throw std::invalid_argument("config: cannot read " + opt.config_path);
    h2cert::io::Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    return h2cert::io::parse_config(j);
}

void apply_overrides(AnalysisConfig& cfg, const CommonOptions& opt) {
    if (opt.threads >= 0) {
        cfg.threads = opt.threads;
    } else if (const char* env = std::getenv("H2CERT_THREADS")) {
        cfg.threads = std::max(0, std::atoi(env));
    }
    if (!opt.grid.empty()) {
        std::istringstream gs(opt.grid);
        std::string tok;
        double vals[4];
        int i = 0;
        while (std::getline(gs, tok, ',') && i < 4) vals[i++] = std::stod(tok);
        if (i != 4) throw std::invalid_argument("config: --grid needs four comma-separated values");
        cfg.grid.re_min = vals[0];
        cfg.grid.re_max = vals[1];
        cfg.grid.per_decade = static_cast<int>(vals[2]);
        cfg.grid.im_samples = static_cast<int>(vals[3]);
    }
}

int execute(AnalysisConfig cfg, const CommonOptions& opt) {
    apply_overrides(cfg, opt);
    const auto t0 = std::chrono::steady_clock::now();
    const h2cert::runner::RunOutcome outcome = h2cert::runner::run_task(cfg);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();

    std::cout << outcome.summary;
    std::cout << "elapsed: " << ms << " ms\n";

    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) throw std::invalid_argument("config: cannot write " + opt.out_path);
        out << h2cert::runner::serialize_report(outcome.report);
        std::cout << "report: " << opt.out_path << "\n";
    }
    if (!opt.plot_path.empty()) {
        if (!outcome.plot_data) {
            throw std::invalid_argument("config: this task produces no plot data");
        }
        std::ofstream out(opt.plot_path, std::ios::binary);
        if (!out) throw std::invalid_argument("config: cannot write " + opt.plot_path);
        out << *outcome.plot_data;
        std::cout << "plot data: " << opt.plot_path << "\n";
    }
    return outcome.verdict ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"h2cert: finite-section certificates for controllability, Hardy-space "
                 "interpolation, and admissibility of diagonal semigroup systems"};
    app.set_version_flag("--version", h2cert::kVersion);
    app.require_subcommand(1);

    CommonOptions opt;

    auto* analyze = app.add_subcommand("analyze", "run the task named in a config file");
    add_common(analyze, opt);

    auto* perturb = app.add_subcommand("perturb", "perturbation criteria for a configured system");
    add_common(perturb, opt);

    auto* interp = app.add_subcommand("interpolate", "weighted Hermite interpolation analysis");
    add_common(interp, opt);

    auto* adm = app.add_subcommand("admissibility", "resolvent admissibility analysis");
    add_common(adm, opt);

    auto* examples = app.add_subcommand("examples", "built-in heat/wave example systems");
    std::string generator;
    int n = 200;
    std::string task = "exact";
    double tau = 1.0;
    examples->add_option("generator", generator, "heat | wave")->required();
    examples->add_option("--n", n, "truncation size");
    examples->add_option("--task", task, "exact | null | rowsums");
    examples->add_option("--tau", tau, "time horizon for the null task");
    add_common(examples, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        AnalysisConfig cfg;
        if (examples->parsed()) {
            if (!opt.config_path.empty()) cfg = load_config(opt);
            cfg.task = task;
            cfg.generator = generator;
            cfg.generator_n = n;
            cfg.tau = tau;
        } else {
            cfg = load_config(opt);
            if (perturb->parsed()) cfg.task = "perturb";
            if (interp->parsed()) cfg.task = "interpolate";
            if (adm->parsed()) cfg.task = "admissibility";
        }
        return execute(std::move(cfg), opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
