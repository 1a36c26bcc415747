#include "h2cert/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "h2cert/carleson.hpp"
#include "h2cert/controllability.hpp"
#include "h2cert/interpolation.hpp"
#include "h2cert/threads.hpp"
#include "h2cert/version.hpp"

namespace h2cert::runner {

namespace ctl = controllability;
namespace adm = admissibility;
namespace itp = interpolation;
using Complex = std::complex<double>;

namespace {

// Finite-section stability heuristic for measure tasks: the constant at the
// full truncation must stay within 10% of the constant at half truncation.
constexpr double kStabilityFactor = 1.10;
constexpr double kWeissDefectTolerance = 0.02;

io::Json measure_to_json(const carleson::AtomicMeasure& m) {
    io::Json atoms = io::Json::array();
    for (const auto& a : m.atoms()) {
        atoms.push_back(io::Json::array({a.location.real(), a.location.imag(), a.weight}));
    }
    return atoms;
}

io::Json conventions_json() {
    io::Json c;
    c["carleson_square"] = kSquareConvention;
    c["inner_product"] = kInnerProductConvention;
    c["certificate"] = "finite-section / finite-grid only; no infinite-sequence claims";
    return c;
}

struct BuiltSystem {
    std::optional<ctl::DiagonalSystem> diagonal;
    std::optional<ctl::JordanSystem> jordan;
    std::string description;
};

BuiltSystem build_system(const io::AnalysisConfig& cfg, int truncation) {
    BuiltSystem out;
    if (cfg.generator) {
        if (*cfg.generator == "heat") {
            out.diagonal = ctl::heat_example(std::max(2, truncation)).system;
            out.description = "heat truncation N=" + std::to_string(std::max(2, truncation));
        } else {
            out.diagonal = ctl::wave_example(std::max(1, truncation)).system;
            out.description = "wave truncation N=" + std::to_string(std::max(1, truncation));
        }
        return out;
    }
    if (!cfg.jordan.empty()) {
        std::vector<ctl::JordanBlock> blocks;
        const int count = std::min<int>(truncation, static_cast<int>(cfg.jordan.size()));
        for (int n = 0; n < count; ++n) {
            const auto& b = cfg.jordan[static_cast<std::size_t>(n)];
            blocks.push_back({b.eigenvalue, b.size, b.coefficients});
        }
        out.jordan = ctl::JordanSystem::create(std::move(blocks));
        out.description = "jordan blocks=" + std::to_string(count);
        return out;
    }
    if (cfg.eigenvalues.empty()) {
        throw std::invalid_argument("config.system: a system is required for this task");
    }
    const int count = std::min<int>(truncation, static_cast<int>(cfg.eigenvalues.size()));
    out.diagonal = ctl::DiagonalSystem::create(
        std::vector<Complex>(cfg.eigenvalues.begin(), cfg.eigenvalues.begin() + count),
        std::vector<Complex>(cfg.control.begin(), cfg.control.begin() + count));
    out.description = "explicit diagonal N=" + std::to_string(count);
    return out;
}

int full_truncation(const io::AnalysisConfig& cfg) {
    if (cfg.generator) return cfg.generator_n;
    if (!cfg.jordan.empty()) return static_cast<int>(cfg.jordan.size());
    return static_cast<int>(cfg.eigenvalues.size());
}

carleson::AtomicMeasure control_measure(const BuiltSystem& sys, const io::AnalysisConfig& cfg) {
    const bool null_task = cfg.task == "null";
    if (sys.diagonal) {
        return null_task ? ctl::null_control_measure(*sys.diagonal, cfg.tau)
                         : ctl::exact_control_measure(*sys.diagonal);
    }
    return null_task ? ctl::null_control_measure(*sys.jordan, cfg.tau)
                     : ctl::exact_control_measure(*sys.jordan);
}

RunOutcome run_measure_task(const io::AnalysisConfig& cfg) {
    const int N = full_truncation(cfg);

    const BuiltSystem full = build_system(cfg, N);
    const carleson::AtomicMeasure measure = control_measure(full, cfg);
    const double constant = carleson::carleson_constant(measure);
    const double kernel = carleson::kernel_test_constant(measure);

    // Stability probe: generators extend to a doubled truncation; explicit
    // lists can only be compared against their first half.
    const bool extendable = cfg.generator.has_value();
    const int probe = extendable ? 2 * N : std::max(N / 2, cfg.jordan.empty() ? 2 : 1);
    double probe_constant = constant;
    if (extendable || probe < N) {
        probe_constant = carleson::carleson_constant(control_measure(build_system(cfg, probe), cfg));
    }
    const double grown = extendable ? probe_constant : constant;
    const double reference = extendable ? constant : probe_constant;
    const double ratio = reference > 0.0
                             ? grown / reference
                             : (grown > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    const bool verdict = std::isfinite(constant) && ratio <= kStabilityFactor;

    RunOutcome out;
    out.verdict = verdict;
    io::Json r;
    r["system"] = full.description;
    r["truncation"] = N;
    r["measure_atoms"] = measure_to_json(measure);
    r["carleson_constant"] = constant;
    r["kernel_test_constant"] = kernel;
    r["stability_probe_truncation"] = probe;
    r["stability_probe_constant"] = probe_constant;
    r["stability_ratio"] = ratio;
    r["verdict_rule"] = "constant finite and the refined-truncation constant grows by at most "
                        "10% (finite-section stability heuristic)";
    if (cfg.task == "null") r["tau"] = cfg.tau;
    out.report = std::move(r);

    std::ostringstream s;
    s << cfg.task << " control measure, " << full.description << "\n"
      << "  atoms: " << measure.size() << ", Carleson constant: " << constant
      << " (probe truncation " << probe << ": " << probe_constant << ", growth ratio " << ratio
      << ")\n"
      << "  kernel-test constant: " << kernel << "\n"
      << "  finite-section verdict: " << (verdict ? "stable" : "not stable") << "\n";
    out.summary = s.str();
    return out;
}

RunOutcome run_perturb_task(const io::AnalysisConfig& cfg) {
    const BuiltSystem sys = build_system(cfg, full_truncation(cfg));
    if (!sys.diagonal) {
        throw std::invalid_argument("config.task: perturb requires a diagonal system");
    }
    if (cfg.perturbed.empty()) {
        throw std::invalid_argument("config.perturbed: required for the perturb task");
    }
    const ctl::PerturbationReport rep =
        ctl::perturb_check(*sys.diagonal, cfg.perturbed, cfg.margin);

    RunOutcome out;
    out.verdict = rep.cond_i && rep.cond_ii;
    io::Json r;
    r["system"] = sys.description;
    r["eps"] = rep.eps;
    r["sup_eps"] = rep.sup_eps;
    r["cond_i"] = rep.cond_i;
    r["cond_ii"] = rep.cond_ii;
    r["cond_iii_bounded_over_sweep"] = rep.cond_iii_bounded;
    r["sup_sum"] = rep.sup_sum;
    r["min_margin"] = rep.min_margin;
    r["finite_section"] = rep.finite_section;
    if (!rep.cond_ii) {
        r["witness_ii"] = io::Json::array({rep.witness_ii.first, rep.witness_ii.second});
    }
    // Displaced measure: only defined when the perturbed eigenvalues are
    // themselves an admissible diagonal system.
    const bool distinct = [&] {
        for (std::size_t i = 0; i < cfg.perturbed.size(); ++i) {
            for (std::size_t j = i + 1; j < cfg.perturbed.size(); ++j) {
                if (cfg.perturbed[i] == cfg.perturbed[j]) return false;
            }
        }
        return true;
    }();
    if (distinct) {
        const auto displaced =
            ctl::DiagonalSystem::create(cfg.perturbed, sys.diagonal->control);
        r["displaced_carleson_constant"] =
            carleson::carleson_constant(ctl::exact_control_measure(displaced));
    }
    r["verdict_rule"] = "(i) and (ii) hold; (iii) reported as bounded-over-sweep only";
    out.report = std::move(r);

    std::ostringstream s;
    s << "perturbation check, " << sys.description << "\n"
      << "  sup eps: " << rep.sup_eps << ", min margin: " << rep.min_margin
      << ", sup sum (iii, finite section): " << rep.sup_sum << "\n"
      << "  (i) " << (rep.cond_i ? "pass" : "FAIL") << ", (ii) "
      << (rep.cond_ii ? "pass" : "FAIL") << ", (iii) bounded over sweep: "
      << (rep.cond_iii_bounded ? "yes" : "no") << "\n";
    out.summary = s.str();
    return out;
}

RunOutcome run_interpolate_task(const io::AnalysisConfig& cfg) {
    if (cfg.nodes.empty()) {
        throw std::invalid_argument("config.interpolation: required for the interpolate task");
    }
    std::vector<Eigen::MatrixXcd> weights = cfg.weights;
    if (cfg.standard_weights) {
        weights.clear();
        for (std::size_t n = 0; n < cfg.nodes.size(); ++n) {
            weights.push_back(itp::InterpolationProblem::standard_weight(
                cfg.nodes[n], cfg.multiplicities[n]));
        }
    }
    const auto problem = itp::InterpolationProblem::create(cfg.nodes, cfg.multiplicities,
                                                           std::move(weights), cfg.targets);

    const carleson::AtomicMeasure measure = itp::vasyunin_measure(problem);
    const double constant = carleson::carleson_constant(measure);
    const itp::JOperator jop = itp::j_operator(problem);
    const double worst = itp::worst_case_min_norm(problem);

    RunOutcome out;
    io::Json r;
    r["nodes"] = static_cast<int>(cfg.nodes.size());
    r["total_conditions"] = problem.total_conditions();
    r["blaschke_sum"] = problem.blaschke_sum();
    r["high_multiplicity_warning"] = problem.high_multiplicity();
    r["vasyunin_measure_atoms"] = measure_to_json(measure);
    r["vasyunin_carleson_constant"] = constant;
    r["j_operator_norm"] = jop.norm;
    r["worst_case_min_norm"] = worst;

    std::ostringstream s;
    s << "interpolation problem: " << problem.count() << " nodes, "
      << problem.total_conditions() << " conditions\n"
      << "  sufficient-measure Carleson constant: " << constant << "\n"
      << "  ||J||: " << jop.norm << ", worst-case minimal norm: " << worst << "\n";

    if (problem.has_targets()) {
        const itp::MinNormSolution sol = itp::min_norm_solve(problem);
        const itp::FcInterpolant fc = itp::fc_construct(problem);
        r["min_norm"] = sol.norm;
        r["min_norm_residual"] = sol.max_residual;
        r["gram_condition"] = sol.gram_condition;
        r["fc_residual"] = fc.max_residual;
        out.verdict = sol.max_residual <= 1e-9;
        r["verdict_rule"] = "minimal-norm solution meets all conditions within 1e-9";
        s << "  minimal norm: " << sol.norm << " (residual " << sol.max_residual
          << ", Gram condition " << sol.gram_condition << ")\n";
    } else {
        out.verdict = std::isfinite(constant);
        r["verdict_rule"] = "sufficient measure has a finite Carleson constant (finite section)";
    }
    out.report = std::move(r);
    out.summary = s.str();
    return out;
}

RunOutcome run_admissibility_task(const io::AnalysisConfig& cfg) {
    if (cfg.adm_eigenvalues.empty()) {
        throw std::invalid_argument("config.admissibility: required for the admissibility task");
    }
    const auto N = static_cast<Eigen::Index>(cfg.adm_eigenvalues.size());
    Eigen::VectorXcd lambda(N);
    for (Eigen::Index n = 0; n < N; ++n) lambda(n) = cfg.adm_eigenvalues[static_cast<std::size_t>(n)];
    const auto r_rows = static_cast<Eigen::Index>(cfg.observation.size());
    if (r_rows < 1) throw std::invalid_argument("config.admissibility.observation: empty");
    Eigen::MatrixXcd C(r_rows, N);
    for (Eigen::Index r = 0; r < r_rows; ++r) {
        if (static_cast<Eigen::Index>(cfg.observation[static_cast<std::size_t>(r)].size()) != N) {
            throw std::invalid_argument("config.admissibility.observation: ragged rows");
        }
        for (Eigen::Index n = 0; n < N; ++n) {
            C(r, n) = cfg.observation[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)];
        }
    }
    adm::ResolventModel model = adm::ResolventModel::create(std::move(lambda), std::move(C));
    if (cfg.delta_diag) {
        Eigen::VectorXcd d(N);
        for (Eigen::Index n = 0; n < N; ++n) d(n) = (*cfg.delta_diag)[static_cast<std::size_t>(n)];
        model = model.with_diagonal_delta(std::move(d));
    } else if (cfg.delta_dense) {
        Eigen::MatrixXcd D(N, N);
        for (Eigen::Index r = 0; r < N; ++r) {
            for (Eigen::Index c = 0; c < N; ++c) {
                D(r, c) = (*cfg.delta_dense)[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            }
        }
        model = model.with_dense_delta(std::move(D));
    }

    const double gram = adm::admissibility_gram(model);
    const adm::WeissFit fit = adm::weiss_fit(model, cfg.w, cfg.grid);

    RunOutcome out;
    io::Json r;
    r["modes"] = static_cast<int>(N);
    r["gram_constant"] = gram;
    r["weiss_M"] = fit.M;
    r["weiss_sup_defect"] = fit.sup_defect;
    r["weiss_attained_s"] = io::complex_to_json(fit.attained_s);
    r["analyticity_constant"] = adm::analyticity_constant(model, cfg.grid);
    r["w"] = cfg.w;
    io::Json g;
    g["re_min"] = cfg.grid.re_min;
    g["re_max"] = cfg.grid.re_max;
    g["per_decade"] = cfg.grid.per_decade;
    g["im_samples"] = cfg.grid.im_samples;
    g["im_span_factor"] = cfg.grid.im_span_factor;
    r["grid"] = std::move(g);

    std::ostringstream s;
    s << "admissibility, " << N << " modes\n"
      << "  gram constant: " << gram << ", Weiss fit M: " << fit.M << " (defect "
      << fit.sup_defect << ")\n";

    bool verdict = fit.sup_defect <= kWeissDefectTolerance;
    if (model.has_delta()) {
        const adm::DeltaGap gap = adm::delta_gap(model, cfg.w, cfg.grid);
        r["delta_gap"] = gap.value;
        r["delta_gap_grid"] = gap.grid_sup;
        if (gap.analytic_sup) r["delta_gap_analytic"] = *gap.analytic_sup;
        r["delta_dissipative"] = model.delta_dissipative();
        r["theorem_hypotheses_met"] = model.delta_dissipative() && gap.value < 1.0;
        verdict = verdict && gap.value < 1.0;
        if (gap.value < 1.0) {
            const adm::PerturbedBounds pb = adm::perturbed_bounds(fit.M, cfg.w, gap.value);
            r["perturbed_M_forward"] = pb.M_forward;
            r["converse_factor"] = pb.M_converse_factor;
            if (model.delta_diag) {
                const adm::WeissFit pfit = adm::weiss_fit(model.perturbed(), cfg.w, cfg.grid);
                r["perturbed_weiss_M"] = pfit.M;
            }
        }
        s << "  delta gap: " << gap.value << " (" << (gap.value < 1.0 ? "< 1" : ">= 1")
          << "), dissipative: " << (model.delta_dissipative() ? "yes" : "no") << "\n";
    }
    r["verdict_rule"] = "grid-refinement defect <= 2% and, when a perturbation is present, "
                        "delta gap < 1";
    out.verdict = verdict;
    out.report = std::move(r);
    out.summary = s.str();
    return out;
}

RunOutcome run_rowsums_task(const io::AnalysisConfig& cfg) {
    if (!cfg.generator) {
        throw std::invalid_argument("config.system.generator: rowsums needs heat or wave");
    }
    const std::string series = cfg.series.empty()
                                   ? (*cfg.generator == "heat" ? "heat-rowsum" : "wave-rowsum")
                                   : cfg.series;
    if (series != "heat-rowsum" && series != "wave-rowsum") {
        throw std::invalid_argument("config.series: unknown series '" + series + "'");
    }

    std::vector<double> xs;
    std::vector<double> ys;
    std::ostringstream plot;
    plot << "# h2cert " << kVersion << " plot\n";
    plot << "# series: " << series << "\n";
    plot << "# convention: " << kSquareConvention << "\n";

    RunOutcome out;
    io::Json r;
    r["series"] = series;

    if (series == "heat-rowsum") {
        plot << "# columns: n row_sum_scaled  (sum_{k<=10n, k!=n} k^2/|n^4-k^4|)\n";
        for (long n = 2; n <= cfg.generator_n; n *= 2) {
            const double s = ctl::HeatExample::row_sum_scaled(n, 10 * n);
            xs.push_back(static_cast<double>(n));
            ys.push_back(s);
        }
        if (xs.size() >= 2) r["loglog_slope"] = ctl::loglog_slope(xs, ys);
    } else {
        plot << "# columns: n row_sum  (sum_{|k|<=10N, k!=n} |p_nk - 1/p_nk|)\n";
        const long N = cfg.generator_n;
        const long stride = std::max<long>(1, (2 * N + 1) / 201);
        for (long n = -N; n <= N; n += stride) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(ctl::WaveExample::row_sum_closed(n, -10 * N, 10 * N));
        }
    }
    char line[80];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g %.17g\n", xs[i], ys[i]);
        plot << line;
    }

    io::Json rows = io::Json::array();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        rows.push_back(io::Json::array({xs[i], ys[i]}));
    }
    r["rows"] = std::move(rows);
    out.report = std::move(r);
    out.plot_data = plot.str();
    out.verdict = true;
    std::ostringstream s;
    s << series << ": " << xs.size() << " rows\n";
    out.summary = s.str();
    return out;
}

}  // namespace

RunOutcome run_task(const io::AnalysisConfig& cfg) {
    set_thread_count(cfg.threads);
    RunOutcome out;
    if (cfg.task == "exact" || cfg.task == "null") {
        out = run_measure_task(cfg);
    } else if (cfg.task == "perturb") {
        out = run_perturb_task(cfg);
    } else if (cfg.task == "interpolate") {
        out = run_interpolate_task(cfg);
    } else if (cfg.task == "admissibility") {
        out = run_admissibility_task(cfg);
    } else if (cfg.task == "rowsums") {
        out = run_rowsums_task(cfg);
    } else {
        throw std::invalid_argument("config.task: unknown task '" + cfg.task + "'");
    }

    io::Json report;
    report["library_version"] = kVersion;
    report["conventions"] = conventions_json();
    report["task"] = cfg.task;
    report["config"] = io::config_to_json(cfg);
    report["results"] = std::move(out.report);
    report["verdict"] = out.verdict;
    out.report = std::move(report);
    return out;
}

std::string serialize_report(const io::Json& report) { return io::dump_json(report); }

}  // namespace h2cert::runner
