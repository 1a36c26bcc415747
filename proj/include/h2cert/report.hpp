// Config ingestion and machine-report emission. One self-describing JSON
// document per run, with explicit version and convention fields. Complex
// numbers serialize as [re, im]; floating-point values print with 17
// significant digits; reports are byte-identical across reruns of the same
// config and library version (wall-clock timing goes to stdout only).

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "h2cert/admissibility.hpp"

namespace h2cert::io {

using Complex = std::complex<double>;
using Json = nlohmann::ordered_json;

struct AnalysisConfig {
    std::string task;  // exact | null | perturb | interpolate | admissibility | rowsums

    // system: either a generator or explicit diagonal/Jordan data
    std::optional<std::string> generator;  // "heat" | "wave"
    int generator_n = 0;
    std::vector<Complex> eigenvalues;
    std::vector<Complex> control;
    struct JordanBlockCfg {
        Complex eigenvalue;
        int size = 1;
        std::vector<Complex> coefficients;
    };
    std::vector<JordanBlockCfg> jordan;

    // task parameters
    double tau = 1.0;                  // null
    std::vector<Complex> perturbed;    // perturb
    double margin = 0.0;

    // interpolate
    std::vector<Complex> nodes;
    std::vector<int> multiplicities;
    bool standard_weights = true;
    std::vector<Eigen::MatrixXcd> weights;
    std::vector<Eigen::VectorXcd> targets;

    // admissibility
    std::vector<Complex> adm_eigenvalues;
    std::vector<std::vector<Complex>> observation;  // r rows
    std::optional<std::vector<Complex>> delta_diag;
    std::optional<std::vector<std::vector<Complex>>> delta_dense;
    double w = 0.0;

    admissibility::GridSpec grid;
    int threads = 1;
    std::string series;  // rowsums: "heat-rowsum" | "wave-rowsum"
};

// Throws std::invalid_argument naming the offending field.
AnalysisConfig parse_config(const Json& j);
Json config_to_json(const AnalysisConfig& cfg);

// JSON text with floats at 17 significant digits, deterministic key order.
std::string dump_json(const Json& j, int indent = 2);

Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const std::string& where);

}  // namespace h2cert::io
