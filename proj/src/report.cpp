#include "h2cert/report.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace h2cert::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config." + where + ": " + what);
}

double number_at(const Json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

int int_at(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<int>();
}

std::vector<Complex> complex_list(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of [re, im] pairs");
    std::vector<Complex> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(complex_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Json complex_list_to_json(const std::vector<Complex>& v) {
    Json j = Json::array();
    for (const Complex z : v) j.push_back(complex_to_json(z));
    return j;
}

// Floats with 17 significant digits; trailing ".0" is not forced, parsers
// accept integer-looking literals for doubles.
void dump_value(const Json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * depth), ' ');
    const std::string pad_in(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + Json(it.key()).dump() + ": ";
                dump_value(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Short numeric arrays (e.g. complex pairs) stay on one line.
            const bool flat = j.size() <= 4 && std::all_of(j.begin(), j.end(), [](const Json& e) {
                                  return e.is_number() || e.is_boolean() || e.is_string();
                              });
            if (flat) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i > 0) out += ", ";
                    dump_value(j[i], out, indent, depth);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) out += ",\n";
                out += pad_in;
                dump_value(j[i], out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(where, "expected [re, im]");
    }
    return Complex(j[0].get<double>(), j[1].get<double>());
}

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump_value(j, out, indent, 0);
    out += "\n";
    return out;
}

AnalysisConfig parse_config(const Json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
    AnalysisConfig cfg;

    if (!j.contains("task") || !j["task"].is_string()) fail("task", "required string");
    cfg.task = j["task"].get<std::string>();
    const bool known = cfg.task == "exact" || cfg.task == "null" || cfg.task == "perturb" ||
                       cfg.task == "interpolate" || cfg.task == "admissibility" ||
                       cfg.task == "rowsums";
    if (!known) fail("task", "unknown task '" + cfg.task + "'");

    if (j.contains("system")) {
        const Json& s = j["system"];
        if (!s.is_object()) fail("system", "expected an object");
        if (s.contains("generator")) {
            cfg.generator = s["generator"].get<std::string>();
            if (*cfg.generator != "heat" && *cfg.generator != "wave") {
                fail("system.generator", "expected 'heat' or 'wave'");
            }
            if (!s.contains("n")) fail("system.n", "required with a generator");
            cfg.generator_n = int_at(s["n"], "system.n");
            if (cfg.generator_n < 1) fail("system.n", "must be positive");
        } else if (s.contains("jordan")) {
            if (!s["jordan"].is_array() || s["jordan"].empty()) {
                fail("system.jordan", "expected a nonempty array of blocks");
            }
            for (std::size_t b = 0; b < s["jordan"].size(); ++b) {
                const Json& jb = s["jordan"][b];
                const std::string where = "system.jordan[" + std::to_string(b) + "]";
                AnalysisConfig::JordanBlockCfg blk;
                blk.eigenvalue = complex_from_json(jb.at("eigenvalue"), where + ".eigenvalue");
                blk.size = int_at(jb.at("size"), where + ".size");
                blk.coefficients = complex_list(jb.at("coefficients"), where + ".coefficients");
                cfg.jordan.push_back(std::move(blk));
            }
        } else {
            if (!s.contains("eigenvalues") || !s.contains("control")) {
                fail("system", "need generator, jordan, or eigenvalues+control");
            }
            cfg.eigenvalues = complex_list(s["eigenvalues"], "system.eigenvalues");
            cfg.control = complex_list(s["control"], "system.control");
            if (cfg.eigenvalues.size() != cfg.control.size()) {
                fail("system.control", "length differs from eigenvalues");
            }
            for (std::size_t n = 0; n < cfg.control.size(); ++n) {
                if (cfg.control[n] == Complex(0.0, 0.0)) {
                    fail("system.control[" + std::to_string(n) + "]", "zero control coefficient");
                }
            }
        }
    }

    if (j.contains("tau")) cfg.tau = number_at(j["tau"], "tau");
    if (j.contains("margin")) cfg.margin = number_at(j["margin"], "margin");
    if (j.contains("perturbed")) cfg.perturbed = complex_list(j["perturbed"], "perturbed");

    if (j.contains("interpolation")) {
        const Json& s = j["interpolation"];
        cfg.nodes = complex_list(s.at("nodes"), "interpolation.nodes");
        if (!s.contains("multiplicities")) fail("interpolation.multiplicities", "required");
        for (std::size_t i = 0; i < s["multiplicities"].size(); ++i) {
            cfg.multiplicities.push_back(
                int_at(s["multiplicities"][i], "interpolation.multiplicities"));
        }
        if (s.contains("weights") && s["weights"].is_string()) {
            if (s["weights"].get<std::string>() != "standard") {
                fail("interpolation.weights", "expected 'standard' or explicit matrices");
            }
            cfg.standard_weights = true;
        } else if (s.contains("weights")) {
            cfg.standard_weights = false;
            for (std::size_t n = 0; n < s["weights"].size(); ++n) {
                const Json& wj = s["weights"][n];
                const std::string where = "interpolation.weights[" + std::to_string(n) + "]";
                const auto K = static_cast<Eigen::Index>(wj.size());
                Eigen::MatrixXcd G(K, K);
                for (Eigen::Index r = 0; r < K; ++r) {
                    if (static_cast<Eigen::Index>(wj[r].size()) != K) fail(where, "ragged matrix");
                    for (Eigen::Index c = 0; c < K; ++c) {
                        G(r, c) = complex_from_json(wj[r][c], where);
                    }
                }
                cfg.weights.push_back(std::move(G));
            }
        }
        if (s.contains("targets")) {
            for (std::size_t n = 0; n < s["targets"].size(); ++n) {
                const auto v =
                    complex_list(s["targets"][n], "interpolation.targets[" + std::to_string(n) + "]");
                Eigen::VectorXcd t(static_cast<Eigen::Index>(v.size()));
                for (std::size_t i = 0; i < v.size(); ++i) t(static_cast<Eigen::Index>(i)) = v[i];
                cfg.targets.push_back(std::move(t));
            }
        }
    }

    if (j.contains("admissibility")) {
        const Json& s = j["admissibility"];
        cfg.adm_eigenvalues = complex_list(s.at("eigenvalues"), "admissibility.eigenvalues");
        if (!s.contains("observation")) fail("admissibility.observation", "required");
        for (std::size_t r = 0; r < s["observation"].size(); ++r) {
            cfg.observation.push_back(complex_list(
                s["observation"][r], "admissibility.observation[" + std::to_string(r) + "]"));
        }
        if (s.contains("delta_diag")) {
            cfg.delta_diag = complex_list(s["delta_diag"], "admissibility.delta_diag");
        }
        if (s.contains("delta_dense")) {
            std::vector<std::vector<Complex>> d;
            for (std::size_t r = 0; r < s["delta_dense"].size(); ++r) {
                d.push_back(complex_list(s["delta_dense"][r],
                                         "admissibility.delta_dense[" + std::to_string(r) + "]"));
            }
            cfg.delta_dense = std::move(d);
        }
        if (s.contains("w")) cfg.w = number_at(s["w"], "admissibility.w");
    }

    if (j.contains("grid")) {
        const Json& g = j["grid"];
        if (g.contains("re_min")) cfg.grid.re_min = number_at(g["re_min"], "grid.re_min");
        if (g.contains("re_max")) cfg.grid.re_max = number_at(g["re_max"], "grid.re_max");
        if (g.contains("per_decade")) cfg.grid.per_decade = int_at(g["per_decade"], "grid.per_decade");
        if (g.contains("im_samples")) cfg.grid.im_samples = int_at(g["im_samples"], "grid.im_samples");
        if (g.contains("im_span_factor")) {
            cfg.grid.im_span_factor = number_at(g["im_span_factor"], "grid.im_span_factor");
        }
    }
    if (j.contains("threads")) cfg.threads = int_at(j["threads"], "threads");
    if (j.contains("series")) cfg.series = j["series"].get<std::string>();
    return cfg;
}

Json config_to_json(const AnalysisConfig& cfg) {
    Json j;
    j["task"] = cfg.task;
    Json sys;
    if (cfg.generator) {
        sys["generator"] = *cfg.generator;
        sys["n"] = cfg.generator_n;
    } else if (!cfg.jordan.empty()) {
        Json blocks = Json::array();
        for (const auto& b : cfg.jordan) {
            Json jb;
            jb["eigenvalue"] = complex_to_json(b.eigenvalue);
            jb["size"] = b.size;
            jb["coefficients"] = complex_list_to_json(b.coefficients);
            blocks.push_back(std::move(jb));
        }
        sys["jordan"] = std::move(blocks);
    } else if (!cfg.eigenvalues.empty()) {
        sys["eigenvalues"] = complex_list_to_json(cfg.eigenvalues);
        sys["control"] = complex_list_to_json(cfg.control);
    }
    if (!sys.is_null()) j["system"] = std::move(sys);

    if (cfg.task == "null") j["tau"] = cfg.tau;
    if (cfg.task == "perturb") {
        j["perturbed"] = complex_list_to_json(cfg.perturbed);
        j["margin"] = cfg.margin;
    }
    if (!cfg.nodes.empty()) {
        Json s;
        s["nodes"] = complex_list_to_json(cfg.nodes);
        s["multiplicities"] = cfg.multiplicities;
        if (cfg.standard_weights) {
            s["weights"] = "standard";
        } else {
            Json ws = Json::array();
            for (const auto& G : cfg.weights) {
                Json m = Json::array();
                for (Eigen::Index r = 0; r < G.rows(); ++r) {
                    Json row = Json::array();
                    for (Eigen::Index c = 0; c < G.cols(); ++c) {
                        row.push_back(complex_to_json(G(r, c)));
                    }
                    m.push_back(std::move(row));
                }
                ws.push_back(std::move(m));
            }
            s["weights"] = std::move(ws);
        }
        if (!cfg.targets.empty()) {
            Json ts = Json::array();
            for (const auto& t : cfg.targets) {
                Json row = Json::array();
                for (Eigen::Index i = 0; i < t.size(); ++i) row.push_back(complex_to_json(t(i)));
                ts.push_back(std::move(row));
            }
            s["targets"] = std::move(ts);
        }
        j["interpolation"] = std::move(s);
    }
    if (!cfg.adm_eigenvalues.empty()) {
        Json s;
        s["eigenvalues"] = complex_list_to_json(cfg.adm_eigenvalues);
        Json obs = Json::array();
        for (const auto& row : cfg.observation) obs.push_back(complex_list_to_json(row));
        s["observation"] = std::move(obs);
        if (cfg.delta_diag) s["delta_diag"] = complex_list_to_json(*cfg.delta_diag);
        if (cfg.delta_dense) {
            Json d = Json::array();
            for (const auto& row : *cfg.delta_dense) d.push_back(complex_list_to_json(row));
            s["delta_dense"] = std::move(d);
        }
        s["w"] = cfg.w;
        j["admissibility"] = std::move(s);
    }
    Json g;
    g["re_min"] = cfg.grid.re_min;
    g["re_max"] = cfg.grid.re_max;
    g["per_decade"] = cfg.grid.per_decade;
    g["im_samples"] = cfg.grid.im_samples;
    g["im_span_factor"] = cfg.grid.im_span_factor;
    j["grid"] = std::move(g);
    j["threads"] = cfg.threads;
    if (!cfg.series.empty()) j["series"] = cfg.series;
    return j;
}

}  // namespace h2cert::io
