#include "h2cert/controllability.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "h2cert/halfplane.hpp"
#include "h2cert/interpolation.hpp"

namespace h2cert::controllability {

using halfplane::pseudo_metric;

namespace {

void require_left(Complex lambda, const char* who) {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()) || lambda.real() >= 0.0) {
        throw std::domain_error(std::string(who) + ": eigenvalue must lie in the open left half-plane");
    }
}

}  // namespace

DiagonalSystem DiagonalSystem::create(std::vector<Complex> eigenvalues,
                                      std::vector<Complex> control) {
    if (eigenvalues.size() != control.size()) {
        throw std::invalid_argument("DiagonalSystem: eigenvalue/control lengths disagree");
    }
    if (eigenvalues.empty()) {
        throw std::invalid_argument("DiagonalSystem: empty system");
    }
    for (std::size_t n = 0; n < eigenvalues.size(); ++n) {
        require_left(eigenvalues[n], "DiagonalSystem");
        if (control[n] == Complex(0.0, 0.0)) {
            throw std::invalid_argument("DiagonalSystem: zero control coefficient b_" +
                                        std::to_string(n));
        }
    }
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
            if (eigenvalues[i] == eigenvalues[j]) {
                throw std::invalid_argument(
                    "DiagonalSystem: repeated eigenvalue at indices " + std::to_string(i) + ", " +
                    std::to_string(j) + " (a repeated eigenvalue makes exact controllability impossible)");
            }
        }
    }
    DiagonalSystem sys;
    sys.eigenvalues = std::move(eigenvalues);
    sys.control = std::move(control);
    return sys;
}

JordanSystem JordanSystem::create(std::vector<JordanBlock> blocks) {
    if (blocks.empty()) throw std::invalid_argument("JordanSystem: empty system");
    for (std::size_t n = 0; n < blocks.size(); ++n) {
        const auto& b = blocks[n];
        require_left(b.eigenvalue, "JordanSystem");
        if (b.size < 1) throw std::invalid_argument("JordanSystem: block size must be >= 1");
        if (b.coefficients.size() != static_cast<std::size_t>(b.size)) {
            throw std::invalid_argument("JordanSystem: coefficient count must equal block size");
        }
        if (b.coefficients.back() == Complex(0.0, 0.0)) {
            throw std::invalid_argument("JordanSystem: leading coefficient b_K must be nonzero");
        }
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        for (std::size_t j = i + 1; j < blocks.size(); ++j) {
            if (blocks[i].eigenvalue == blocks[j].eigenvalue) {
                throw std::invalid_argument(
                    "JordanSystem: two blocks share an eigenvalue (exact controllability impossible)");
            }
        }
    }
    JordanSystem sys;
    sys.blocks = std::move(blocks);
    return sys;
}

SeparationProduct separation_product(const DiagonalSystem& sys, int n) {
    if (n < 0 || n >= sys.size()) throw std::out_of_range("separation_product: index");
    double prod = 1.0;
    for (int k = 0; k < sys.size(); ++k) {
        if (k == n) continue;
        prod *= pseudo_metric(sys.eigenvalues[n], sys.eigenvalues[k]);
    }
    return SeparationProduct{prod, true};
}

namespace {

// Weights are assembled in the log domain: the separation products d_n decay
// exponentially in the truncation for spread-out spectra (heat: d_n ~ e^{-2n})
// and 1/d_n^2 overflows long before the damped null-control weight does.
carleson::AtomicMeasure diagonal_measure(const DiagonalSystem& sys, double tau) {
    std::vector<carleson::AtomicMeasure::Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(sys.size()));
    for (int n = 0; n < sys.size(); ++n) {
        double log_d = 0.0;
        for (int k = 0; k < sys.size(); ++k) {
            if (k != n) log_d += std::log(pseudo_metric(sys.eigenvalues[n], sys.eigenvalues[k]));
        }
        const double log_w = 2.0 * std::log(std::abs(sys.eigenvalues[n].real())) -
                             std::log(std::norm(sys.control[n])) - 2.0 * log_d +
                             2.0 * tau * sys.eigenvalues[n].real();
        const double w = std::exp(log_w);
        if (!std::isfinite(w)) {
            throw std::runtime_error(
                "control measure: weight overflows the double range at mode " + std::to_string(n) +
                " (log weight " + std::to_string(log_w) + "); reduce the truncation");
        }
        atoms.push_back({-sys.eigenvalues[n], w});
    }
    return carleson::AtomicMeasure::from_atoms(std::move(atoms));
}

}  // namespace

carleson::AtomicMeasure exact_control_measure(const DiagonalSystem& sys) {
    return diagonal_measure(sys, 0.0);
}

carleson::AtomicMeasure exact_control_measure(const JordanSystem& sys) {
    // Mirror nodes to the right half-plane and hand the block weight matrices
    // to the interpolation module's sufficient measure.
    std::vector<Complex> nodes;
    std::vector<int> mults;
    std::vector<Eigen::MatrixXcd> weights;
    nodes.reserve(sys.blocks.size());
    for (const auto& b : sys.blocks) {
        nodes.push_back(-b.eigenvalue);
        mults.push_back(b.size);
        weights.push_back(jordan_weight_matrix(b));
    }
    const auto problem = interpolation::InterpolationProblem::create(
        std::move(nodes), std::move(mults), std::move(weights));
    return interpolation::vasyunin_measure(problem);
}

carleson::AtomicMeasure null_control_measure(const DiagonalSystem& sys, double tau) {
    if (!(tau > 0.0)) throw std::domain_error("null_control_measure: tau must be positive");
    return diagonal_measure(sys, tau);
}

carleson::AtomicMeasure null_control_measure(const JordanSystem& sys, double tau) {
    if (!(tau > 0.0)) throw std::domain_error("null_control_measure: tau must be positive");
    const carleson::AtomicMeasure m = exact_control_measure(sys);
    std::vector<carleson::AtomicMeasure::Atom> atoms;
    atoms.reserve(m.size());
    for (const auto& a : m.atoms()) {
        // atom sits at -lambda_n, so 2 tau Re lambda_n = -2 tau Re(atom)
        atoms.push_back({a.location, a.weight * std::exp(-2.0 * tau * a.location.real())});
    }
    return carleson::AtomicMeasure::from_atoms(std::move(atoms));
}

Eigen::MatrixXcd jordan_weight_matrix(const JordanBlock& block) {
    const int K = block.size;
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(K, K);
    for (int r = 1; r <= K; ++r) {
        for (int j = 0; r + j <= K; ++j) {
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            G(r - 1, j) = sign * block.coefficients[static_cast<std::size_t>(r + j - 1)] /
                          halfplane::factorial(j);
        }
    }
    return G;
}

PerturbationReport perturb_check(const DiagonalSystem& sys, const std::vector<Complex>& perturbed,
                                 double margin) {
    if (perturbed.size() != sys.eigenvalues.size()) {
        throw std::invalid_argument("perturb_check: length mismatch");
    }
    for (const Complex mu : perturbed) require_left(mu, "perturb_check");

    const int N = sys.size();
    PerturbationReport rep;
    rep.eps.resize(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        rep.eps[static_cast<std::size_t>(n)] = pseudo_metric(sys.eigenvalues[n], perturbed[n]);
        if (rep.eps[static_cast<std::size_t>(n)] >= rep.sup_eps) {
            rep.sup_eps = rep.eps[static_cast<std::size_t>(n)];
            rep.witness_i = n;
        }
    }
    rep.cond_i = rep.sup_eps < 1.0;

    rep.cond_ii = true;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (int n = 0; n < N; ++n) {
        for (int k = n + 1; k < N; ++k) {
            const double p = pseudo_metric(sys.eigenvalues[n], sys.eigenvalues[k]);
            const double gap = p - rep.eps[static_cast<std::size_t>(n)] - rep.eps[static_cast<std::size_t>(k)];
            if (gap < rep.min_margin) rep.min_margin = gap;
            if (!(gap > margin) && rep.cond_ii) {
                rep.cond_ii = false;
                rep.witness_ii = {n, k};
            }
        }
    }
    if (N < 2) rep.min_margin = std::numeric_limits<double>::infinity();

    for (int n = 0; n < N; ++n) {
        double sum = 0.0;
        for (int k = 0; k < N; ++k) {
            if (k == n) continue;
            const double p = pseudo_metric(sys.eigenvalues[n], sys.eigenvalues[k]);
            sum += (rep.eps[static_cast<std::size_t>(n)] + rep.eps[static_cast<std::size_t>(k)]) *
                   std::abs(p - 1.0 / p);
        }
        if (sum >= rep.sup_sum) {
            rep.sup_sum = sum;
            rep.argmax_sum = n;
        }
    }
    rep.cond_iii_bounded = std::isfinite(rep.sup_sum);
    return rep;
}

double perturbed_metric_lower_bound(double p_nk, double eps_n, double eps_k) {
    if (!(p_nk > 0.0) || p_nk >= 1.0 || eps_n < 0.0 || eps_k < 0.0) {
        throw std::domain_error("perturbed_metric_lower_bound: need 0 < p < 1 and eps >= 0");
    }
    const double e = eps_n + eps_k;
    if (!(e < p_nk)) {
        throw std::domain_error("perturbed_metric_lower_bound: eps_n + eps_k = " +
                                std::to_string(e) + " is not below p = " + std::to_string(p_nk));
    }
    return (p_nk - e) / (1.0 - p_nk * e);
}

HeatExample heat_example(int N) {
    if (N < 2) throw std::invalid_argument("heat_example: need N >= 2");
    std::vector<Complex> lambda;
    std::vector<Complex> b;
    std::vector<long> idx;
    for (long n = 1; n <= N; ++n) {
        lambda.emplace_back(-static_cast<double>(n) * static_cast<double>(n), 0.0);
        b.emplace_back(1.0, 0.0);
        idx.push_back(n);
    }
    return HeatExample{DiagonalSystem::create(std::move(lambda), std::move(b)), std::move(idx)};
}

double HeatExample::offdiag_closed(long n, long k) {
    if (n == k) throw std::invalid_argument("offdiag_closed: n == k");
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const double k2 = static_cast<double>(k) * static_cast<double>(k);
    return 4.0 * k2 * n2 / std::abs(n2 * n2 - k2 * k2);
}

double HeatExample::row_sum_scaled(long n, long kmax) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    double sum = 0.0;
    for (long k = 1; k <= kmax; ++k) {
        if (k == n) continue;
        const double k2 = static_cast<double>(k) * static_cast<double>(k);
        sum += k2 / std::abs(n2 * n2 - k2 * k2);
    }
    return sum;
}

double HeatExample::admissible_eps_scale(long n) {
    return std::pow(static_cast<double>(n), -1.5);
}

WaveExample wave_example(int N) {
    if (N < 1) throw std::invalid_argument("wave_example: need N >= 1");
    std::vector<Complex> lambda;
    std::vector<Complex> b;
    std::vector<long> idx;
    for (long n = -N; n <= N; ++n) {
        lambda.emplace_back(-1.0, static_cast<double>(n));
        b.emplace_back(1.0, 0.0);
        idx.push_back(n);
    }
    return WaveExample{DiagonalSystem::create(std::move(lambda), std::move(b)), std::move(idx)};
}

double WaveExample::offdiag_closed(long n, long k) {
    if (n == k) throw std::invalid_argument("offdiag_closed: n == k");
    const double m = std::abs(static_cast<double>(n - k));
    return 4.0 / (m * std::sqrt(4.0 + m * m));
}

double WaveExample::row_sum_closed(long n, long kmin, long kmax) {
    double sum = 0.0;
    for (long k = kmin; k <= kmax; ++k) {
        if (k == n) continue;
        sum += offdiag_closed(n, k);
    }
    return sum;
}

double loglog_slope(const std::vector<double>& n, const std::vector<double>& s) {
    if (n.size() != s.size() || n.size() < 2) {
        throw std::invalid_argument("loglog_slope: need two matching samples");
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double m = static_cast<double>(n.size());
    for (std::size_t i = 0; i < n.size(); ++i) {
        const double x = std::log(n[i]);
        const double y = std::log(s[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace h2cert::controllability
