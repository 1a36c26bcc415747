// Resolvent-based admissibility analysis for truncated diagonal contraction
// generators with finite-rank observation: the square-root resolvent fit, the
// exact truncated admissibility Gram constant, the perturbation gap
// sup ||Delta (s-A)^{-1}||, relative-boundedness constants, and the
// forward/converse transfer bounds for the perturbed semigroup.
//
// Half-plane suprema are certified on a documented logarithmic grid only; the
// grid is echoed into every report.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <utility>

namespace h2cert::admissibility {

using Complex = std::complex<double>;

struct ResolventModel {
    Eigen::VectorXcd eigenvalues;  // Re < 0 (truncated diagonal contraction generator)
    Eigen::MatrixXcd observation;  // r x N
    std::optional<Eigen::VectorXcd> delta_diag;   // diagonal perturbation
    std::optional<Eigen::MatrixXcd> delta_dense;  // or a dense one (not both)

    static ResolventModel create(Eigen::VectorXcd eigenvalues, Eigen::MatrixXcd observation);
    ResolventModel with_diagonal_delta(Eigen::VectorXcd delta) const;
    ResolventModel with_dense_delta(Eigen::MatrixXcd delta) const;

    int modes() const { return static_cast<int>(eigenvalues.size()); }
    bool has_delta() const { return delta_diag.has_value() || delta_dense.has_value(); }
    // Re delta_n <= 0 for a diagonal perturbation (numerical dissipativity of
    // the truncation); reported, not enforced.
    bool delta_dissipative() const;
    // Diagonal system with eigenvalues shifted by the diagonal perturbation.
    ResolventModel perturbed() const;
};

// Sampling grid for half-plane suprema: Re s - w runs over a logarithmic grid
// and Im s over a symmetric window covering +-2 max |Im lambda_n| (collapsing
// to {0} for real spectra, where the supremum provably sits on the real
// axis).
struct GridSpec {
    double re_min = 1e-3;
    double re_max = 1e6;
    int per_decade = 40;
    int im_samples = 129;
    double im_span_factor = 2.0;
};

// ||C (s-A)^{-1}||: largest singular value of the r x N matrix C_{i,n}/(s-l_n).
double resolvent_norm(const ResolventModel& model, Complex s);

// Grid certificate for ||C(s-A)^{-1}|| <= M / sqrt(Re s - w): M is the grid
// supremum of resolvent_norm * sqrt(Re s - w), computed on the base grid and
// once more on a 2x refined grid; sup_defect is the relative increase under
// refinement (a grid-quality diagnostic).
struct WeissFit {
    double M = 0.0;
    double sup_defect = 0.0;
    Complex attained_s;
};
WeissFit weiss_fit(const ResolventModel& model, double w, const GridSpec& grid = {});

// Exact truncated infinite-time admissibility constant: largest eigenvalue of
// Q with Q(n,m) = (sum_i C_{i,n} conj(C_{i,m})) / (-l_n - conj(l_m)), the
// quadratic form of int_0^inf ||C e^{At} x||^2 dt on the truncation.
double admissibility_gram(const ResolventModel& model);

// sup over the grid of ||Delta (s-A)^{-1}||. For a diagonal perturbation the
// half-plane supremum has the closed form max_n |delta_n| / (w0 - Re l_n)
// (approached as s -> w0 + i Im l_n but not attained, e.g. on the real axis
// for real spectra); it is reported alongside and folded into value.
struct DeltaGap {
    double value = 0.0;     // max(grid_sup, analytic_sup when available)
    double grid_sup = 0.0;
    std::optional<double> analytic_sup;
};
DeltaGap delta_gap(const ResolventModel& model, double w0, const GridSpec& grid = {});

// From ||Delta (s-A)^{-1}|| = R: relative bound ||Delta x|| <= a ||A x|| + b ||x||
// with (a, b) = (R, R |s|).
std::pair<double, double> abound_from_resolvent(double R, Complex s);

// Resolvent transfer across the perturbation A -> A + Delta with gap rho:
// forward  M_Delta <= M / (1 - rho)   (needs rho < 1),
// converse M <= M_Delta (1 + rho).
struct PerturbedBounds {
    double M_forward;
    double M_converse_factor;
};
PerturbedBounds perturbed_bounds(double M, double w, double rho);

// Growth bound e^{||E|| t} for A + Delta with Delta = Delta_1 + E, Delta_1
// dissipative A-bounded and E bounded.
double growth_bound(double E_norm, double t);

// Largest singular value of e^{Mt} (matrix-exponential oracle used by the
// growth-bound checks; exposed for the report).
double semigroup_norm(const Eigen::MatrixXcd& generator, double t);

// Measured analyticity constant of the truncation: the grid supremum of
// |s| ||(s-A)^{-1}|| = |s| / min_n |s - l_n| over Re s > 0. The resolvent
// converse needs ||(s-A)^{-1}|| <= m/|s| with an unspecified m; this reports
// m as observed rather than assuming a value.
double analyticity_constant(const ResolventModel& model, const GridSpec& grid = {});

}  // namespace h2cert::admissibility
