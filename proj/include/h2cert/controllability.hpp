// Controllability certificates for diagonal and Jordan semigroup systems:
// the atomic measures whose Carleson property encodes exact/null
// controllability, the perturbation criteria for displaced eigenvalues, and
// the heat/wave worked examples with their closed forms.
//
// Everything here is a finite-section certificate: separation products and
// condition sums are computed within the stored truncation, bounding but not
// proving the corresponding infinite-sequence statements.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "h2cert/carleson.hpp"

namespace h2cert::controllability {

using Complex = std::complex<double>;

// Diagonal generator truncation: eigenvalues in the open left half-plane,
// distinct, with nonzero scalar control coefficients.
struct DiagonalSystem {
    std::vector<Complex> eigenvalues;
    std::vector<Complex> control;

    static DiagonalSystem create(std::vector<Complex> eigenvalues, std::vector<Complex> control);
    int size() const { return static_cast<int>(eigenvalues.size()); }
};

// One Jordan chain per eigenvalue (more than one block for an eigenvalue
// makes exact controllability impossible, so such inputs are rejected).
struct JordanBlock {
    Complex eigenvalue;                 // Re < 0
    int size;                           // K >= 1
    std::vector<Complex> coefficients;  // b_1..b_K, b_K != 0
};

struct JordanSystem {
    std::vector<JordanBlock> blocks;

    static JordanSystem create(std::vector<JordanBlock> blocks);
    int size() const { return static_cast<int>(blocks.size()); }
};

// d_n = prod_{k != n} p(l_n, l_k) over the truncation. The finite product can
// only overestimate the infinite one, hence the certificate flag.
struct SeparationProduct {
    double value;
    bool finite_section_upper_bound;
};
SeparationProduct separation_product(const DiagonalSystem& sys, int n);

// Measure whose Carleson property is equivalent to exact controllability:
// atom at -l_n with weight |Re l_n|^2 / (|b_n|^2 d_n^2). The Jordan variant
// feeds the block weight matrices through the interpolation module.
carleson::AtomicMeasure exact_control_measure(const DiagonalSystem& sys);
carleson::AtomicMeasure exact_control_measure(const JordanSystem& sys);

// Null controllability in time tau: the exact-control weights pick up the
// factor e^{2 tau Re l_n}.
carleson::AtomicMeasure null_control_measure(const DiagonalSystem& sys, double tau);
carleson::AtomicMeasure null_control_measure(const JordanSystem& sys, double tau);

// Weight matrix of a Jordan block: row r (1-based), column j (0-based) holds
// (-1)^j b_{r+j} / j! for r+j <= K, zero otherwise. Anti-triangular and
// invertible exactly when b_K != 0.
Eigen::MatrixXcd jordan_weight_matrix(const JordanBlock& block);

// Verdicts for the displaced-eigenvalue criteria:
//  (i)   sup_n eps_n < 1,
//  (ii)  eps_n + eps_k < p_{n,k} strictly for all pairs (optional margin),
//  (iii) sup_n sum_{k != n} (eps_n+eps_k) |p_{n,k} - 1/p_{n,k}| bounded,
// where eps_n = p(l_n, mu_n). Condition (iii) involves a true supremum over
// an infinite family, so at a truncation it is only reported as the largest
// value attained across the sweep.
struct PerturbationReport {
    std::vector<double> eps;
    bool cond_i = false;
    bool cond_ii = false;
    bool cond_iii_bounded = false;  // finite over the truncation sweep
    double sup_eps = 0.0;
    double sup_sum = 0.0;    // finite-section value of the (iii) supremum
    double min_margin = 0.0; // min over pairs of p_{n,k} - eps_n - eps_k
    int witness_i = -1;                    // index attaining sup_eps when (i) fails
    std::pair<int, int> witness_ii{-1, -1};  // first failing pair of (ii)
    int argmax_sum = -1;                   // row attaining sup_sum
    bool finite_section = true;
    bool all_pass() const { return cond_i && cond_ii && cond_iii_bounded; }
};
PerturbationReport perturb_check(const DiagonalSystem& sys, const std::vector<Complex>& perturbed,
                                 double margin = 0.0);

// Lower bound p(mu_n, mu_k) >= (p - (e_n+e_k)) / (1 - p (e_n+e_k)) valid for
// any placements with p(l_n, mu_n) <= e_n, p(l_k, mu_k) <= e_k. Preconditions
// e_n + e_k < p (witnessed error otherwise).
double perturbed_metric_lower_bound(double p_nk, double eps_n, double eps_k);

// ---------------------------------------------------------------------------
// Worked examples
// ---------------------------------------------------------------------------

// Heat system: eigenvalues -n^2, n = 1..N, unit control.
struct HeatExample {
    DiagonalSystem system;
    std::vector<long> indices;  // 1..N

    // |p_{n,k} - 1/p_{n,k}| = 4 k^2 n^2 / |n^4 - k^4| (index values, not
    // positions).
    static double offdiag_closed(long n, long k);
    // S(n) = sum_{k <= kmax, k != n} k^2 / |n^4 - k^4|; decays like log n / n,
    // within the O(n^{-1/2}) envelope used by the perturbation argument.
    static double row_sum_scaled(long n, long kmax);
    // Admissible perturbation scale eps_n ~ n^{-3/2} (|l_n - mu_n| ~ sqrt(n)).
    static double admissible_eps_scale(long n);
};
HeatExample heat_example(int N);

// Damped-wave system: eigenvalues -1 + i n, n = -N..N, unit control.
struct WaveExample {
    DiagonalSystem system;
    std::vector<long> indices;  // -N..N

    // |p_{n,k} - 1/p_{n,k}| = 4 / (|n-k| sqrt(4 + (n-k)^2)).
    static double offdiag_closed(long n, long k);
    // Row sum over k in [kmin, kmax] \ {n}; bounded above and below in n.
    static double row_sum_closed(long n, long kmin, long kmax);
};
WaveExample wave_example(int N);

// Least-squares slope of log S against log n.
double loglog_slope(const std::vector<double>& n, const std::vector<double>& s);

}  // namespace h2cert::controllability
