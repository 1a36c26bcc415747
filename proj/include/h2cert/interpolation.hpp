// Weighted multiple (Hermite) interpolation in H^2 of the right half-plane:
// separation products beta_n, the derivative matrices B_n, the sufficient
// atomic measure, minimal-norm solutions via the representer Gram system, the
// dual embedding operator J whose norm equals the worst-case minimal
// interpolation norm, explicit feasibility interpolants, and finite
// augmentation of a solved problem by extra Hermite conditions.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "h2cert/carleson.hpp"
#include "h2cert/halfplane.hpp"

namespace h2cert::interpolation {

using Complex = std::complex<double>;

// Thrown when the representer Gram matrix is too ill-conditioned to certify a
// solve; carries the closest node pair.
struct ConditioningError : std::runtime_error {
    int node_a;
    int node_b;
    double condition;
    ConditioningError(const std::string& msg, int a, int b, double cond)
        : std::runtime_error(msg), node_a(a), node_b(b), condition(cond) {}
};

// Interpolation data: find f in H^2 with G_n (f(l_n), f'(l_n), ...,
// f^(K_n-1)(l_n))^T = c_n for every node. Targets may be left empty when only
// the geometry is needed (measures, B_n, the J operator).
struct InterpolationProblem {
    std::vector<Complex> nodes;                // open right half-plane, distinct
    std::vector<int> multiplicities;           // K_n in [1, 8]
    std::vector<Eigen::MatrixXcd> weights;     // invertible K_n x K_n
    std::vector<Eigen::VectorXcd> targets;     // size K_n each, or empty

    static InterpolationProblem create(std::vector<Complex> nodes,
                                       std::vector<int> multiplicities,
                                       std::vector<Eigen::MatrixXcd> weights,
                                       std::vector<Eigen::VectorXcd> targets = {});

    // The classical choice G_n = diag( (Re l)^{k+1/2} / k! ).
    static Eigen::MatrixXcd standard_weight(Complex node, int multiplicity);

    int count() const { return static_cast<int>(nodes.size()); }
    int total_conditions() const;
    bool has_targets() const { return !targets.empty(); }

    // sum_n K_n Re l_n / (1+|l_n|^2), finite on any truncation; reported so a
    // caller can watch it across truncation sweeps.
    double blaschke_sum() const;

    // Condition number of G_n (largest/smallest singular value).
    double weight_condition(int n) const;

    // True when some K_n exceeds 5 (still accepted up to 8).
    bool high_multiplicity() const;
};

// beta_n = prod_{l != n} |b_{l_l}(l_n)|^{K_l}, within the truncation.
double beta(const std::vector<Complex>& nodes, const std::vector<int>& multiplicities, int n);

// The matrix B_n, stored with rows indexed by the Blaschke power k and
// columns by the derivative order j:
//   matrix(k, j) = ( b_{l_n}^k prod_{l != n} b_{l_l}^{K_l} )^(j) (l_n).
// Its strictly lower triangle vanishes exactly (a zero of order k kills the
// first k-1 derivatives), and
//   scaled = (1/beta_n) diag( (2 Re l_n)^k / k! ) * matrix
// has unimodular diagonal (the phase of prod b_{l_l}^{K_l}(l_n)).
struct BnMatrix {
    int node_index;
    double beta;
    Eigen::MatrixXcd matrix;
    Eigen::MatrixXcd scaled;
};
BnMatrix bn_matrix(const InterpolationProblem& p, int n);

// Sufficient measure: atom at l_n with weight
//   (Re l_n / beta_n^2) * || diag((Re l_n)^{k+1/2}/k!) G_n^{-1} ||^2.
// For standard weights this reduces to Re l_n / beta_n^2.
carleson::AtomicMeasure vasyunin_measure(const InterpolationProblem& p);

// An analytic function on the (closed) right half-plane that can be evaluated
// pointwise and as a truncated Taylor jet.
struct H2Function {
    std::function<Complex(Complex)> value;
    std::function<halfplane::TaylorJet(Complex, int)> jet;
};

struct MinNormSolution {
    std::vector<halfplane::KernelIndex> basis;  // derivative functionals (node, order)
    Eigen::VectorXcd coefficients;              // representer coefficients a, Gamma a = v
    double norm;                                // sqrt(v^* Gamma^{-1} v)
    double max_residual;                        // worst |G_n f(l_n) - c_n| component
    double gram_condition;
    H2Function f;
};

// Minimal-norm solution of the interpolation problem: converts conditions to
// plain Hermite data v_n = G_n^{-1} c_n and solves the representer Gram
// system. Cholesky with one step of iterative refinement; falls back to an
// eigendecomposition solve when cond(Gamma) exceeds 1e10 and refuses beyond
// 1e12 (ConditioningError naming the closest node pair).
MinNormSolution min_norm_solve(const InterpolationProblem& p);

struct FcInterpolant {
    H2Function f;
    double max_residual;  // verified against the conditions, <= 1e-9 enforced
};

// Explicit McPhail-style interpolant: generally NOT of minimal norm; an
// independent feasibility witness for min_norm_solve. Throws on residual
// failure beyond 1e-9.
FcInterpolant fc_construct(const InterpolationProblem& p);

// The embedding operator J with (J h)_n = (G_n^{-1})^T (B~_n(l_n)^{-1})^T w_n(h),
//   w_n(h)_k = ((z+conj(l_n))^{K_n-k} h)^{(K_n-k-1)}(l_n) / (K_n-k-1)! ,
// factored as J = M o E where E h = (h^(j)(l_n)) and M is the returned block
// matrix. ||J|| = sqrt(lambda_max(M Gamma M^*)) with Gamma = E E^* the kernel
// Gram matrix; it coincides with sup_{|c|=1} of the minimal interpolation
// norm.
struct JOperator {
    Eigen::MatrixXcd matrix;  // block-diagonal M
    double norm;
};
JOperator j_operator(const InterpolationProblem& p);

// Worst-case minimal norm sup_{|c|=1} min{ ||f|| : G_n f(l_n) = c_n }
// computed from the quadratic form (independent route used to validate
// j_operator).
double worst_case_min_norm(const InterpolationProblem& p);

// Extra Hermite block at one point: conditions
//   weights[j] * g^(j)(point) = targets[j],  j = 0..r-1.
struct ExtraPoint {
    Complex point;
    std::vector<Complex> weights;  // nonzero
    std::vector<Complex> targets;
};

struct AugmentedInterpolant {
    H2Function g;
    double max_residual;
    std::vector<Complex> corrector_coefficients;  // the p_j, zero when a target already matches
};

// Finite augmentation of a solved problem: adds corrector terms
//   p B(s) (s - mu)^{j} / (s+1)^{j+1}
// with B the Blaschke product over the base nodes (extended by previously
// handled extra points), solving for the p's sequentially. Returns exactly
// the base function when every extra target already matches. Extra points
// must avoid the base nodes and the mirror of -1.
AugmentedInterpolant augment_finite(const InterpolationProblem& base, const H2Function& base_solution,
                                    const std::vector<ExtraPoint>& extras);

}  // namespace h2cert::interpolation
