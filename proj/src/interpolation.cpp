#include "h2cert/interpolation.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace h2cert::interpolation {

using halfplane::factorial;
using halfplane::HalfPlanePoint;
using halfplane::ipow;
using halfplane::KernelIndex;
using halfplane::TaylorJet;

namespace {

constexpr int kMaxMultiplicity = 8;
constexpr double kCholeskyCondLimit = 1e10;
constexpr double kCondLimit = 1e12;
constexpr double kResidualTolerance = 1e-9;

TaylorJet jet_const(Complex v, Complex z0, int m) { return TaylorJet::constant(v, z0, m); }

// Jet of 1/(z + a) at z0; only needs z0 + a != 0, so boundary centers are fine.
TaylorJet jet_inv_linear(Complex a, Complex z0, int m) {
    return (TaylorJet::variable(z0, m) + jet_const(a, z0, m)).reciprocal();
}

// Jet of b_lambda(z)^k at z0 (z0 anywhere with z0 != -conj(lambda); the
// public blaschke_jet wrapper enforces the open half-plane).
TaylorJet jet_blaschke(Complex lambda, int k, Complex z0, int m) {
    if (k == 0) return jet_const(Complex(1.0, 0.0), z0, m);
    const TaylorJet num = TaylorJet::variable(z0, m) - jet_const(lambda, z0, m);
    const TaylorJet den = TaylorJet::variable(z0, m) + jet_const(std::conj(lambda), z0, m);
    return (num / den).pow(k);
}

// prod_{l != skip} b_{nodes[l]}^{K_l} as a jet at z0 (skip < 0 keeps all).
TaylorJet jet_blaschke_product(const std::vector<Complex>& nodes, const std::vector<int>& mults,
                               int skip, Complex z0, int m) {
    TaylorJet acc = jet_const(Complex(1.0, 0.0), z0, m);
    for (std::size_t l = 0; l < nodes.size(); ++l) {
        if (static_cast<int>(l) == skip) continue;
        acc *= jet_blaschke(nodes[l], mults[l], z0, m);
    }
    return acc;
}

std::pair<int, int> closest_node_pair(const std::vector<Complex>& nodes) {
    int a = 0, b = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            const double p = halfplane::pseudo_metric(nodes[i], nodes[j]);
            if (p < best) {
                best = p;
                a = static_cast<int>(i);
                b = static_cast<int>(j);
            }
        }
    }
    return {a, b};
}

std::vector<KernelIndex> basis_of(const InterpolationProblem& p) {
    std::vector<KernelIndex> basis;
    basis.reserve(static_cast<std::size_t>(p.total_conditions()));
    for (int n = 0; n < p.count(); ++n) {
        for (int j = 0; j < p.multiplicities[n]; ++j) {
            basis.emplace_back(HalfPlanePoint(p.nodes[n]), j);
        }
    }
    return basis;
}

Eigen::MatrixXcd gram_of(const std::vector<KernelIndex>& basis) {
    const auto n = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXcd gamma(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            gamma(r, c) = halfplane::kernel_gram(basis[static_cast<std::size_t>(r)],
                                                 basis[static_cast<std::size_t>(c)]);
        }
    }
    return gamma;
}

// Stacked Hermite data v_n = G_n^{-1} c_n.
Eigen::VectorXcd hermite_data(const InterpolationProblem& p) {
    Eigen::VectorXcd v(p.total_conditions());
    Eigen::Index pos = 0;
    for (int n = 0; n < p.count(); ++n) {
        const Eigen::VectorXcd vn = p.weights[n].partialPivLu().solve(p.targets[n]);
        v.segment(pos, p.multiplicities[n]) = vn;
        pos += p.multiplicities[n];
    }
    return v;
}

// The raw Gram mixes scales badly (a derivative representer at node l has
// squared norm (2i)!/(2 Re l)^{2i+1}), so everything runs through the
// Jacobi-scaled Gram D Gamma D with unit diagonal; the conditioning
// thresholds refer to that scale-free matrix.
struct GramFactorization {
    Eigen::MatrixXcd gamma;
    Eigen::VectorXd scale;  // D = diag(scale), scale_i = 1/sqrt(Gamma_ii)
    Eigen::MatrixXcd scaled;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig;  // of the scaled Gram
    double condition = 0.0;
    bool use_eigen_fallback = false;

    Eigen::MatrixXcd gamma_inverse() const {
        const Eigen::MatrixXcd inv = eig.eigenvectors() *
                                     eig.eigenvalues().cwiseInverse().asDiagonal() *
                                     eig.eigenvectors().adjoint();
        return scale.asDiagonal() * inv * scale.asDiagonal();
    }
};

GramFactorization factor_gram(const InterpolationProblem& p) {
    GramFactorization f;
    f.gamma = gram_of(basis_of(p));
    const Eigen::Index n = f.gamma.rows();
    f.scale.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) f.scale(i) = 1.0 / std::sqrt(f.gamma(i, i).real());
    f.scaled = f.scale.asDiagonal() * f.gamma * f.scale.asDiagonal();
    f.scaled = ((f.scaled + f.scaled.adjoint()) / 2.0).eval();
    f.eig.compute(f.scaled);
    const double lmin = f.eig.eigenvalues().minCoeff();
    const double lmax = f.eig.eigenvalues().maxCoeff();
    f.condition = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<double>::infinity();
    if (f.condition > kCondLimit) {
        const auto [a, b] = closest_node_pair(p.nodes);
        throw ConditioningError(
            "Gram matrix condition " + std::to_string(f.condition) +
                " exceeds 1e12; closest nodes " + std::to_string(a) + " and " + std::to_string(b),
            a, b, f.condition);
    }
    f.use_eigen_fallback = f.condition > kCholeskyCondLimit;
    return f;
}

Eigen::VectorXcd solve_gram(const GramFactorization& f, const Eigen::VectorXcd& rhs) {
    const Eigen::VectorXcd scaled_rhs = f.scale.asDiagonal() * rhs;
    Eigen::VectorXcd x;
    if (f.use_eigen_fallback) {
        const auto& V = f.eig.eigenvectors();
        Eigen::VectorXcd y = V.adjoint() * scaled_rhs;
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) /= f.eig.eigenvalues()(i);
        x = V * y;
    } else {
        const Eigen::LLT<Eigen::MatrixXcd> llt(f.scaled);
        x = llt.solve(scaled_rhs);
        x += llt.solve(scaled_rhs - f.scaled * x);  // one refinement step
    }
    return f.scale.asDiagonal() * x;
}

// W_n(k, i) = (K-k)!/(i! (i+1)! (K-k-1-i)!) * (2 Re l)^{i+1}, the Leibniz
// expansion of ((z+conj(l))^{K-k} h)^{(K-k-1)}(l) / (K-k-1)! over h^(i)(l).
Eigen::MatrixXcd leibniz_weight_matrix(Complex node, int K) {
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(K, K);
    const double a2 = 2.0 * node.real();
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i + k + 1 <= K; ++i) {
            W(k, i) = factorial(K - k) / (factorial(i) * factorial(i + 1) * factorial(K - k - 1 - i)) *
                      std::pow(a2, i + 1);
        }
    }
    return W;
}

// Block-diagonal M with M_n = (G_n^{-1})^T Bspec_n^{-1} W_n (plain
// transposes; Bspec is already the transpose of the derivative-indexed B~_n).
Eigen::MatrixXcd j_block_matrix(const InterpolationProblem& p) {
    const Eigen::Index total = p.total_conditions();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(total, total);
    Eigen::Index pos = 0;
    for (int n = 0; n < p.count(); ++n) {
        const int K = p.multiplicities[n];
        const BnMatrix bn = bn_matrix(p, n);
        const Eigen::MatrixXcd W = leibniz_weight_matrix(p.nodes[n], K);
        const Eigen::MatrixXcd GinvT = p.weights[n].inverse().transpose();
        M.block(pos, pos, K, K) = GinvT * bn.matrix.partialPivLu().solve(W);
        pos += K;
    }
    return M;
}

double largest_eigenvalue(const Eigen::MatrixXcd& hermitian) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
        (hermitian + hermitian.adjoint()) / 2.0);
    return es.eigenvalues().maxCoeff();
}

// Residuals |G_n f(l_n) - c_n| for a jet-evaluable candidate.
double conditions_residual(const InterpolationProblem& p, const H2Function& f) {
    double worst = 0.0;
    for (int n = 0; n < p.count(); ++n) {
        const int K = p.multiplicities[n];
        const TaylorJet jet = f.jet(p.nodes[n], K - 1);
        Eigen::VectorXcd fvec(K);
        for (int j = 0; j < K; ++j) fvec(j) = jet.derivative(j);
        worst = std::max(worst, (p.weights[n] * fvec - p.targets[n]).cwiseAbs().maxCoeff());
    }
    return worst;
}

H2Function make_function(std::function<TaylorJet(Complex, int)> jet) {
    H2Function f;
    f.jet = std::move(jet);
    f.value = [jet = f.jet](Complex z) { return jet(z, 0).value(); };
    return f;
}

}  // namespace

InterpolationProblem InterpolationProblem::create(std::vector<Complex> nodes,
                                                  std::vector<int> multiplicities,
                                                  std::vector<Eigen::MatrixXcd> weights,
                                                  std::vector<Eigen::VectorXcd> targets) {
    const std::size_t N = nodes.size();
    if (N == 0) throw std::invalid_argument("InterpolationProblem: no nodes");
    if (multiplicities.size() != N || weights.size() != N) {
        throw std::invalid_argument("InterpolationProblem: field lengths disagree");
    }
    if (!targets.empty() && targets.size() != N) {
        throw std::invalid_argument("InterpolationProblem: target count disagrees with nodes");
    }
    for (std::size_t n = 0; n < N; ++n) {
        if (!std::isfinite(nodes[n].real()) || !std::isfinite(nodes[n].imag()) ||
            nodes[n].real() <= 0.0) {
            throw std::domain_error("InterpolationProblem: node outside the open right half-plane");
        }
        if (multiplicities[n] < 1 || multiplicities[n] > kMaxMultiplicity) {
            throw std::invalid_argument("InterpolationProblem: multiplicity must lie in [1, 8]");
        }
        const int K = multiplicities[n];
        if (weights[n].rows() != K || weights[n].cols() != K) {
            throw std::invalid_argument("InterpolationProblem: weight shape mismatch");
        }
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(weights[n]);
        if (svd.singularValues()(K - 1) <= 0.0) {
            throw std::invalid_argument("InterpolationProblem: singular weight matrix G_" +
                                        std::to_string(n));
        }
        if (!targets.empty() && targets[n].size() != K) {
            throw std::invalid_argument("InterpolationProblem: target size mismatch");
        }
    }
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i + 1; j < N; ++j) {
            if (nodes[i] == nodes[j]) {
                throw std::invalid_argument("InterpolationProblem: coincident nodes " +
                                            std::to_string(i) + ", " + std::to_string(j));
            }
        }
    }
    InterpolationProblem p;
    p.nodes = std::move(nodes);
    p.multiplicities = std::move(multiplicities);
    p.weights = std::move(weights);
    p.targets = std::move(targets);
    return p;
}

Eigen::MatrixXcd InterpolationProblem::standard_weight(Complex node, int multiplicity) {
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(multiplicity, multiplicity);
    for (int k = 0; k < multiplicity; ++k) {
        G(k, k) = std::pow(node.real(), k + 0.5) / factorial(k);
    }
    return G;
}

int InterpolationProblem::total_conditions() const {
    int total = 0;
    for (const int k : multiplicities) total += k;
    return total;
}

double InterpolationProblem::blaschke_sum() const {
    double s = 0.0;
    for (int n = 0; n < count(); ++n) {
        s += multiplicities[n] * nodes[n].real() / (1.0 + std::norm(nodes[n]));
    }
    return s;
}

double InterpolationProblem::weight_condition(int n) const {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(weights.at(static_cast<std::size_t>(n)));
    const auto& s = svd.singularValues();
    return s(0) / s(s.size() - 1);
}

bool InterpolationProblem::high_multiplicity() const {
    return std::any_of(multiplicities.begin(), multiplicities.end(), [](int k) { return k > 5; });
}

double beta(const std::vector<Complex>& nodes, const std::vector<int>& multiplicities, int n) {
    if (n < 0 || n >= static_cast<int>(nodes.size())) {
        throw std::out_of_range("beta: node index");
    }
    double prod = 1.0;
    for (std::size_t l = 0; l < nodes.size(); ++l) {
        if (static_cast<int>(l) == n) continue;
        const double p = halfplane::pseudo_metric(nodes[n], nodes[l]);
        if (p == 0.0) throw std::invalid_argument("beta: coincident nodes");
        prod *= std::pow(p, multiplicities[l]);
    }
    return prod;
}

BnMatrix bn_matrix(const InterpolationProblem& p, int n) {
    const int K = p.multiplicities.at(static_cast<std::size_t>(n));
    const Complex lam = p.nodes[static_cast<std::size_t>(n)];

    BnMatrix out;
    out.node_index = n;
    out.beta = beta(p.nodes, p.multiplicities, n);
    out.matrix = Eigen::MatrixXcd::Zero(K, K);

    const int order = K - 1;
    TaylorJet row = jet_blaschke_product(p.nodes, p.multiplicities, n, lam, order);
    const TaylorJet bfac = jet_blaschke(lam, 1, lam, order);
    for (int k = 0; k < K; ++k) {
        for (int j = 0; j < K; ++j) out.matrix(k, j) = row.derivative(j);
        if (k + 1 < K) row *= bfac;
    }

    out.scaled = out.matrix;
    const double a2 = 2.0 * lam.real();
    for (int k = 0; k < K; ++k) {
        out.scaled.row(k) *= ipow(Complex(a2, 0.0), k).real() / (factorial(k) * out.beta);
    }
    // Structural checks: exact zero strict lower triangle, unimodular diagonal.
    for (int k = 0; k < K; ++k) {
        for (int j = 0; j < k; ++j) {
            if (out.matrix(k, j) != Complex(0.0, 0.0)) {
                throw std::runtime_error("bn_matrix: nonzero strict lower triangle");
            }
        }
        if (std::abs(std::abs(out.scaled(k, k)) - 1.0) > 1e-8) {
            throw std::runtime_error("bn_matrix: scaled diagonal lost unit modulus");
        }
    }
    return out;
}

carleson::AtomicMeasure vasyunin_measure(const InterpolationProblem& p) {
    std::vector<carleson::AtomicMeasure::Atom> atoms;
    atoms.reserve(static_cast<std::size_t>(p.count()));
    for (int n = 0; n < p.count(); ++n) {
        const int K = p.multiplicities[n];
        const Complex lam = p.nodes[n];
        const Eigen::MatrixXcd D = InterpolationProblem::standard_weight(lam, K);
        const Eigen::MatrixXcd scaledInv = D * p.weights[n].inverse();
        const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(scaledInv);
        const double opnorm = svd.singularValues()(0);
        const double bn = beta(p.nodes, p.multiplicities, n);
        atoms.push_back({lam, lam.real() / (bn * bn) * opnorm * opnorm});
    }
    return carleson::AtomicMeasure::from_atoms(std::move(atoms));
}

MinNormSolution min_norm_solve(const InterpolationProblem& p) {
    if (!p.has_targets()) {
        throw std::invalid_argument("min_norm_solve: problem carries no targets");
    }
    const GramFactorization f = factor_gram(p);
    const Eigen::VectorXcd v = hermite_data(p);
    const Eigen::VectorXcd a = solve_gram(f, v);

    MinNormSolution sol;
    sol.basis = basis_of(p);
    sol.coefficients = a;
    sol.gram_condition = f.condition;
    sol.norm = std::sqrt(std::max(0.0, (v.adjoint() * a)(0).real()));

    auto basis = std::make_shared<std::vector<KernelIndex>>(sol.basis);
    auto coeff = std::make_shared<Eigen::VectorXcd>(a);
    sol.f = make_function([basis, coeff](Complex z0, int m) {
        TaylorJet acc = TaylorJet::constant(Complex(0.0, 0.0), z0, m);
        for (std::size_t b = 0; b < basis->size(); ++b) {
            const auto& idx = (*basis)[b];
            const int i = idx.order;
            const double sign = (i % 2 == 0) ? 1.0 : -1.0;
            TaylorJet rep = jet_inv_linear(std::conj(idx.node.value), z0, m).pow(i + 1);
            rep *= Complex(sign * factorial(i), 0.0) * (*coeff)(static_cast<Eigen::Index>(b));
            acc += rep;
        }
        return acc;
    });
    sol.max_residual = conditions_residual(p, sol.f);
    return sol;
}

FcInterpolant fc_construct(const InterpolationProblem& p) {
    if (!p.has_targets()) {
        throw std::invalid_argument("fc_construct: problem carries no targets");
    }
    const int N = p.count();

    // t~_n = B~_n(l_n)^{-1} G_n^{-1} c_n, with B~ = Bspec^T.
    std::vector<Eigen::VectorXcd> tcoef(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        const BnMatrix bn = bn_matrix(p, n);
        const Eigen::VectorXcd gc = p.weights[n].partialPivLu().solve(p.targets[n]);
        tcoef[static_cast<std::size_t>(n)] =
            bn.matrix.transpose().partialPivLu().solve(gc);
    }

    // e_n = q_n(b_{l_n}(z)) R_n(z), R_n(z) = prod_{l != n} (b_l(z)/b_l(l_n))^{K_l}
    // * (1+l_n)/(z+1), with q_n the degree-<K_n polynomial making the jet of
    // e_n at l_n equal (1, 0, ..., 0).
    std::vector<std::vector<Complex>> qcoef(static_cast<std::size_t>(N));
    std::vector<Complex> rnorm(static_cast<std::size_t>(N));  // prod b_l(l_n)^{K_l}
    for (int n = 0; n < N; ++n) {
        const int K = p.multiplicities[n];
        const Complex lam = p.nodes[n];
        const int order = K - 1;
        rnorm[static_cast<std::size_t>(n)] =
            jet_blaschke_product(p.nodes, p.multiplicities, n, lam, 0).value();

        TaylorJet R = jet_blaschke_product(p.nodes, p.multiplicities, n, lam, order);
        R *= (Complex(1.0, 0.0) / rnorm[static_cast<std::size_t>(n)]);
        R *= jet_inv_linear(Complex(1.0, 0.0), lam, order);
        R *= (Complex(1.0, 0.0) + lam);

        const TaylorJet target = R.reciprocal();
        const TaylorJet bjet = jet_blaschke(lam, 1, lam, order);
        // powers of the b-jet, then triangular solve for q
        std::vector<TaylorJet> bpow;
        bpow.reserve(static_cast<std::size_t>(K));
        TaylorJet cur = jet_const(Complex(1.0, 0.0), lam, order);
        for (int k = 0; k < K; ++k) {
            bpow.push_back(cur);
            if (k + 1 < K) cur *= bjet;
        }
        std::vector<Complex> q(static_cast<std::size_t>(K));
        for (int m = 0; m < K; ++m) {
            Complex rhs = target.coefficient(m);
            for (int k = 0; k < m; ++k) rhs -= q[static_cast<std::size_t>(k)] * bpow[static_cast<std::size_t>(k)].coefficient(m);
            q[static_cast<std::size_t>(m)] = rhs / bpow[static_cast<std::size_t>(m)].coefficient(m);
        }
        qcoef[static_cast<std::size_t>(n)] = std::move(q);
    }

    auto nodes = std::make_shared<std::vector<Complex>>(p.nodes);
    auto mults = std::make_shared<std::vector<int>>(p.multiplicities);
    auto qs = std::make_shared<std::vector<std::vector<Complex>>>(std::move(qcoef));
    auto rn = std::make_shared<std::vector<Complex>>(std::move(rnorm));
    auto ts = std::make_shared<std::vector<Eigen::VectorXcd>>(std::move(tcoef));

    H2Function f = make_function([nodes, mults, qs, rn, ts](Complex z0, int m) {
        const int N = static_cast<int>(nodes->size());
        TaylorJet acc = TaylorJet::constant(Complex(0.0, 0.0), z0, m);
        for (int n = 0; n < N; ++n) {
            const int K = (*mults)[static_cast<std::size_t>(n)];
            const Complex lam = (*nodes)[static_cast<std::size_t>(n)];
            const TaylorJet P = jet_blaschke_product(*nodes, *mults, n, z0, m);
            const TaylorJet bn1 = jet_blaschke(lam, 1, z0, m);

            // e_n
            TaylorJet qval = jet_const((*qs)[static_cast<std::size_t>(n)][0], z0, m);
            TaylorJet bp = bn1;
            for (int k = 1; k < K; ++k) {
                qval += (*qs)[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)] * bp;
                if (k + 1 < K) bp *= bn1;
            }
            TaylorJet e = qval * P;
            e *= Complex(1.0, 0.0) / (*rn)[static_cast<std::size_t>(n)];
            e *= jet_inv_linear(Complex(1.0, 0.0), z0, m);
            e *= (Complex(1.0, 0.0) + lam);

            // sum_k B_{n,k}(z) t~_{n,k} = P(z) sum_k b_{l_n}(z)^k t~_{n,k}
            TaylorJet poly = jet_const((*ts)[static_cast<std::size_t>(n)](0), z0, m);
            TaylorJet bk = bn1;
            for (int k = 1; k < K; ++k) {
                poly += (*ts)[static_cast<std::size_t>(n)](k) * bk;
                if (k + 1 < K) bk *= bn1;
            }
            acc += e * P * poly;
        }
        return acc;
    });

    const double residual = conditions_residual(p, f);
    FcInterpolant out{std::move(f), residual};
    if (!(out.max_residual <= kResidualTolerance)) {
        throw std::runtime_error("fc_construct: interpolation residual " +
                                 std::to_string(out.max_residual) + " exceeds 1e-9");
    }
    return out;
}

JOperator j_operator(const InterpolationProblem& p) {
    const Eigen::MatrixXcd gamma = gram_of(basis_of(p));
    JOperator out;
    out.matrix = j_block_matrix(p);
    out.norm = std::sqrt(std::max(0.0, largest_eigenvalue(out.matrix * gamma * out.matrix.adjoint())));
    return out;
}

double worst_case_min_norm(const InterpolationProblem& p) {
    const GramFactorization f = factor_gram(p);
    const Eigen::Index total = p.total_conditions();
    Eigen::MatrixXcd Ginv = Eigen::MatrixXcd::Zero(total, total);
    Eigen::Index pos = 0;
    for (int n = 0; n < p.count(); ++n) {
        const int K = p.multiplicities[n];
        Ginv.block(pos, pos, K, K) = p.weights[n].inverse();
        pos += K;
    }
    return std::sqrt(
        std::max(0.0, largest_eigenvalue(Ginv.adjoint() * f.gamma_inverse() * Ginv)));
}

AugmentedInterpolant augment_finite(const InterpolationProblem& base, const H2Function& base_solution,
                                    const std::vector<ExtraPoint>& extras) {
    // Current Blaschke multiplier: base nodes then previously handled extras.
    auto bnodes = std::make_shared<std::vector<Complex>>(base.nodes);
    auto bmults = std::make_shared<std::vector<int>>(base.multiplicities);

    for (const auto& ex : extras) {
        if (!std::isfinite(ex.point.real()) || !std::isfinite(ex.point.imag()) ||
            ex.point.real() <= 0.0) {
            throw std::domain_error("augment_finite: extra point outside the open right half-plane");
        }
        if (ex.point == Complex(1.0, 0.0)) {
            throw std::domain_error("augment_finite: extra point collides with the mirror of -1");
        }
        if (ex.weights.empty() || ex.weights.size() != ex.targets.size()) {
            throw std::invalid_argument("augment_finite: weights/targets length mismatch");
        }
        for (const Complex a : ex.weights) {
            if (a == Complex(0.0, 0.0)) {
                throw std::invalid_argument("augment_finite: zero condition weight");
            }
        }
        for (const Complex node : base.nodes) {
            if (ex.point == node) {
                throw std::domain_error("augment_finite: extra point coincides with a base node");
            }
        }
        for (const auto& other : extras) {
            if (&other != &ex && other.point == ex.point) {
                throw std::invalid_argument("augment_finite: duplicate extra points");
            }
        }
    }

    struct Corrector {
        Complex p;
        int j;                        // power of (s - mu)
        Complex mu;
        std::vector<Complex> bnodes;  // Blaschke zeros at the time of insertion
        std::vector<int> bmults;
    };
    auto correctors = std::make_shared<std::vector<Corrector>>();

    auto current_jet = [base_solution, correctors](Complex z0, int m) {
        TaylorJet acc = base_solution.jet(z0, m);
        for (const auto& c : *correctors) {
            TaylorJet term = jet_blaschke_product(c.bnodes, c.bmults, -1, z0, m);
            const TaylorJet shift = TaylorJet::variable(z0, m) - jet_const(c.mu, z0, m);
            term *= shift.pow(c.j);
            term *= jet_inv_linear(Complex(1.0, 0.0), z0, m).pow(c.j + 1);
            term *= c.p;
            acc += term;
        }
        return acc;
    };

    AugmentedInterpolant out;
    std::vector<Complex> pcoefs;
    for (const auto& ex : extras) {
        const int r = static_cast<int>(ex.weights.size());
        const Complex mu = ex.point;
        const Complex bval = jet_blaschke_product(*bnodes, *bmults, -1, mu, 0).value();
        for (int j = 0; j < r; ++j) {
            const TaylorJet g = current_jet(mu, j);
            const Complex residual = ex.targets[static_cast<std::size_t>(j)] -
                                     ex.weights[static_cast<std::size_t>(j)] * g.derivative(j);
            const Complex slope = ex.weights[static_cast<std::size_t>(j)] * factorial(j) * bval /
                                  ipow(mu + Complex(1.0, 0.0), j + 1);
            const Complex pj = residual / slope;
            pcoefs.push_back(pj);
            if (pj != Complex(0.0, 0.0)) {
                correctors->push_back({pj, j, mu, *bnodes, *bmults});
            }
        }
        bnodes->push_back(mu);
        bmults->push_back(r);
    }

    out.g = make_function(current_jet);
    out.corrector_coefficients = std::move(pcoefs);

    // Verify base and extra conditions.
    double worst = base.has_targets() ? conditions_residual(base, out.g) : 0.0;
    for (const auto& ex : extras) {
        const int r = static_cast<int>(ex.weights.size());
        const TaylorJet g = out.g.jet(ex.point, r - 1);
        for (int j = 0; j < r; ++j) {
            worst = std::max(worst, std::abs(ex.weights[static_cast<std::size_t>(j)] * g.derivative(j) -
                                             ex.targets[static_cast<std::size_t>(j)]));
        }
    }
    out.max_residual = worst;
    if (!(worst <= kResidualTolerance)) {
        throw std::runtime_error("augment_finite: residual " + std::to_string(worst) +
                                 " exceeds 1e-9");
    }
    return out;
}

}  // namespace h2cert::interpolation
