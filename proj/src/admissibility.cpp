#include "h2cert/admissibility.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <vector>

#include "h2cert/threads.hpp"

namespace h2cert::admissibility {

namespace {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) {
        throw std::invalid_argument("GridSpec: need 0 < re_min < re_max and per_decade >= 1");
    }
    std::vector<double> xs;
    const double k_lo = std::ceil(std::log10(lo) * per_decade - 1e-9);
    const double k_hi = std::floor(std::log10(hi) * per_decade + 1e-9);
    for (double k = k_lo; k <= k_hi; k += 1.0) {
        xs.push_back(std::pow(10.0, k / per_decade));
    }
    if (xs.empty()) xs.push_back(lo);
    return xs;
}

std::vector<double> im_grid(const ResolventModel& model, const GridSpec& g) {
    double span = 0.0;
    for (int n = 0; n < model.modes(); ++n) {
        span = std::max(span, std::abs(model.eigenvalues(n).imag()));
    }
    span *= g.im_span_factor;
    if (g.im_samples < 1) throw std::invalid_argument("GridSpec: im_samples >= 1");
    if (span == 0.0 || g.im_samples == 1) return {0.0};
    std::vector<double> ys(static_cast<std::size_t>(g.im_samples));
    for (int i = 0; i < g.im_samples; ++i) {
        ys[static_cast<std::size_t>(i)] = -span + 2.0 * span * i / (g.im_samples - 1);
    }
    return ys;
}

double spectral_abscissa(const ResolventModel& model) {
    double a = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < model.modes(); ++n) a = std::max(a, model.eigenvalues(n).real());
    return a;
}

// Largest singular value of C * diag(1/(s - l_n)).
double scaled_row_norm(const Eigen::MatrixXcd& C, const Eigen::VectorXcd& lambda, Complex s) {
    const Eigen::Index r = C.rows();
    const Eigen::Index N = C.cols();
    if (r == 1) {
        double sum = 0.0;
        for (Eigen::Index n = 0; n < N; ++n) sum += std::norm(C(0, n) / (s - lambda(n)));
        return std::sqrt(sum);
    }
    Eigen::MatrixXcd M(r, N);
    for (Eigen::Index n = 0; n < N; ++n) M.col(n) = C.col(n) / (s - lambda(n));
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(M).singularValues()(0);
}

struct GridMax {
    bool has = false;
    double value = 0.0;
    Complex at{0.0, 0.0};
    void consider(double v, Complex s) {
        const bool tie_break = v == value && std::make_pair(s.real(), s.imag()) <
                                                 std::make_pair(at.real(), at.imag());
        if (!has || v > value || tie_break) {
            has = true;
            value = v;
            at = s;
        }
    }
};

// Deterministic max over a grid of s-samples, chunked across workers.
template <typename Fn>
GridMax grid_supremum(const std::vector<double>& res, const std::vector<double>& ims, Fn&& f) {
    const std::size_t total = res.size() * ims.size();
    const int workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), total);
    auto eval_range = [&](std::size_t lo, std::size_t hi) {
        GridMax best;
        for (std::size_t t = lo; t < hi; ++t) {
            const double x = res[t / ims.size()];
            const double y = ims[t % ims.size()];
            const Complex s(x, y);
            best.consider(f(s), s);
        }
        return best;
    };
    if (workers <= 1) return eval_range(0, total);
    std::vector<std::future<GridMax>> futs;
    const std::size_t chunk = (total + workers - 1) / workers;
    for (int t = 0; t < workers; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, eval_range, lo, hi));
    }
    GridMax best;
    for (auto& fu : futs) {
        const GridMax g = fu.get();
        best.consider(g.value, g.at);
    }
    return best;
}

}  // namespace

ResolventModel ResolventModel::create(Eigen::VectorXcd eigenvalues, Eigen::MatrixXcd observation) {
    if (eigenvalues.size() == 0) throw std::invalid_argument("ResolventModel: empty spectrum");
    if (observation.cols() != eigenvalues.size() || observation.rows() < 1) {
        throw std::invalid_argument("ResolventModel: observation must be r x N with r >= 1");
    }
    for (Eigen::Index n = 0; n < eigenvalues.size(); ++n) {
        const Complex l = eigenvalues(n);
        if (!std::isfinite(l.real()) || !std::isfinite(l.imag()) || l.real() >= 0.0) {
            throw std::domain_error("ResolventModel: eigenvalues must satisfy Re < 0");
        }
    }
    ResolventModel m;
    m.eigenvalues = std::move(eigenvalues);
    m.observation = std::move(observation);
    return m;
}

ResolventModel ResolventModel::with_diagonal_delta(Eigen::VectorXcd delta) const {
    if (delta.size() != eigenvalues.size()) {
        throw std::invalid_argument("ResolventModel: delta length mismatch");
    }
    ResolventModel m = *this;
    m.delta_diag = std::move(delta);
    m.delta_dense.reset();
    return m;
}

ResolventModel ResolventModel::with_dense_delta(Eigen::MatrixXcd delta) const {
    if (delta.rows() != eigenvalues.size() || delta.cols() != eigenvalues.size()) {
        throw std::invalid_argument("ResolventModel: dense delta shape mismatch");
    }
    ResolventModel m = *this;
    m.delta_dense = std::move(delta);
    m.delta_diag.reset();
    return m;
}

bool ResolventModel::delta_dissipative() const {
    if (delta_diag) {
        for (Eigen::Index n = 0; n < delta_diag->size(); ++n) {
            if ((*delta_diag)(n).real() > 0.0) return false;
        }
        return true;
    }
    if (delta_dense) {
        // Re <Dx,x> <= 0 iff the Hermitian part is negative semidefinite.
        const Eigen::MatrixXcd H = (*delta_dense + delta_dense->adjoint()) / 2.0;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        return es.eigenvalues().maxCoeff() <= 1e-12;
    }
    return true;
}

ResolventModel ResolventModel::perturbed() const {
    if (!delta_diag) {
        throw std::invalid_argument("ResolventModel::perturbed: needs a diagonal perturbation");
    }
    return ResolventModel::create(eigenvalues + *delta_diag, observation);
}

double resolvent_norm(const ResolventModel& model, Complex s) {
    for (Eigen::Index n = 0; n < model.eigenvalues.size(); ++n) {
        if (s == model.eigenvalues(n)) {
            throw std::domain_error("resolvent_norm: s hits the spectrum");
        }
    }
    return scaled_row_norm(model.observation, model.eigenvalues, s);
}

WeissFit weiss_fit(const ResolventModel& model, double w, const GridSpec& grid) {
    if (!(w > spectral_abscissa(model))) {
        throw std::invalid_argument("weiss_fit: w must exceed the spectral abscissa");
    }
    auto fit_on = [&](int per_decade, int im_samples) {
        GridSpec g = grid;
        g.per_decade = per_decade;
        g.im_samples = im_samples;
        const std::vector<double> xs = log_grid(g.re_min, g.re_max, g.per_decade);
        const std::vector<double> ys = im_grid(model, g);
        std::vector<double> res(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) res[i] = w + xs[i];
        return grid_supremum(res, ys, [&](Complex s) {
            return resolvent_norm(model, s) * std::sqrt(s.real() - w);
        });
    };
    const GridMax base = fit_on(grid.per_decade, grid.im_samples);
    const GridMax fine = fit_on(grid.per_decade * 2,
                                grid.im_samples > 1 ? grid.im_samples * 2 - 1 : 1);
    WeissFit out;
    out.M = std::max(base.value, fine.value);
    out.attained_s = fine.value >= base.value ? fine.at : base.at;
    out.sup_defect = base.value > 0.0 ? (fine.value - base.value) / base.value : 0.0;
    return out;
}

double admissibility_gram(const ResolventModel& model) {
    const Eigen::Index N = model.eigenvalues.size();
    Eigen::MatrixXcd Q(N, N);
    for (Eigen::Index n = 0; n < N; ++n) {
        for (Eigen::Index m = 0; m < N; ++m) {
            const Complex cc = (model.observation.col(n).adjoint() * model.observation.col(m))(0);
            Q(n, m) = std::conj(cc) / (-model.eigenvalues(n) - std::conj(model.eigenvalues(m)));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((Q + Q.adjoint()) / 2.0);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    const double scale = std::max(1.0, lmax);
    if (lmin < -1e-10 * scale) {
        throw std::runtime_error("admissibility_gram: Q lost positive semidefiniteness");
    }
    return std::max(0.0, lmax);
}

DeltaGap delta_gap(const ResolventModel& model, double w0, const GridSpec& grid) {
    DeltaGap out;
    if (!model.has_delta()) return out;
    if (!(w0 > spectral_abscissa(model))) {
        throw std::invalid_argument("delta_gap: w0 must exceed the spectral abscissa");
    }
    const std::vector<double> xs = log_grid(grid.re_min, grid.re_max, grid.per_decade);
    const std::vector<double> ys = im_grid(model, grid);
    std::vector<double> res(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) res[i] = w0 + xs[i];

    if (model.delta_diag) {
        const Eigen::VectorXcd& d = *model.delta_diag;
        out.grid_sup = grid_supremum(res, ys, [&](Complex s) {
                           double m = 0.0;
                           for (Eigen::Index n = 0; n < d.size(); ++n) {
                               m = std::max(m, std::abs(d(n)) / std::abs(s - model.eigenvalues(n)));
                           }
                           return m;
                       }).value;
        double analytic = 0.0;
        for (Eigen::Index n = 0; n < d.size(); ++n) {
            analytic = std::max(analytic, std::abs(d(n)) / (w0 - model.eigenvalues(n).real()));
        }
        out.analytic_sup = analytic;
        out.value = std::max(out.grid_sup, analytic);
    } else {
        const Eigen::MatrixXcd& D = *model.delta_dense;
        out.grid_sup = grid_supremum(res, ys, [&](Complex s) {
                           Eigen::MatrixXcd M = D;
                           for (Eigen::Index n = 0; n < M.cols(); ++n) {
                               M.col(n) /= (s - model.eigenvalues(n));
                           }
                           return Eigen::JacobiSVD<Eigen::MatrixXcd>(M).singularValues()(0);
                       }).value;
        out.value = out.grid_sup;
    }
    return out;
}

std::pair<double, double> abound_from_resolvent(double R, Complex s) {
    if (!(R >= 0.0)) throw std::domain_error("abound_from_resolvent: R must be nonnegative");
    return {R, R * std::abs(s)};
}

PerturbedBounds perturbed_bounds(double M, double w, double rho) {
    (void)w;  // echoed by callers; the transfer factors are uniform in Re s > w
    if (!(M >= 0.0) || !(rho >= 0.0)) {
        throw std::domain_error("perturbed_bounds: M and rho must be nonnegative");
    }
    if (rho >= 1.0) {
        throw std::domain_error("perturbed_bounds: forward bound needs rho < 1, got " +
                                std::to_string(rho));
    }
    return PerturbedBounds{M / (1.0 - rho), 1.0 + rho};
}

double growth_bound(double E_norm, double t) {
    if (!(E_norm >= 0.0) || !(t >= 0.0)) {
        throw std::domain_error("growth_bound: need E_norm >= 0 and t >= 0");
    }
    return std::exp(E_norm * t);
}

double semigroup_norm(const Eigen::MatrixXcd& generator, double t) {
    const Eigen::MatrixXcd e = (generator * t).exp();
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(e).singularValues()(0);
}

double analyticity_constant(const ResolventModel& model, const GridSpec& grid) {
    const std::vector<double> xs = log_grid(grid.re_min, grid.re_max, grid.per_decade);
    const std::vector<double> ys = im_grid(model, grid);
    return grid_supremum(xs, ys, [&](Complex s) {
               double inv_dist = 0.0;
               for (Eigen::Index n = 0; n < model.eigenvalues.size(); ++n) {
                   inv_dist = std::max(inv_dist, 1.0 / std::abs(s - model.eigenvalues(n)));
               }
               return std::abs(s) * inv_dist;
           }).value;
}

}  // namespace h2cert::admissibility
