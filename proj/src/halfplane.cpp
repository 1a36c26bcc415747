#include "h2cert/halfplane.hpp"

#include <cmath>
#include <stdexcept>

namespace h2cert::halfplane {

namespace {

bool finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

void require_same_open_halfplane(Complex a, Complex b) {
    if (!finite(a) || !finite(b)) {
        throw std::domain_error("pseudo_metric: non-finite point");
    }
    if (a.real() == 0.0 || b.real() == 0.0) {
        throw std::domain_error("pseudo_metric: point on the imaginary axis");
    }
    if ((a.real() > 0.0) != (b.real() > 0.0)) {
        throw std::domain_error("pseudo_metric: points in opposite half-planes");
    }
}

}  // namespace

HalfPlanePoint::HalfPlanePoint(Complex z) : value(z) {
    if (!finite(z) || z.real() <= 0.0) {
        throw std::domain_error("HalfPlanePoint: Re z must be strictly positive and finite");
    }
}

HalfPlanePoint HalfPlanePoint::mirror_of_left(Complex lambda) {
    if (!finite(lambda) || lambda.real() >= 0.0) {
        throw std::domain_error("HalfPlanePoint::mirror_of_left: Re lambda must be negative");
    }
    return HalfPlanePoint(-lambda);
}

double pseudo_metric(Complex a, Complex b) {
    require_same_open_halfplane(a, b);
    if (a == b) return 0.0;
    return std::abs((a - b) / (a + std::conj(b)));
}

double hyper_metric(Complex a, Complex b) {
    return 2.0 * std::atanh(pseudo_metric(a, b));
}

// ---------------------------------------------------------------------------
// TaylorJet
// ---------------------------------------------------------------------------

TaylorJet::TaylorJet(Complex center, std::vector<Complex> coefficients)
    : center_(center), coeff_(std::move(coefficients)) {
    if (coeff_.empty()) {
        throw std::invalid_argument("TaylorJet: need at least the constant coefficient");
    }
}

TaylorJet TaylorJet::constant(Complex value, Complex center, int order) {
    std::vector<Complex> c(static_cast<std::size_t>(order) + 1, Complex(0.0, 0.0));
    c[0] = value;
    return TaylorJet(center, std::move(c));
}

TaylorJet TaylorJet::variable(Complex center, int order) {
    std::vector<Complex> c(static_cast<std::size_t>(order) + 1, Complex(0.0, 0.0));
    c[0] = center;
    if (order >= 1) c[1] = Complex(1.0, 0.0);
    return TaylorJet(center, std::move(c));
}

Complex TaylorJet::coefficient(int j) const {
    if (j < 0 || j > order()) {
        throw std::out_of_range("TaylorJet::coefficient: index out of range");
    }
    return coeff_[static_cast<std::size_t>(j)];
}

Complex TaylorJet::derivative(int j) const {
    return coefficient(j) * factorial(j);
}

namespace {
void require_compatible(const TaylorJet& a, const TaylorJet& b) {
    if (a.center() != b.center() || a.order() != b.order()) {
        throw std::invalid_argument("TaylorJet: mixed centers or orders in arithmetic");
    }
}
}  // namespace

TaylorJet& TaylorJet::operator+=(const TaylorJet& rhs) {
    require_compatible(*this, rhs);
    for (std::size_t j = 0; j < coeff_.size(); ++j) coeff_[j] += rhs.coeff_[j];
    return *this;
}

TaylorJet& TaylorJet::operator-=(const TaylorJet& rhs) {
    require_compatible(*this, rhs);
    for (std::size_t j = 0; j < coeff_.size(); ++j) coeff_[j] -= rhs.coeff_[j];
    return *this;
}

TaylorJet& TaylorJet::operator*=(const TaylorJet& rhs) {
    require_compatible(*this, rhs);
    const std::size_t n = coeff_.size();
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        if (coeff_[i] == Complex(0.0, 0.0)) continue;
        for (std::size_t j = 0; j + i < n; ++j) {
            out[i + j] += coeff_[i] * rhs.coeff_[j];
        }
    }
    coeff_ = std::move(out);
    return *this;
}

TaylorJet TaylorJet::reciprocal() const {
    if (coeff_[0] == Complex(0.0, 0.0)) {
        throw std::domain_error("TaylorJet::reciprocal: zero constant term");
    }
    const std::size_t n = coeff_.size();
    std::vector<Complex> out(n, Complex(0.0, 0.0));
    out[0] = 1.0 / coeff_[0];
    for (std::size_t j = 1; j < n; ++j) {
        Complex acc(0.0, 0.0);
        for (std::size_t i = 1; i <= j; ++i) acc += coeff_[i] * out[j - i];
        out[j] = -acc / coeff_[0];
    }
    return TaylorJet(center_, std::move(out));
}

TaylorJet& TaylorJet::operator/=(const TaylorJet& rhs) {
    require_compatible(*this, rhs);
    return *this *= rhs.reciprocal();
}

TaylorJet TaylorJet::operator-() const {
    TaylorJet out = *this;
    for (auto& c : out.coeff_) c = -c;
    return out;
}

TaylorJet& TaylorJet::operator*=(Complex s) {
    for (auto& c : coeff_) c *= s;
    return *this;
}

TaylorJet TaylorJet::pow(int k) const {
    if (k < 0) throw std::invalid_argument("TaylorJet::pow: negative exponent");
    TaylorJet acc = TaylorJet::constant(Complex(1.0, 0.0), center_, order());
    for (int i = 0; i < k; ++i) acc *= *this;
    return acc;
}

TaylorJet TaylorJet::compose_affine(Complex a, Complex b) const {
    if (a == Complex(0.0, 0.0)) {
        throw std::invalid_argument("TaylorJet::compose_affine: degenerate map");
    }
    std::vector<Complex> out(coeff_.size());
    Complex an(1.0, 0.0);
    for (std::size_t j = 0; j < coeff_.size(); ++j) {
        out[j] = coeff_[j] * an;
        an *= a;
    }
    return TaylorJet((center_ - b) / a, std::move(out));
}

TaylorJet blaschke_jet(const HalfPlanePoint& lambda, int k, const HalfPlanePoint& z0, int m) {
    if (k < 0 || m < 0) {
        throw std::invalid_argument("blaschke_jet: k and m must be nonnegative");
    }
    if (k == 0) return TaylorJet::constant(Complex(1.0, 0.0), z0.value, m);
    const TaylorJet num = TaylorJet::variable(z0.value, m) -
                          TaylorJet::constant(lambda.value, z0.value, m);
    const TaylorJet den = TaylorJet::variable(z0.value, m) +
                          TaylorJet::constant(std::conj(lambda.value), z0.value, m);
    return (num / den).pow(k);
}

// ---------------------------------------------------------------------------
// Kernel calculus
// ---------------------------------------------------------------------------

KernelIndex::KernelIndex(HalfPlanePoint n, int j) : node(n), order(j) {
    if (j < 0) throw std::invalid_argument("KernelIndex: order must be nonnegative");
}

Complex representer_eval(const KernelIndex& idx, Complex z) {
    const Complex den = z + std::conj(idx.node.value);
    if (den == Complex(0.0, 0.0)) {
        throw std::domain_error("representer_eval: evaluation at the kernel pole");
    }
    const double sign = (idx.order % 2 == 0) ? 1.0 : -1.0;
    return sign * factorial(idx.order) / ipow(den, idx.order + 1);
}

Complex kernel_gram(const KernelIndex& a, const KernelIndex& b) {
    const int i = a.order;
    const int j = b.order;
    const Complex den = a.node.value + std::conj(b.node.value);
    const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
    return sign * factorial(i + j) / ipow(den, i + j + 1);
}

Complex mw_eval(const HalfPlanePoint& lambda, int j, Complex z) {
    if (j < 0) throw std::invalid_argument("mw_eval: order must be nonnegative");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || z.real() < 0.0) {
        throw std::domain_error("mw_eval: z must lie in the closed right half-plane");
    }
    const Complex l = lambda.value;
    return std::sqrt(2.0 * l.real()) * ipow(blaschke(l, z), j) / (z + std::conj(l));
}

double factorial(int n) {
    if (n < 0 || n > 170) throw std::invalid_argument("factorial: out of range");
    static const std::vector<double> table = [] {
        std::vector<double> t(171);
        t[0] = 1.0;
        for (int i = 1; i <= 170; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table[static_cast<std::size_t>(n)];
}

Complex ipow(Complex z, int n) {
    Complex r(1.0, 0.0);
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

}  // namespace h2cert::halfplane
