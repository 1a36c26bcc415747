// Geometry of the half-planes (Blaschke factors, pseudo-hyperbolic and
// hyperbolic metrics) and the reproducing-kernel calculus of H^2 on the
// right half-plane.
//
// Conventions (fixed for the whole library):
//   inner product   <f,g> = (1/2pi) int_R f(iy) conj(g(iy)) dy
//   kernel          k_l(z) = 1/(z + conj(l)),   <f, k_l> = f(l)
//   Blaschke factor b_l(z) = (z - l)/(z + conj(l))
// Eigenvalue data living in the left half-plane is mirrored (z -> -z) at
// module boundaries; everything here works on the right half-plane.

#pragma once

#include <complex>
#include <vector>

namespace h2cert::halfplane {

using Complex = std::complex<double>;

// Point of the open right half-plane; construction validates Re > 0 and
// finiteness.
struct HalfPlanePoint {
    Complex value;

    explicit HalfPlanePoint(Complex z);

    // Mirror z -> -z of a left half-plane eigenvalue.
    static HalfPlanePoint mirror_of_left(Complex lambda);
};

// p(a,b) = |(a-b)/(a+conj(b))|. Both points must lie in the same open
// half-plane (both Re > 0 or both Re < 0).
double pseudo_metric(Complex a, Complex b);

// d(a,b) = 2 atanh p(a,b) = log((1+p)/(1-p)).
double hyper_metric(Complex a, Complex b);

// Blaschke factor value (no domain checks; callers validate).
inline Complex blaschke(Complex lambda, Complex z) {
    return (z - lambda) / (z + std::conj(lambda));
}

// ---------------------------------------------------------------------------
// Truncated Taylor series ("jet") arithmetic.
//
// coeff[j] = f^(j)(center)/j!. All derivative evaluations in the library go
// through jets; no numerical differentiation anywhere.
// ---------------------------------------------------------------------------

class TaylorJet {
public:
    TaylorJet(Complex center, std::vector<Complex> coefficients);

    static TaylorJet constant(Complex value, Complex center, int order);
    static TaylorJet variable(Complex center, int order);  // jet of z -> z

    Complex center() const { return center_; }
    int order() const { return static_cast<int>(coeff_.size()) - 1; }
    Complex value() const { return coeff_[0]; }
    Complex coefficient(int j) const;
    Complex derivative(int j) const;  // coeff[j] * j!
    const std::vector<Complex>& coefficients() const { return coeff_; }

    TaylorJet& operator+=(const TaylorJet& rhs);
    TaylorJet& operator-=(const TaylorJet& rhs);
    TaylorJet& operator*=(const TaylorJet& rhs);
    TaylorJet& operator/=(const TaylorJet& rhs);

    friend TaylorJet operator+(TaylorJet a, const TaylorJet& b) { return a += b; }
    friend TaylorJet operator-(TaylorJet a, const TaylorJet& b) { return a -= b; }
    friend TaylorJet operator*(TaylorJet a, const TaylorJet& b) { return a *= b; }
    friend TaylorJet operator/(TaylorJet a, const TaylorJet& b) { return a /= b; }

    TaylorJet operator-() const;
    TaylorJet& operator*=(Complex s);
    friend TaylorJet operator*(TaylorJet a, Complex s) { return a *= s; }
    friend TaylorJet operator*(Complex s, TaylorJet a) { return a *= s; }

    TaylorJet pow(int k) const;        // k >= 0
    TaylorJet reciprocal() const;      // requires nonzero constant term

    // Jet of w -> f(a*w + b) about the preimage of the center (a != 0).
    TaylorJet compose_affine(Complex a, Complex b) const;

private:
    Complex center_;
    std::vector<Complex> coeff_;
};

// Jet of b_lambda^k at z0, exact truncated-series arithmetic.
// Preconditions: lambda, z0 in the open right half-plane, k >= 0, m >= 0.
TaylorJet blaschke_jet(const HalfPlanePoint& lambda, int k, const HalfPlanePoint& z0, int m);

// ---------------------------------------------------------------------------
// Derivative-evaluation functionals f -> f^(j)(node) and their Gram matrix.
// ---------------------------------------------------------------------------

struct KernelIndex {
    HalfPlanePoint node;
    int order;  // >= 0

    KernelIndex(HalfPlanePoint n, int j);
};

// Representer of f -> f^(order)(node):  g(z) = (-1)^j j! / (z+conj(node))^(j+1),
// evaluated at z (any point with z + conj(node) != 0, boundary included).
Complex representer_eval(const KernelIndex& idx, Complex z);

// <representer(b), representer(a)> = d^i/d a^i d^j/d conj(b)^j [ 1/(a+conj(b)) ]
//                                  = (-1)^(i+j) (i+j)! / (a+conj(b))^(i+j+1)
// with i = a.order, j = b.order. Hermitian: gram(a,b) = conj(gram(b,a)).
Complex kernel_gram(const KernelIndex& a, const KernelIndex& b);

// Malmquist-Walsh function of the model space H^2 - b_l^K H^2, normalized to
// unit norm under the library inner product:
//   e_{l,j}(z) = sqrt(2 Re l) b_l(z)^j / (z + conj(l)).
// z may lie on the closed right half-plane (boundary evaluation is used by
// quadrature checks).
Complex mw_eval(const HalfPlanePoint& lambda, int j, Complex z);

// factorial as double, n <= 170
double factorial(int n);

// z^n for small integer n by repeated multiplication (n >= 0)
Complex ipow(Complex z, int n);

}  // namespace h2cert::halfplane
