// Test-side quadrature oracle for the H^2 inner product
//   <f,g> = (1/2pi) int_R f(iy) conj(g(iy)) dy.
// Adaptive Simpson with symmetric truncation doubling until the tail estimate
// (Y * |integrand(+-Y)|, valid for the ~1/y^2 decay of all integrands used in
// the tests) falls below 1e-12 of the accumulated scale. Independent of every
// closed form it is used to check.

#pragma once

#include <cmath>
#include <complex>
#include <functional>

namespace testsupport {

using Complex = std::complex<double>;
using AnalyticFn = std::function<Complex(Complex)>;

namespace detail {

using Integrand = std::function<Complex(double)>;

inline Complex simpson_rec(const Integrand& f, double a, double b, Complex fa, Complex fm,
                           Complex fb, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const Complex flm = f(lm);
    const Complex frm = f(rm);
    const Complex whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const Complex left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Complex right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Complex two = left + right;
    const double err = std::abs(two - whole);
    // roundoff floor: the Simpson defect cannot be resolved below the
    // rounding noise of the local function values, stop refining there
    const double noise = 1e-15 * (b - a) *
                         (std::abs(fa) + 4.0 * (std::abs(flm) + std::abs(frm)) +
                          2.0 * std::abs(fm) + std::abs(fb)) / 6.0;
    if (depth <= 0 || err < 15.0 * tol || err < noise) {
        return two + (two - whole) / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

inline Complex integrate(const Integrand& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    return simpson_rec(f, a, b, f(a), f(m), f(b), tol, 28);
}

}  // namespace detail

// <f, g> under the library convention; scale_hint sets the magnitude against
// which the 1e-12 tail threshold is measured (wanted for near-orthogonal
// pairs whose inner product is ~0).
inline Complex axis_inner(const AnalyticFn& f, const AnalyticFn& g, double scale_hint = 1.0) {
    const detail::Integrand integrand = [&](double y) {
        const Complex iy(0.0, y);
        return f(iy) * std::conj(g(iy));
    };
    const double tol = 1e-13 * std::max(1.0, scale_hint);
    double Y = 16.0;
    Complex acc = detail::integrate(integrand, -Y, Y, tol);
    while (Y < 1e14) {
        const double tail = Y * (std::abs(integrand(Y)) + std::abs(integrand(-Y)));
        if (tail < 1e-12 * std::max(std::abs(acc), scale_hint)) break;
        acc += detail::integrate(integrand, Y, 2.0 * Y, tol) +
               detail::integrate(integrand, -2.0 * Y, -Y, tol);
        Y *= 2.0;
    }
    return acc / (2.0 * M_PI);
}

inline double axis_norm(const AnalyticFn& f, double scale_hint = 1.0) {
    return std::sqrt(std::max(0.0, axis_inner(f, f, scale_hint).real()));
}

}  // namespace testsupport
