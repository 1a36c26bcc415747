// Finitely-atomic positive measures on the right half-plane, exact Carleson
// constants over Carleson squares, kernel-testing diagnostics, and the
// square-transfer bound used by the perturbation arguments.
//
// Square convention (the literature never pins one down; ours is recorded in
// every report): Q(c,h) = { x+iy : 0 < x <= h, |y-c| <= h/2 }, edges closed.
// Closed edges make the supremum over squares attained on the candidate grid.

#pragma once

#include <complex>
#include <vector>

namespace h2cert::carleson {

using Complex = std::complex<double>;

struct AtomicMeasure {
    struct Atom {
        Complex location;  // open right half-plane
        double weight;     // >= 0
    };

    // Validates locations/weights, merges duplicate locations by weight
    // addition, and canonicalizes the atom order (lexicographic by
    // (Re, Im)) so summation order is deterministic.
    static AtomicMeasure from_atoms(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    std::size_t size() const { return atoms_.size(); }
    double total_mass() const;

    // Same atoms, weights multiplied by t >= 0.
    AtomicMeasure scaled(double t) const;

private:
    std::vector<Atom> atoms_;
};

struct CarlesonSquare {
    double center;  // imaginary-axis coordinate c
    double size;    // h > 0

    CarlesonSquare(double c, double h);
};

// nu(Q): sum of weights of atoms with 0 < Re <= h and |Im - c| <= h/2.
double square_mass(const AtomicMeasure& m, const CarlesonSquare& q);

// Exact sup over all Carleson squares of nu(Q)/h for a finite atomic measure.
//
// The supremum is attained at a square whose size is either an atom real part
// or a pairwise vertical span, with the imaginary window aligned to an atom
// ordinate (shrink an optimal square until a constraint is tight). Direct
// enumeration of that candidate grid is O(n^3); the implementation sweeps the
// grid with a Fenwick tree in O(n^2 log n), parallelized by partitioning the
// candidate set with a deterministic max-reduction. Empty measure -> 0.
double carleson_constant(const AtomicMeasure& m);

// Necessary-side diagnostic: sup over test points mu (the atom locations plus
// their pairwise midpoints) of sum_n w_n Re(mu)/|lambda_n + conj(mu)|^2.
// A lower bound on an absolute multiple of the true embedding constant.
double kernel_test_constant(const AtomicMeasure& m);

// Smallest alpha such that p(lambda, mu) <= R pins
//   (1+alpha)^{-1} |Re lambda| <= |Re mu| <= (1+alpha) |Re lambda|  and
//   |Im mu - Im lambda| <= alpha |Re lambda|,
// together with the induced square-size transfer factor 1 + 2 alpha (1+alpha).
// The pseudo-hyperbolic ball of radius R about -1 is the Euclidean disc with
// center -(1+R^2)/(1-R^2) and radius 2R/(1-R^2), so alpha = 2R/(1-R).
struct TransferBound {
    double alpha;
    double factor;
};
TransferBound transfer_size_bound(double R);

}  // namespace h2cert::carleson
