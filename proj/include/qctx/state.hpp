#pragma once
// Diagonal qutrit spectra, linear entropy, and the six named state families
// (arcs) of the mixed-state contextuality curves.

#include <string>
#include <utility>

namespace qctx {

// Ordered spectrum of a diagonal qutrit density matrix. Construction enforces
// lambda1 >= lambda2 >= lambda3 >= 0 and unit trace to 1e-12; out-of-order
// input is rejected, never silently re-sorted, so family bugs surface early.
struct QutritSpectrum {
    double l1, l2, l3;
    QutritSpectrum(double a, double b, double c);
    double operator[](int i) const { return i == 0 ? l1 : (i == 1 ? l2 : l3); }
};

// S_l(rho) = (3/2)(1 - sum lambda_i^2); 0 for pure, 1 for maximally mixed.
double linear_entropy(const QutritSpectrum& rho);

enum class ArcId { AC, CD, AD, EF, FG, EG };

const char* arc_name(ArcId arc);
// Parses "ac", "CD", ... ; throws std::invalid_argument otherwise.
ArcId arc_from_name(const std::string& name);

// Entropy interval on which the arc's STATE family is defined.
std::pair<double, double> arc_domain(ArcId arc);

// The named spectrum at linear entropy s. Throws std::domain_error outside
// the family's interval (where the triple would lose positivity or order).
QutritSpectrum arc_state(ArcId arc, double s);

// Closed-form maximal contextuality along the arc. AC has no closed form and
// throws std::invalid_argument directing callers to the numerical optimizer.
// CD's formula is evaluable on all of [0,1] even though its state family
// exists only on [3/4,1].
double arc_cq(ArcId arc, double s);

// One-dimensional parametrization of all ordered spectra with linear entropy
// s: t=0 gives the lambda2=lambda3 extreme, t=1 the other boundary (lambda3=0
// for s <= 3/4, lambda1=lambda2 beyond). Interior t sweeps the arc between.
QutritSpectrum iso_entropy_family(double s, double t);

}  // namespace qctx
