#pragma once

#include "utm/charmat.hpp"

#include <memory>
#include <optional>

namespace utm {

/// Open arc (lo, lo+width) of directions, angles in radians.
struct Arc {
    double lo = 0.0;
    double hi = 0.0;
    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
};

/// Angular decomposition induced by the direction coefficient:
/// D = {Re(a rho^n) < 0} decays the time exponential, E is the interior
/// of its complement.
struct SectorSet {
    int n = 0;
    cplx a = 0.0;
    std::vector<Arc> D;       // n open arcs, anticlockwise from positive real axis
    std::vector<Arc> E;       // complementary open arcs
    std::vector<Arc> Dplus;   // D intersected with the upper half plane
    std::vector<Arc> Dminus;  // D intersected with the lower half plane
    std::vector<Arc> Eplus;   // E intersected with the upper half plane
    std::vector<Arc> Eminus;  // E intersected with the lower half plane
};

SectorSet sectors(int n, cplx a);

enum class Wellposedness { WellPosed, IllPosed, Indeterminate };

const char* to_string(Wellposedness s);

struct FailingTerm {
    int j = 0;             // 1..2n index of the eta numerator
    ExpCounts Ycounts = 0; // exponent set of the offending term
    DataAtom atom{};       // data atom (qT rotation or boundary datum)
    double exceed = 0.0;   // envelope excess over the determinant max
    double phi = 0.0;      // direction where the excess peaks
};

struct SectorReport {
    int p = 0;  // 1-based sector index
    Arc arc{};
    std::vector<ExpCounts> Ymax;      // determinant keys maximal at mid-arc
    bool strict = false;              // single dominant exponential across the arc
    double margin = 0.0;              // min gap to the runner-up envelope
    ExpCounts theoretical = 0;        // argmax exponent set over all subsets
    bool theoretical_present = false; // its exponential survives in Delta
    std::optional<FailingTerm> failing;
    bool borderline = false;
};

struct Verdict {
    Wellposedness status = Wellposedness::Indeterminate;
    std::vector<SectorReport> sectors;
    std::shared_ptr<Verdict> dual;  // verdict for a -> -a when requested
};

struct DecayOptions {
    int grid = 720;              // interior direction samples per sector
    double tol_margin = 1e-9;    // tie tolerance on envelope comparisons
    double tol_violation = 1e-7; // smallest excess treated as a definite blow-up
};

/// Theorem-1.1 style decision, operationalized structurally: in every
/// D-sector, every eta term (coefficient x exponential x data atom) must
/// stay below the determinant's maximal exponential envelope; envelope
/// ties are resolved by polynomial degree with the transform's 1/rho decay
/// credited to the tying term.
Verdict decay_check(const CramerSystem& cs, const SectorSet& ss,
                    const DecayOptions& opt = {});

/// Counting condition R <= m <= R + C for non-Robin conditions,
/// m = n/2 (n even), (n+1)/2 (n odd, a = i), (n-1)/2 (n odd, a = -i).
/// Throws spec_error when the conditions are of Robin type.
bool condition_51(const BCClassification& bc, int n, cplx a);

/// Robin-compatible variant: B2 - B1 <= m <= B2 + B3.
bool condition_robin(const BCClassification& bc, int n, cplx a);

/// Closed-form ill-posedness predicate for pseudo-periodic conditions of
/// order 2, 3, 4; empty when the matrix is not pseudo-periodic or the
/// order has no closed form. true = ill-posed.
std::optional<bool> pseudo_periodic_criterion(const ValidatedProblem& p);

/// Verdicts for (n,A,a) and (n,A,-a); the characteristic structure is
/// direction-independent up to scale, so one Cramer system serves both.
std::pair<Verdict, Verdict> duality_verdict(const ValidatedProblem& p,
                                            const DecayOptions& opt = {});

/// Argmax over all subsets of {0..n-1} of Im(e^{i phi} s_Y): include y
/// exactly when Im(e^{i phi} omega^y) > 0.
ExpCounts theoretical_max_mask(int n, double phi);

} // namespace utm
