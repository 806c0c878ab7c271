#pragma once

#include "utm/exppoly.hpp"

#include <optional>
#include <vector>

namespace utm {

/// Convex polygon of conjugated exponent sums of the determinant's
/// surviving terms; side directions carry the asymptotic zero geometry.
struct IndicatorDiagram {
    std::vector<cplx> points;  // conj(s_Y) over nonzero-coefficient keys, rotation-closed
    std::vector<cplx> hull;    // convex hull vertices, anticlockwise
    struct Side {
        cplx a, b;         // endpoints (hull order)
        cplx direction;    // unit zero-ray/strip direction = normalized side vector
        int colinear = 0;  // exponent points on the side segment
    };
    std::vector<Side> sides;
    bool degenerate = false;  // single point: determinant is a polynomial
};

struct RayDescriptor {
    double angle = 0.0;       // direction of the semi-strip / ray
    double half_width = 0.0;  // 0 for rays
    bool is_ray = false;
    double side_length = 0.0; // hull side length (zero density is proportional)
};

struct SpectrumPoint {
    cplx sigma;
    int multiplicity = 1;
    enum class Class { Plus, Minus, Real } cls = Class::Plus;
    bool flagged = false;  // multiplicity > 1 or refinement trouble
};

struct Spectrum {
    std::vector<SpectrumPoint> zeros;  // sorted by modulus then argument
    double epsilon = 1.0;              // min pairwise separation, capped at 1
    double search_radius = 0.0;
    std::vector<RayDescriptor> rays;
};

/// Monotone-chain convex hull, anticlockwise, of a complex point cloud.
std::vector<cplx> convex_hull(std::vector<cplx> pts);

IndicatorDiagram indicator_diagram(const ExpPolynomial& Delta);

/// One descriptor per hull side. Rays require odd order with exactly two
/// exponent points on the side (plus the counting condition for n >= 7,
/// passed in by the caller). Strip half-widths are reported at the given
/// radius from the coefficient magnitude balance.
std::vector<RayDescriptor> asymptotic_rays(const ExpPolynomial& Delta,
                                           const IndicatorDiagram& d, int n,
                                           bool counting_ok, double report_radius);

struct FindZeroOptions {
    double min_box = 1e-8;          // subdivision floor
    double newton_tol = 1e-10;      // residual target, relative to local scale
    int max_newton = 80;
    int threads = 0;                // 0: decide from UTM_THREADS / hardware
    double origin_exclusion = 1e-3; // rho = 0 is excluded by convention; the
                                    // determinant is pure roundoff inside this
                                    // radius when the origin zero has high order
};

/// All zeros of Delta with |sigma| <= R by adaptive winding-number boxes
/// plus damped Newton refinement; rho = 0 is excluded by convention.
Spectrum find_zeros(const ExpPolynomial& Delta, double R, const FindZeroOptions& opt = {});

/// Max over random samples of |Delta(rho) - (-1)^{n-1} Delta(omega rho)|
/// relative to 1 + |Delta(rho)|.
double verify_symmetry(const ExpPolynomial& Delta, int samples = 100, double radius = 3.0,
                       unsigned seed = 12345);

/// Winding number of Delta along the rectangle boundary [x0,x1]x[y0,y1].
int winding_number(const ExpPolynomial& Delta, double x0, double x1, double y0, double y1);

} // namespace utm
