#pragma once

#include "utm/complex_util.hpp"

#include <functional>

namespace utm {

/// \int f over the straight segment z0 -> z1, composite 16-point
/// Gauss-Legendre with `panels` equal panels.
cplx integrate_segment(const std::function<cplx(cplx)>& f, cplx z0, cplx z1, int panels);

/// Panel count heuristic for an oscillatory phase whose local wavelength
/// along the segment is lambda(z); at least `min_panels`.
int panels_for(double length, double min_wavelength, int min_panels = 4);

/// (1/(2 pi i)) * contour integral of f over the circle |z - c| = r,
/// 64-node trapezoid (spectrally accurate on circles).
cplx circle_mean(const std::function<cplx(cplx)>& f, cplx c, double r, int nodes = 64);

/// Adaptive Gauss-Kronrod (G7,K15) on a real interval for complex values.
/// Splits until |K - G| <= tol * (1 + |I|) per panel or depth exhausts.
cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-10,
                  int max_depth = 18);

} // namespace utm
