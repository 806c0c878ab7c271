#include "utm/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace utm {

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1,1]
const double gl16_x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                          0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                          0.9445750230732326, 0.9894009349916499};
const double gl16_w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                          0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                          0.0622535239386479, 0.0271524594117541};

// Kronrod 15 / Gauss 7 on [-1,1]
const double k15_x[15] = {-0.9914553711208126, -0.9491079123427585, -0.8648644233597691,
                          -0.7415311855993945, -0.5860872354676911, -0.4058451513773972,
                          -0.2077849550078985, 0.0,                  0.2077849550078985,
                          0.4058451513773972,  0.5860872354676911,  0.7415311855993945,
                          0.8648644233597691,  0.9491079123427585,  0.9914553711208126};
const double k15_w[15] = {0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
                          0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
                          0.2044329400752989, 0.2094821410847278, 0.2044329400752989,
                          0.1903505780647854, 0.1690047266392679, 0.1406532597155259,
                          0.1047900103222502, 0.0630920926299786, 0.0229353220105292};
const double g7_w[7] = {0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
                        0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
                        0.1294849661688697};

} // namespace

cplx integrate_segment(const std::function<cplx(cplx)>& f, cplx z0, cplx z1, int panels) {
    panels = std::max(1, panels);
    const cplx d = (z1 - z0) / static_cast<double>(panels);
    cplx total = 0.0;
    for (int p = 0; p < panels; ++p) {
        cplx a = z0 + d * static_cast<double>(p);
        cplx mid = a + 0.5 * d;
        cplx acc = 0.0;
        for (int i = 0; i < 8; ++i) {
            acc += gl16_w[i] * (f(mid + 0.5 * d * gl16_x[i]) + f(mid - 0.5 * d * gl16_x[i]));
        }
        total += acc * 0.5 * d;
    }
    return total;
}

int panels_for(double length, double min_wavelength, int min_panels) {
    double lam = std::max(min_wavelength, 1e-8);
    int p = static_cast<int>(std::ceil(2.0 * length / lam));
    return std::clamp(p, min_panels, 400000);
}

cplx circle_mean(const std::function<cplx(cplx)>& f, cplx c, double r, int nodes) {
    cplx acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
        double th = 2.0 * pi * k / nodes;
        cplx z = c + std::polar(r, th);
        // dz = i r e^{i th} dth ; (1/2 pi i) f dz = (1/2 pi) f r e^{i th} dth
        acc += f(z) * std::polar(r, th);
    }
    return acc / static_cast<double>(nodes);
}

namespace {

cplx gk_panel(const std::function<cplx(double)>& f, double a, double b, double& err) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    cplx k15 = 0.0, g7 = 0.0;
    int gi = 0;
    for (int i = 0; i < 15; ++i) {
        cplx v = f(c + h * k15_x[i]);
        k15 += k15_w[i] * v;
        if (i % 2 == 1) g7 += g7_w[gi++] * v;
    }
    k15 *= h;
    g7 *= h;
    err = std::abs(k15 - g7);
    return k15;
}

cplx gk_recurse(const std::function<cplx(double)>& f, double a, double b, double tol, int depth,
                double scale) {
    double err = 0.0;
    cplx v = gk_panel(f, a, b, err);
    if (depth <= 0 || err <= tol * (1.0 + scale)) return v;
    double m = 0.5 * (a + b);
    return gk_recurse(f, a, m, tol, depth - 1, scale) +
           gk_recurse(f, m, b, tol, depth - 1, scale);
}

} // namespace

cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b, double tol,
                  int max_depth) {
    double err0 = 0.0;
    cplx first = gk_panel(f, a, b, err0);
    double scale = std::abs(first);
    if (err0 <= tol * (1.0 + scale)) return first;
    double m = 0.5 * (a + b);
    return gk_recurse(f, a, m, tol, max_depth, scale) +
           gk_recurse(f, m, b, tol, max_depth, scale);
}

} // namespace utm
