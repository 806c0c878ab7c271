#pragma once

#include <complex>
#include <cmath>
#include <numbers>
#include <vector>

namespace utm {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

/// n-th root of unity omega = exp(2*pi*i/n).
inline cplx omega(int n) {
    return std::polar(1.0, 2.0 * pi / static_cast<double>(n));
}

/// omega^k with the exponent reduced mod n, so large products of
/// roots of unity do not accumulate rounding.
inline cplx omega_pow(int n, long long k) {
    long long r = k % n;
    if (r < 0) r += n;
    return std::polar(1.0, 2.0 * pi * static_cast<double>(r) / static_cast<double>(n));
}

/// a * rho^n by repeated multiplication (no pow branch cuts).
inline cplx a_rho_n(cplx a, cplx rho, int n) {
    cplx p = 1.0;
    for (int i = 0; i < n; ++i) p *= rho;
    return a * p;
}

/// Sum of omega^y over the set bits y of mask.
inline cplx exponent_sum(int n, unsigned mask) {
    cplx s = 0.0;
    for (int y = 0; y < n; ++y)
        if (mask & (1u << y)) s += omega_pow(n, y);
    return s;
}

inline double wrap_angle(double phi) {
    double t = std::fmod(phi, 2.0 * pi);
    if (t < 0) t += 2.0 * pi;
    return t;
}

} // namespace utm
