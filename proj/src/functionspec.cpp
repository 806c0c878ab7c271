#include "utm/functionspec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace utm {

cplx poly_exp_moment(int m, cplx w) {
    if (std::abs(w) <= 2.0 * m + 4.0) {
        // I_m(w) = sum_k w^k / (k! (m+k+1))
        cplx term = 1.0, sum = 0.0;
        for (int k = 0; k < 250; ++k) {
            cplx add = term / static_cast<double>(m + k + 1);
            sum += add;
            if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum)) && k > 4) break;
            term *= w / static_cast<double>(k + 1);
        }
        return sum;
    }
    cplx ew = std::exp(w);
    cplx I = (ew - 1.0) / w;
    for (int j = 1; j <= m; ++j) I = (ew - static_cast<double>(j) * I) / w;
    return I;
}

FunctionSpec::FunctionSpec() : kind_(Kind::Poly) {}

FunctionSpec FunctionSpec::poly(std::vector<cplx> coeffs) {
    FunctionSpec f;
    f.kind_ = Kind::Poly;
    f.poly_ = std::move(coeffs);
    while (!f.poly_.empty() && f.poly_.back() == cplx(0.0)) f.poly_.pop_back();
    return f;
}

FunctionSpec FunctionSpec::trig(std::vector<TrigTerm> terms) {
    FunctionSpec f;
    f.kind_ = Kind::Trig;
    f.trig_ = std::move(terms);
    return f;
}

FunctionSpec FunctionSpec::expsum(std::vector<ExpTerm> terms) {
    FunctionSpec f;
    f.kind_ = Kind::Exp;
    f.expsum_ = std::move(terms);
    return f;
}

FunctionSpec FunctionSpec::samples(std::vector<double> x, std::vector<cplx> y) {
    if (x.size() != y.size() || x.size() < 4)
        throw std::invalid_argument("samples: need >= 4 matched samples");
    for (size_t i = 1; i < x.size(); ++i)
        if (x[i] <= x[i - 1]) throw std::invalid_argument("samples: x not increasing");
    FunctionSpec f;
    f.kind_ = Kind::Samples;
    f.sx_ = std::move(x);
    f.sy_ = std::move(y);
    f.build_spline();
    return f;
}

bool FunctionSpec::is_zero_function() const {
    switch (kind_) {
        case Kind::Poly: return poly_.empty();
        case Kind::Trig:
            return std::all_of(trig_.begin(), trig_.end(),
                               [](const TrigTerm& t) { return t.amp == cplx(0.0); });
        case Kind::Exp:
            return std::all_of(expsum_.begin(), expsum_.end(),
                               [](const ExpTerm& t) { return t.amp == cplx(0.0); });
        case Kind::Samples:
            return std::all_of(sy_.begin(), sy_.end(), [](cplx v) { return v == cplx(0.0); });
    }
    return false;
}

void FunctionSpec::build_spline() {
    // natural cubic spline on sx_/sy_
    const size_t n = sx_.size();
    std::vector<double> h(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) h[i] = sx_[i + 1] - sx_[i];
    std::vector<cplx> alpha(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i)
        alpha[i] = 3.0 * ((sy_[i + 1] - sy_[i]) / h[i] - (sy_[i] - sy_[i - 1]) / h[i - 1]);
    std::vector<double> l(n, 1.0), mu(n, 0.0);
    std::vector<cplx> z(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) {
        l[i] = 2.0 * (sx_[i + 1] - sx_[i - 1]) - h[i - 1] * mu[i - 1];
        mu[i] = h[i] / l[i];
        z[i] = (alpha[i] - h[i - 1] * z[i - 1]) / l[i];
    }
    sa_.assign(sy_.begin(), sy_.end() - 1);
    sb_.assign(n - 1, 0.0);
    sc_.assign(n, 0.0);
    sd_.assign(n - 1, 0.0);
    for (size_t j = n - 1; j-- > 0;) {
        sc_[j] = z[j] - mu[j] * sc_[j + 1];
        sb_[j] = (sy_[j + 1] - sy_[j]) / h[j] - h[j] * (sc_[j + 1] + 2.0 * sc_[j]) / 3.0;
        sd_[j] = (sc_[j + 1] - sc_[j]) / (3.0 * h[j]);
    }
    sc_.pop_back();
}

cplx FunctionSpec::eval(double x) const { return deriv(0, x); }

cplx FunctionSpec::deriv(int order, double x) const {
    switch (kind_) {
        case Kind::Poly: {
            cplx v = 0.0;
            for (size_t i = poly_.size(); i-- > 0;) {
                double fac = 1.0;
                if (static_cast<int>(i) < order) continue;
                for (int k = 0; k < order; ++k) fac *= static_cast<double>(i - k);
                v += poly_[i] * fac * std::pow(x, static_cast<double>(i) - order);
            }
            return v;
        }
        case Kind::Trig: {
            cplx v = 0.0;
            for (const auto& t : trig_) {
                double p = std::pow(t.freq, order);
                // cycle sin -> cos -> -sin -> -cos
                int phase = order % 4;
                double arg = t.freq * x;
                double base;
                if (t.is_sin)
                    base = (phase == 0)   ? std::sin(arg)
                           : (phase == 1) ? std::cos(arg)
                           : (phase == 2) ? -std::sin(arg)
                                          : -std::cos(arg);
                else
                    base = (phase == 0)   ? std::cos(arg)
                           : (phase == 1) ? -std::sin(arg)
                           : (phase == 2) ? -std::cos(arg)
                                          : std::sin(arg);
                v += t.amp * p * base;
            }
            return v;
        }
        case Kind::Exp: {
            cplx v = 0.0;
            for (const auto& t : expsum_) {
                cplx r = 1.0;
                for (int k = 0; k < order; ++k) r *= t.rate;
                v += t.amp * r * std::exp(t.rate * x);
            }
            return v;
        }
        case Kind::Samples: {
            if (order > 3) throw std::invalid_argument("samples: derivatives beyond 3 unavailable");
            // clamp into range, locate panel
            size_t j = 0;
            if (x <= sx_.front())
                j = 0;
            else if (x >= sx_.back())
                j = sx_.size() - 2;
            else
                j = static_cast<size_t>(std::upper_bound(sx_.begin(), sx_.end(), x) - sx_.begin()) - 1;
            double dx = x - sx_[j];
            switch (order) {
                case 0: return sa_[j] + dx * (sb_[j] + dx * (sc_[j] + dx * sd_[j]));
                case 1: return sb_[j] + dx * (2.0 * sc_[j] + 3.0 * dx * sd_[j]);
                case 2: return 2.0 * sc_[j] + 6.0 * dx * sd_[j];
                default: return 6.0 * sd_[j];
            }
        }
    }
    return 0.0;
}

namespace {

/// \int_lo^hi x^m e^{w x} dx via the unit-interval moment.
cplx shifted_poly_integral(const std::vector<cplx>& coeffs, cplx w, double lo, double hi) {
    // substitute x = lo + L u, expand (lo + L u)^m
    const double L = hi - lo;
    if (L == 0.0) return 0.0;
    cplx pref = std::exp(w * lo) * L;
    cplx total = 0.0;
    for (size_t m = 0; m < coeffs.size(); ++m) {
        if (coeffs[m] == cplx(0.0)) continue;
        // (lo + L u)^m = sum_k C(m,k) lo^{m-k} L^k u^k
        double binom = 1.0;
        for (size_t k = 0; k <= m; ++k) {
            double lk = std::pow(lo, static_cast<double>(m - k)) * std::pow(L, static_cast<double>(k));
            total += coeffs[m] * binom * lk * poly_exp_moment(static_cast<int>(k), w * L);
            binom = binom * static_cast<double>(m - k) / static_cast<double>(k + 1);
        }
    }
    return pref * total;
}

} // namespace

cplx FunctionSpec::weighted_integral(cplx w, double lo, double hi) const {
    switch (kind_) {
        case Kind::Poly:
            return shifted_poly_integral(poly_, w, lo, hi);
        case Kind::Trig: {
            cplx v = 0.0;
            const cplx I(0.0, 1.0);
            for (const auto& t : trig_) {
                // sin(vx) = (e^{ivx}-e^{-ivx})/(2i), cos(vx) = (e^{ivx}+e^{-ivx})/2
                cplx p = std::exp((w + I * t.freq) * lo) * (hi - lo) *
                         poly_exp_moment(0, (w + I * t.freq) * (hi - lo));
                cplx q = std::exp((w - I * t.freq) * lo) * (hi - lo) *
                         poly_exp_moment(0, (w - I * t.freq) * (hi - lo));
                v += t.is_sin ? t.amp * (p - q) / (2.0 * I) : t.amp * (p + q) / 2.0;
            }
            return v;
        }
        case Kind::Exp: {
            cplx v = 0.0;
            for (const auto& t : expsum_)
                v += t.amp * std::exp((w + t.rate) * lo) * (hi - lo) *
                     poly_exp_moment(0, (w + t.rate) * (hi - lo));
            return v;
        }
        case Kind::Samples: {
            cplx v = 0.0;
            for (size_t j = 0; j + 1 < sx_.size(); ++j) {
                double a = std::max(lo, sx_[j]), b = std::min(hi, sx_[j + 1]);
                if (b <= a) continue;
                // panel polynomial in dx = x - sx_[j]
                std::vector<cplx> pc = {sa_[j], sb_[j], sc_[j], sd_[j]};
                // integral over [a,b] of p(x - sx_j) e^{w x} dx
                //   = e^{w sx_j} \int_{a - sx_j}^{b - sx_j} p(u) e^{w u} du
                v += std::exp(w * sx_[j]) *
                     shifted_poly_integral(pc, w, a - sx_[j], b - sx_[j]);
            }
            return v;
        }
    }
    return 0.0;
}

} // namespace utm
