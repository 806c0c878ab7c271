#include "utm/cpoly.hpp"

#include <algorithm>
#include <cstdio>

namespace utm {

CPoly::CPoly(std::vector<cplx> coeffs) : c_(std::move(coeffs)) { trim(); }

CPoly CPoly::constant(cplx c) { return CPoly({c}); }

CPoly CPoly::monomial(cplx c, int degree) {
    std::vector<cplx> v(static_cast<size_t>(degree) + 1, cplx(0.0));
    v.back() = c;
    return CPoly(std::move(v));
}

void CPoly::trim() {
    while (!c_.empty() && c_.back() == cplx(0.0)) c_.pop_back();
}

cplx CPoly::eval(cplx rho) const {
    cplx v = 0.0;
    for (size_t i = c_.size(); i-- > 0;) v = v * rho + c_[i];
    return v;
}

CPoly CPoly::derivative() const {
    if (c_.size() <= 1) return CPoly();
    std::vector<cplx> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
    return CPoly(std::move(d));
}

double CPoly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

CPoly& CPoly::operator+=(const CPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), cplx(0.0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

CPoly& CPoly::operator-=(const CPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), cplx(0.0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

CPoly& CPoly::operator*=(cplx s) {
    if (s == cplx(0.0)) {
        c_.clear();
        return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
}

CPoly operator*(const CPoly& a, const CPoly& b) {
    if (a.is_zero() || b.is_zero()) return CPoly();
    std::vector<cplx> r(a.c_.size() + b.c_.size() - 1, cplx(0.0));
    for (size_t i = 0; i < a.c_.size(); ++i)
        for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return CPoly(std::move(r));
}

CPoly CPoly::pruned(double tol) const {
    std::vector<cplx> v = c_;
    for (auto& x : v)
        if (std::abs(x) <= tol) x = 0.0;
    return CPoly(std::move(v));
}

std::string CPoly::to_string() const {
    std::string s = "[";
    char buf[64];
    for (size_t i = 0; i < c_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "(%.12g,%.12g)", c_[i].real(), c_[i].imag());
        if (i) s += ",";
        s += buf;
    }
    s += "]";
    return s;
}

} // namespace utm
