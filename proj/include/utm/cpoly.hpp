#pragma once

#include "utm/complex_util.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace utm {

/// Dense complex polynomial, coefficients in ascending degree.
/// The zero polynomial is the empty coefficient list; otherwise the
/// trailing coefficient is nonzero.
class CPoly {
  public:
    CPoly() = default;
    explicit CPoly(std::vector<cplx> coeffs);
    static CPoly constant(cplx c);
    static CPoly monomial(cplx c, int degree);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx coeff(int d) const {
        return (d >= 0 && d < static_cast<int>(c_.size())) ? c_[d] : cplx(0.0);
    }

    cplx eval(cplx rho) const;
    CPoly derivative() const;

    double max_abs_coeff() const;

    CPoly& operator+=(const CPoly& o);
    CPoly& operator-=(const CPoly& o);
    CPoly& operator*=(cplx s);
    friend CPoly operator+(CPoly a, const CPoly& b) { return a += b; }
    friend CPoly operator-(CPoly a, const CPoly& b) { return a -= b; }
    friend CPoly operator*(CPoly a, cplx s) { return a *= s; }
    friend CPoly operator*(cplx s, CPoly a) { return a *= s; }
    friend CPoly operator*(const CPoly& a, const CPoly& b);

    /// Zero out coefficients below tol in magnitude, then trim.
    CPoly pruned(double tol) const;

    bool operator==(const CPoly& o) const { return c_ == o.c_; }

    std::string to_string() const;

  private:
    void trim();
    std::vector<cplx> c_;
};

} // namespace utm
