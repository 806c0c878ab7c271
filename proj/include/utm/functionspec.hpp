#pragma once

#include "utm/complex_util.hpp"

#include <string>
#include <vector>

namespace utm {

/// I_m(w) = \int_0^1 x^m e^{w x} dx, entire in w. Series for small |w|,
/// upward recursion otherwise.
cplx poly_exp_moment(int m, cplx w);

/// Concrete carrier for the smooth data functions: closed forms plus
/// splined samples. Evaluable everywhere on its domain, with endpoint
/// derivatives for the compatibility check.
class FunctionSpec {
  public:
    enum class Kind { Poly, Trig, Exp, Samples };

    struct TrigTerm {
        bool is_sin = true;
        double freq = 0.0;  // argument is freq * x
        cplx amp = 0.0;
    };
    struct ExpTerm {
        cplx rate = 0.0;  // e^{rate * x}
        cplx amp = 0.0;
    };

    FunctionSpec();  // the zero function (empty poly)
    static FunctionSpec poly(std::vector<cplx> coeffs);
    static FunctionSpec zero() { return FunctionSpec(); }
    static FunctionSpec trig(std::vector<TrigTerm> terms);
    static FunctionSpec expsum(std::vector<ExpTerm> terms);
    static FunctionSpec samples(std::vector<double> x, std::vector<cplx> y);

    Kind kind() const { return kind_; }
    const std::vector<cplx>& poly_coeffs() const { return poly_; }
    const std::vector<TrigTerm>& trig_terms() const { return trig_; }
    const std::vector<ExpTerm>& exp_terms() const { return expsum_; }
    const std::vector<double>& sample_x() const { return sx_; }
    const std::vector<cplx>& sample_y() const { return sy_; }

    bool is_zero_function() const;

    cplx eval(double x) const;
    /// d^order/dx^order at x. Splines support order <= 3.
    cplx deriv(int order, double x) const;

    /// \int_lo^hi f(x) e^{w x} dx, exact per kind (spline: piecewise exact).
    cplx weighted_integral(cplx w, double lo, double hi) const;

  private:
    Kind kind_ = Kind::Poly;
    std::vector<cplx> poly_;
    std::vector<TrigTerm> trig_;
    std::vector<ExpTerm> expsum_;
    std::vector<double> sx_;
    std::vector<cplx> sy_;
    // natural cubic spline coefficients per panel: y = a + b dx + c dx^2 + d dx^3
    std::vector<cplx> sa_, sb_, sc_, sd_;
    void build_spline();
};

} // namespace utm
