#pragma once

#include "utm/charmat.hpp"
#include "utm/problem.hpp"

#include <complex>
#include <random>
#include <vector>

namespace utm::testutil {

/// LU determinant of a complex matrix with partial pivoting (independent
/// oracle for the symbolic determinant).
inline cplx lu_det(std::vector<std::vector<cplx>> m) {
    const size_t n = m.size();
    cplx det = 1.0;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        for (size_t r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (std::abs(m[piv][c]) == 0.0) return 0.0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            cplx f = m[r][c] / m[c][c];
            for (size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

/// Random boundary coefficient matrix in reduced row-echelon form:
/// random strictly-increasing pivot columns, unit pivots, random entries
/// to the right of each pivot outside the pivot columns.
inline std::vector<std::vector<double>> random_rref(int n, std::mt19937& rng) {
    std::vector<int> cols(2 * n);
    for (int i = 0; i < 2 * n; ++i) cols[i] = i;
    std::shuffle(cols.begin(), cols.end(), rng);
    std::vector<int> piv(cols.begin(), cols.begin() + n);
    std::sort(piv.begin(), piv.end());
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    std::vector<std::vector<double>> A(n, std::vector<double>(2 * n, 0.0));
    for (int r = 0; r < n; ++r) {
        A[r][piv[r]] = 1.0;
        for (int c = piv[r] + 1; c < 2 * n; ++c) {
            bool is_pivot_col = std::binary_search(piv.begin(), piv.end(), c);
            if (!is_pivot_col) A[r][c] = ur(rng);
        }
    }
    return A;
}

inline ProblemSpec make_problem(int n, std::vector<std::vector<double>> A, cplx a,
                                FunctionSpec q0 = FunctionSpec::zero(), double T = 1.0,
                                std::vector<FunctionSpec> h = {}) {
    ProblemSpec p;
    p.n = n;
    p.A = std::move(A);
    p.a = a;
    p.T = T;
    p.q0 = std::move(q0);
    if (h.empty()) h.assign(static_cast<size_t>(n), FunctionSpec::zero());
    p.h = std::move(h);
    return p;
}

inline ProblemSpec heat_dirichlet(FunctionSpec q0withSin = FunctionSpec::trig({{true, pi, 1.0}})) {
    return make_problem(2, {{0, 0, 1, 0}, {0, 0, 0, 1}}, 1.0, std::move(q0withSin));
}

inline ProblemSpec heat_neumann() {
    return make_problem(2, {{1, 0, 0, 0}, {0, 1, 0, 0}}, 1.0,
                        FunctionSpec::trig({{false, pi, 1.0}}));
}

inline ProblemSpec heat_robin() {
    // q_x(0) + q(0) = 0, q(1) = 0; initial mode sin(sigma1 (1-x)),
    // tan(sigma1) = sigma1
    const double s1 = 4.493409457909064;
    // sin(s1 (1-x)) = sin(s1)cos(s1 x) - cos(s1)sin(s1 x)
    FunctionSpec q0 = FunctionSpec::trig(
        {{false, s1, std::sin(s1)}, {true, s1, -std::cos(s1)}});
    return make_problem(2, {{1, 0, 1, 0}, {0, 0, 0, 1}}, 1.0, std::move(q0));
}

/// Pseudo-periodic matrix: row k is q^{(n-k)}(0) + b_k q^{(n-k)}(1).
inline std::vector<std::vector<double>> pseudo_periodic_A(const std::vector<double>& b) {
    const int n = static_cast<int>(b.size());
    std::vector<std::vector<double>> A(n, std::vector<double>(2 * n, 0.0));
    for (int k = 0; k < n; ++k) {
        A[k][2 * k] = 1.0;
        A[k][2 * k + 1] = b[static_cast<size_t>(k)];
    }
    return A;
}

inline ProblemSpec third_order_coupled(double b3, cplx a,
                                       FunctionSpec q0 = FunctionSpec::zero()) {
    // the n = 3 pseudo-periodic family: rows (1,-1), (1,-1), (1,b3)
    return make_problem(3, pseudo_periodic_A({-1.0, -1.0, b3}), a, std::move(q0));
}

/// Closed form of the coupled third-order example determinant:
/// 3 (w - w^2) c2 c1 c0 [3 - (e^{-i rho} + e^{-i w rho} + e^{-i w^2 rho})]
inline cplx third_order_example_delta(cplx rho, cplx a = cplx(0.0, 1.0)) {
    const cplx w = omega(3);
    auto c = [&](int j) { return c_monomial(3, a, j).eval(rho); };
    cplx bracket = 3.0;
    for (int j = 0; j < 3; ++j)
        bracket -= std::exp(cplx(0.0, -1.0) * omega_pow(3, j) * rho);
    return 3.0 * (w - w * w) * c(2) * c(1) * c(0) * bracket;
}

} // namespace utm::testutil
