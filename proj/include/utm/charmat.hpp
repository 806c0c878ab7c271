#pragma once

#include "utm/exppoly.hpp"
#include "utm/problem.hpp"

#include <vector>

namespace utm {

/// Monomial c_j(rho) = -a rho^n (i rho)^{-(j+1)}, degree n-1-j.
CPoly c_monomial(int n, cplx a, int j);

/// The n x n matrix of Eq-(1.5) type entries; entry (k,j) has exponent
/// keys inside {empty, {k-1}}.
struct CharMatrix {
    int n = 0;
    cplx a = 0.0;
    std::vector<std::vector<ExpPolynomial>> entries;  // n x n
    IndexSets isets;
};

/// Reduced boundary coefficient matrix (zero for simple conditions) plus
/// the W-component bookkeeping: W_j is the pivot boundary function of row j.
struct ReducedBC {
    std::vector<std::vector<double>> Ahat;  // n x n
    std::vector<int> worder;                // derivative order of W_j
    std::vector<bool> wleft;                // true: left-end function f, false: right-end g
};

/// Delta plus the Cramer's-rule numerators zeta_j / eta_j, j = 1..2n,
/// stored with symbolic data atoms (Q0/Hdata for zeta, QT/Hdata for eta).
struct CramerSystem {
    int n = 0;
    cplx a = 0.0;
    ExpPolynomial Delta;
    std::vector<ExpPolynomial> zeta;  // size 2n, 1-based index j stored at j-1
    std::vector<ExpPolynomial> eta;
    /// Cramer-consistent variants: for j > n the data term enters as
    /// Delta * hdata so that (zetaW_j - e^{a rho^n T} etaW_j)/Delta equals
    /// the pivot boundary-function transform exactly. Used by the solution
    /// representations; zeta/eta keep the affine form that satisfies the
    /// closed boundary-data identity.
    std::vector<ExpPolynomial> zetaW;
    std::vector<ExpPolynomial> etaW;
    std::vector<int> Jplus;   // subset of {1..2n}
    std::vector<int> Jminus;
    IndexSets isets;
    double T = 1.0;
};

CharMatrix build_char_matrix(const ValidatedProblem& p);

/// Determinant as an atom-free exponential polynomial, with degree-wise
/// relative pruning of roundoff-cancelled coefficients.
ExpPolynomial char_det(const CharMatrix& m, double prune_tol = 1e-11);

ReducedBC reduced_bc(const ValidatedProblem& p);

CramerSystem cramer_system(const ValidatedProblem& p, double prune_tol = 1e-11);

/// H(rho) as a symbolic combination: sum over pivot orders of
/// c_j(rho) hdata(row) minus e^{-i rho} times the right-end pivot part.
ExpPolynomial H_symbolic(const ValidatedProblem& p);

} // namespace utm
