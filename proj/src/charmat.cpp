#include "utm/charmat.hpp"

namespace utm {

CPoly c_monomial(int n, cplx a, int j) {
    // -a rho^n (i rho)^{-(j+1)} = -a (-i)^{j+1} rho^{n-1-j}
    cplx g = -a;
    for (int k = 0; k < j + 1; ++k) g *= cplx(0.0, -1.0);
    return CPoly::monomial(g, n - 1 - j);
}

namespace {

/// Bracket contributions shared by the odd/even branches of the matrix
/// entry: the pivot sums with the c-prefactor folded in, so every term is
/// c_r(rho) times a root of unity times a boundary coefficient.
void add_pivot_sums(ExpPolynomial& e, const ValidatedProblem& p, int k, int m, bool use_beta) {
    const auto& is = p.isets();
    const int n = p.spec().n;
    const cplx a = p.spec().a;
    for (int r : is.hatJplus) {
        int row = is.pivotRowPlus[r];
        double coef = use_beta ? p.spec().beta(row, m) : p.spec().alpha(row, m);
        if (coef == 0.0) continue;
        CPoly c = c_monomial(n, a, r) * (omega_pow(n, static_cast<long long>(n - 1 - r) * (k - 1)) * coef);
        e.add_term(0, DataAtom::none(), cplx(-1.0) * c);
    }
    for (int r : is.hatJminus) {
        int row = is.pivotRowMinus[r];
        double coef = use_beta ? p.spec().beta(row, m) : p.spec().alpha(row, m);
        if (coef == 0.0) continue;
        CPoly c = c_monomial(n, a, r) * (omega_pow(n, static_cast<long long>(n - 1 - r) * (k - 1)) * coef);
        e.add_term(exp_nibble(k - 1), DataAtom::none(), c);
    }
}

ExpPolynomial matrix_entry(const ValidatedProblem& p, int k, int j) {
    const auto& is = p.isets();
    const int n = p.spec().n;
    const cplx a = p.spec().a;
    const int Jj = is.Jseq[j - 1];
    ExpPolynomial e(n);
    if (Jj % 2 == 1) {
        const int m = (Jj - 1) / 2;
        CPoly lead = c_monomial(n, a, m) * omega_pow(n, static_cast<long long>(n - 1 - m) * (k - 1));
        e.add_term(0, DataAtom::none(), lead);
        add_pivot_sums(e, p, k, m, /*use_beta=*/false);
    } else {
        const int m = Jj / 2;
        CPoly lead = c_monomial(n, a, m) * omega_pow(n, static_cast<long long>(n - 1 - m) * (k - 1));
        e.add_term(exp_nibble(k - 1), DataAtom::none(), cplx(-1.0) * lead);
        add_pivot_sums(e, p, k, m, /*use_beta=*/true);
    }
    return e;
}

/// u(rho,k) of the reduced global relation as a symbolic column entry.
ExpPolynomial u_entry(const ValidatedProblem& p, int k) {
    const auto& is = p.isets();
    const int n = p.spec().n;
    const cplx a = p.spec().a;
    ExpPolynomial e(n);
    e.add_term(0, DataAtom::q0(k - 1), CPoly::constant(1.0));
    for (int l : is.hatJplus) {
        int row = is.pivotRowPlus[l];
        CPoly c = c_monomial(n, a, l) * omega_pow(n, static_cast<long long>(n - 1 - l) * (k - 1));
        e.add_term(0, DataAtom::hdata(row), cplx(-1.0) * c);
    }
    for (int l : is.hatJminus) {
        int row = is.pivotRowMinus[l];
        CPoly c = c_monomial(n, a, l) * omega_pow(n, static_cast<long long>(n - 1 - l) * (k - 1));
        e.add_term(exp_nibble(k - 1), DataAtom::hdata(row), c);
    }
    return e;
}

ExpPolynomial qT_entry(int n, int k) {
    ExpPolynomial e(n);
    e.add_term(0, DataAtom::qT(k - 1), CPoly::constant(1.0));
    return e;
}

int order_of_index(const IndexSets& is, int j /*1..2n*/) {
    const int n = is.n;
    int Jv = (j <= n) ? is.Jseq[j - 1] : is.Jprimeseq[j - n - 1];
    return (Jv % 2 == 1) ? (Jv - 1) / 2 : Jv / 2;
}

} // namespace

CharMatrix build_char_matrix(const ValidatedProblem& p) {
    CharMatrix m;
    m.n = p.spec().n;
    m.a = p.spec().a;
    m.isets = p.isets();
    m.entries.assign(m.n, std::vector<ExpPolynomial>(m.n, ExpPolynomial(m.n)));
    for (int k = 1; k <= m.n; ++k)
        for (int j = 1; j <= m.n; ++j) m.entries[k - 1][j - 1] = matrix_entry(p, k, j);
    return m;
}

ExpPolynomial char_det(const CharMatrix& m, double prune_tol) {
    ExpPolynomial d = ExpPolynomial::det(m.entries).pruned_rel(prune_tol);
    if (d.is_zero())
        throw structural_error("char_det: determinant vanished identically (matrix not full rank)");
    return d;
}

ReducedBC reduced_bc(const ValidatedProblem& p) {
    const auto& is = p.isets();
    const int n = p.spec().n;
    ReducedBC r;
    r.Ahat.assign(n, std::vector<double>(n, 0.0));
    for (int k = 1; k <= n; ++k) {
        for (int j = 1; j <= n; ++j) {
            int Jj = is.Jseq[j - 1];
            r.Ahat[k - 1][j - 1] =
                (Jj % 2 == 1) ? p.spec().alpha(k, (Jj - 1) / 2) : p.spec().beta(k, Jj / 2);
        }
    }
    for (int j = 1; j <= n; ++j) {
        int Jp = is.Jprimeseq[j - 1];
        r.worder.push_back(Jp % 2 == 1 ? (Jp - 1) / 2 : Jp / 2);
        r.wleft.push_back(Jp % 2 == 1);
    }
    return r;
}

CramerSystem cramer_system(const ValidatedProblem& p, double prune_tol) {
    const int n = p.spec().n;
    CramerSystem cs;
    cs.n = n;
    cs.a = p.spec().a;
    cs.isets = p.isets();
    cs.T = p.spec().T;

    CharMatrix m = build_char_matrix(p);
    cs.Delta = char_det(m, prune_tol);

    // hat zeta_j / hat eta_j for j <= n: column replacement determinants
    std::vector<ExpPolynomial> zhat(2 * n, ExpPolynomial(n)), ehat(2 * n, ExpPolynomial(n));
    for (int j = 1; j <= n; ++j) {
        auto mz = m.entries;
        auto me = m.entries;
        for (int k = 1; k <= n; ++k) {
            mz[k - 1][j - 1] = u_entry(p, k);
            me[k - 1][j - 1] = qT_entry(n, k);
        }
        zhat[j - 1] = ExpPolynomial::det(mz).pruned_rel(prune_tol);
        ehat[j - 1] = ExpPolynomial::det(me).pruned_rel(prune_tol);
    }
    // j > n: affine combinations through the reduced boundary conditions
    ReducedBC rb = reduced_bc(p);
    std::vector<ExpPolynomial> zhatW = zhat, ehatW = ehat;
    for (int jp = 1; jp <= n; ++jp) {
        ExpPolynomial z(n), e(n), zw(n), ew(n);
        ExpPolynomial hterm(n);
        hterm.add_term(0, DataAtom::hdata(jp), CPoly::constant(1.0));
        z += hterm;
        e += hterm;
        zw += mul(cs.Delta, hterm);  // Cramer-consistent data entry
        for (int k = 1; k <= n; ++k) {
            double c = rb.Ahat[jp - 1][k - 1];
            if (c == 0.0) continue;
            z -= cplx(c) * zhat[k - 1];
            e -= cplx(c) * ehat[k - 1];
            zw -= cplx(c) * zhat[k - 1];
            ew -= cplx(c) * ehat[k - 1];
        }
        zhat[n + jp - 1] = std::move(z);
        ehat[n + jp - 1] = std::move(e);
        zhatW[n + jp - 1] = std::move(zw);
        ehatW[n + jp - 1] = std::move(ew);
    }

    cs.zeta.assign(2 * n, ExpPolynomial(n));
    cs.eta.assign(2 * n, ExpPolynomial(n));
    cs.zetaW.assign(2 * n, ExpPolynomial(n));
    cs.etaW.assign(2 * n, ExpPolynomial(n));
    for (int j = 1; j <= 2 * n; ++j) {
        CPoly pref = c_monomial(n, p.spec().a, order_of_index(p.isets(), j));
        cs.zeta[j - 1] = zhat[j - 1].times_poly(pref);
        cs.eta[j - 1] = ehat[j - 1].times_poly(pref);
        cs.zetaW[j - 1] = zhatW[j - 1].times_poly(pref);
        cs.etaW[j - 1] = ehatW[j - 1].times_poly(pref);
    }
    for (int j = 1; j <= n; ++j)
        (p.isets().Jseq[j - 1] % 2 == 1 ? cs.Jplus : cs.Jminus).push_back(j);
    for (int j = 1; j <= n; ++j)
        (p.isets().Jprimeseq[j - 1] % 2 == 1 ? cs.Jplus : cs.Jminus).push_back(n + j);
    return cs;
}

ExpPolynomial H_symbolic(const ValidatedProblem& p) {
    const auto& is = p.isets();
    const int n = p.spec().n;
    ExpPolynomial H(n);
    for (int j : is.hatJplus)
        H.add_term(0, DataAtom::hdata(is.pivotRowPlus[j]), c_monomial(n, p.spec().a, j));
    for (int j : is.hatJminus)
        H.add_term(exp_nibble(0), DataAtom::hdata(is.pivotRowMinus[j]),
                   cplx(-1.0) * c_monomial(n, p.spec().a, j));
    return H;
}

} // namespace utm
