#include "doctest.h"

#include "test_util.hpp"
#include "utm/charmat.hpp"

#include <random>

using namespace utm;

namespace {

/// e^{-i rho} as a symbolic factor
ExpPolynomial shift_once(int n) {
    ExpPolynomial s(n);
    s.add_term(exp_nibble(0), DataAtom::none(), CPoly::constant(1.0));
    return s;
}

ExpPolynomial q0_atom(int n) {
    ExpPolynomial s(n);
    s.add_term(0, DataAtom::q0(0), CPoly::constant(1.0));
    return s;
}

/// Exact symbolic statement of the boundary-data identity:
/// sum_{J+} zeta - e^{-i rho} sum_{J-} zeta - Delta q0^ - (1 - Delta) H = 0
double data_identity_residual(const ValidatedProblem& vp) {
    CramerSystem cs = cramer_system(vp);
    const int n = cs.n;
    ExpPolynomial lhs(n), sm(n);
    for (int j : cs.Jplus) lhs += cs.zeta[static_cast<size_t>(j - 1)];
    for (int j : cs.Jminus) sm += cs.zeta[static_cast<size_t>(j - 1)];
    lhs -= mul(shift_once(n), sm);
    ExpPolynomial H = H_symbolic(vp);
    ExpPolynomial rhs = mul(cs.Delta, q0_atom(n)) + H - mul(cs.Delta, H);
    ExpPolynomial diff = lhs - rhs;
    double scale = std::max({1.0, lhs.max_abs_coeff(), rhs.max_abs_coeff()});
    return diff.max_abs_coeff() / scale;
}

} // namespace

TEST_CASE("c_monomial values") {
    // c_j(rho) = -a rho^n (i rho)^{-(j+1)}
    cplx a(0.0, 1.0);
    CHECK(std::abs(c_monomial(3, a, 2).eval(2.0) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(c_monomial(3, a, 1).eval(2.0) - cplx(0.0, 2.0)) < 1e-14);
    CHECK(std::abs(c_monomial(3, a, 0).eval(2.0) - cplx(-4.0, 0.0)) < 1e-14);
}

TEST_CASE("Dirichlet characteristic matrix entries") {
    ValidatedProblem vp = validate(testutil::heat_dirichlet());
    CharMatrix m = build_char_matrix(vp);
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    for (int s = 0; s < 10; ++s) {
        cplx rho(ur(rng), ur(rng));
        for (int k = 1; k <= 2; ++k) {
            cplx w = omega_pow(2, k - 1);
            CHECK(std::abs(m.entries[k - 1][0].evaluate(rho) - cplx(1.0)) < 1e-12);
            cplx expect = -std::exp(cplx(0.0, -1.0) * w * rho);
            CHECK(std::abs(m.entries[k - 1][1].evaluate(rho) - expect) < 1e-12);
        }
    }
}

TEST_CASE("third-order example matrix matches the displayed form") {
    ValidatedProblem vp = validate(testutil::third_order_coupled(2.0, cplx(0.0, 1.0)));
    CharMatrix m = build_char_matrix(vp);
    cplx a(0.0, 1.0);
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> ur(-1.5, 1.5);
    const cplx w = omega(3);
    for (int s = 0; s < 10; ++s) {
        cplx rho(ur(rng), ur(rng));
        auto c = [&](int j) { return c_monomial(3, a, j).eval(rho); };
        for (int k = 1; k <= 3; ++k) {
            cplx ek = std::exp(cplx(0.0, -1.0) * omega_pow(3, k - 1) * rho);
            cplx e1 = -c(2) * (ek - 1.0);
            cplx e2 = -omega_pow(3, k - 1) * c(1) * (ek - 1.0);
            cplx e3 = -omega_pow(3, 2 * (k - 1)) * c(0) * (ek + 2.0);
            CHECK(std::abs(m.entries[k - 1][0].evaluate(rho) - e1) <
                  1e-12 * (1.0 + std::abs(e1)));
            CHECK(std::abs(m.entries[k - 1][1].evaluate(rho) - e2) <
                  1e-12 * (1.0 + std::abs(e2)));
            CHECK(std::abs(m.entries[k - 1][2].evaluate(rho) - e3) <
                  1e-12 * (1.0 + std::abs(e3)));
        }
    }
    (void)w;
}

TEST_CASE("third-order example determinant equals the closed form") {
    ValidatedProblem vp = validate(testutil::third_order_coupled(2.0, cplx(0.0, 1.0)));
    ExpPolynomial delta = char_det(build_char_matrix(vp));
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    for (int s = 0; s < 20; ++s) {
        cplx rho(ur(rng), ur(rng));
        cplx expect = testutil::third_order_example_delta(rho);
        CHECK(std::abs(delta.evaluate(rho) - expect) <= 1e-10 * (1.0 + std::abs(expect)));
    }
    // the e^{+i omega^j rho} coefficients cancelled exactly: the exponent
    // sets {j, j+1} must be pruned away
    for (const auto& [key, poly] : delta.terms()) {
        int bits = 0;
        for (int y = 0; y < 3; ++y) bits += exp_count_of(key.counts, y);
        CHECK(bits != 2);
    }
    // value at 0 vanishes through the c2 c1 c0 factor
    CHECK(std::abs(delta.evaluate(0.0)) < 1e-14);
}

TEST_CASE("Dirichlet determinant is a multiple of e^{-i rho} - e^{i rho}") {
    ValidatedProblem vp = validate(testutil::heat_dirichlet());
    ExpPolynomial delta = char_det(build_char_matrix(vp));
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    for (int s = 0; s < 10; ++s) {
        cplx rho(ur(rng), ur(rng));
        cplx expect = std::exp(cplx(0.0, -1.0) * rho) - std::exp(cplx(0.0, 1.0) * rho);
        // a = 1 so the multiple is a^2 = 1
        CHECK(std::abs(delta.evaluate(rho) - expect) < 1e-12 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("rotation symmetry of the determinant for random problems") {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + trial % 3;
        cplx a = (n % 2 == 1) ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
        ProblemSpec p = testutil::make_problem(n, testutil::random_rref(n, rng), a);
        ValidatedProblem vp = validate(p);
        ExpPolynomial delta = char_det(build_char_matrix(vp));
        double sign = (n % 2 == 1) ? 1.0 : -1.0;
        std::uniform_real_distribution<double> ur(-2.0, 2.0);
        for (int s = 0; s < 5; ++s) {
            cplx rho(ur(rng), ur(rng));
            cplx lhs = delta.evaluate(rho);
            cplx rhs = sign * delta.evaluate(omega(n) * rho);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("row rotation identity of matrix entries") {
    std::mt19937 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + trial % 3;
        cplx a = (n % 2 == 1) ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
        ValidatedProblem vp =
            validate(testutil::make_problem(n, testutil::random_rref(n, rng), a));
        CharMatrix m = build_char_matrix(vp);
        std::uniform_real_distribution<double> ur(-1.5, 1.5);
        cplx rho(ur(rng), ur(rng));
        for (int k = 1; k <= n; ++k)
            for (int j = 1; j <= n; ++j) {
                cplx lhs = m.entries[k - 1][j - 1].evaluate(omega(n) * rho);
                cplx rhs = m.entries[k % n][j - 1].evaluate(rho);
                CHECK(std::abs(lhs - rhs) <= 1e-11 * (1.0 + std::abs(rhs)));
            }
    }
}

TEST_CASE("coefficient rotation identity Z_Y = (-1)^{n-1} Z_{Y'}(omega rho)") {
    std::mt19937 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + trial % 3;
        cplx a = (n % 2 == 1) ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
        ValidatedProblem vp =
            validate(testutil::make_problem(n, testutil::random_rref(n, rng), a));
        ExpPolynomial delta = char_det(build_char_matrix(vp));
        double sign = (n % 2 == 1) ? 1.0 : -1.0;
        for (const auto& [key, poly] : delta.terms()) {
            ExpCounts rot = 0;
            for (int y = 0; y < n; ++y) {
                int c = exp_count_of(key.counts, y);
                if (c) rot += static_cast<ExpCounts>(c) * exp_nibble((y + n - 1) % n);
            }
            auto it = delta.terms().find(ExponentKey{rot, DataAtom::none()});
            REQUIRE(it != delta.terms().end());
            const CPoly& zy = poly;
            const CPoly& zyp = it->second;
            double scale = std::max({zy.max_abs_coeff(), zyp.max_abs_coeff(),
                                     1e-4 * delta.max_abs_coeff()});
            for (int d = 0; d <= std::max(zy.degree(), zyp.degree()); ++d) {
                cplx rhs = sign * zyp.coeff(d) * omega_pow(n, d);
                CHECK(std::abs(zy.coeff(d) - rhs) <= 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("scaling the direction coefficient only scales the matrix") {
    std::mt19937 rng(61);
    auto A = testutil::random_rref(2, rng);
    ValidatedProblem v1 = validate(testutil::make_problem(2, A, cplx(1.0, 0.0)));
    ValidatedProblem v2 = validate(testutil::make_problem(2, A, std::polar(1.0, 0.7)));
    CharMatrix m1 = build_char_matrix(v1), m2 = build_char_matrix(v2);
    cplx rho(0.9, 0.4);
    cplx ratio = 0.0;
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) {
            cplx e1 = m1.entries[k][j].evaluate(rho), e2 = m2.entries[k][j].evaluate(rho);
            if (std::abs(e1) < 1e-12) continue;
            cplx r = e2 / e1;
            if (ratio == cplx(0.0))
                ratio = r;
            else
                CHECK(std::abs(r - ratio) < 1e-10);
        }
}

TEST_CASE("reduced boundary matrix: zero for simple conditions") {
    ValidatedProblem vp = validate(testutil::heat_dirichlet());
    ReducedBC rb = reduced_bc(vp);
    for (const auto& row : rb.Ahat)
        for (double v : row) CHECK(v == 0.0);
}

TEST_CASE("reduced boundary matrix pulls the coupling entries") {
    ValidatedProblem vp = validate(testutil::third_order_coupled(2.0, cplx(0.0, 1.0)));
    ReducedBC rb = reduced_bc(vp);
    CHECK(rb.Ahat[0][0] == -1.0);
    CHECK(rb.Ahat[1][1] == -1.0);
    CHECK(rb.Ahat[2][2] == 2.0);
    CHECK(rb.Ahat[0][1] == 0.0);

    // n = 2 pseudo-periodic: Ahat = diag(beta11, beta20)
    ValidatedProblem vq = validate(testutil::make_problem(
        2, testutil::pseudo_periodic_A({0.5, -2.0}), cplx(0.0, 1.0)));
    ReducedBC rq = reduced_bc(vq);
    CHECK(rq.Ahat[0][0] == 0.5);
    CHECK(rq.Ahat[1][1] == -2.0);
    CHECK(rq.Ahat[0][1] == 0.0);
    CHECK(rq.Ahat[1][0] == 0.0);
}

TEST_CASE("simple homogeneous conditions: upper Cramer numerators carry only data atoms") {
    ValidatedProblem vp = validate(testutil::heat_dirichlet());
    CramerSystem cs = cramer_system(vp);
    for (int j = cs.n + 1; j <= 2 * cs.n; ++j) {
        for (const auto& [key, poly] : cs.zeta[static_cast<size_t>(j - 1)].terms())
            CHECK(key.atom.kind == DataAtom::Kind::Hdata);
        for (const auto& [key, poly] : cs.eta[static_cast<size_t>(j - 1)].terms())
            CHECK(key.atom.kind == DataAtom::Kind::Hdata);
    }
}

TEST_CASE("homogeneous problems: eta is zeta with qT replacing q0") {
    std::mt19937 rng(67);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + trial % 2;
        cplx a = (n % 2 == 1) ? cplx(0.0, 1.0) : cplx(1.0, 0.0);
        ValidatedProblem vp =
            validate(testutil::make_problem(n, testutil::random_rref(n, rng), a));
        CramerSystem cs = cramer_system(vp);
        for (int j = 1; j <= 2 * n; ++j) {
            // drop Hdata terms from both, swap Q0 -> QT in zeta, compare
            ExpPolynomial zs(n), es(n);
            for (const auto& [key, poly] : cs.zeta[static_cast<size_t>(j - 1)].terms()) {
                if (key.atom.kind == DataAtom::Kind::Hdata) continue;
                DataAtom atom = key.atom;
                if (atom.kind == DataAtom::Kind::Q0) atom.kind = DataAtom::Kind::QT;
                zs.add_term(key.counts, atom, poly);
            }
            for (const auto& [key, poly] : cs.eta[static_cast<size_t>(j - 1)].terms()) {
                if (key.atom.kind == DataAtom::Kind::Hdata) continue;
                es.add_term(key.counts, key.atom, poly);
            }
            ExpPolynomial diff = zs - es;
            CHECK(diff.max_abs_coeff() <= 1e-12 * std::max(1.0, zs.max_abs_coeff()));
        }
    }
}

TEST_CASE("boundary-data identity holds exactly as exponential polynomials") {
    CHECK(data_identity_residual(validate(testutil::heat_dirichlet())) < 1e-12);
    CHECK(data_identity_residual(validate(testutil::third_order_coupled(2.0, cplx(0.0, 1.0)))) <
          1e-12);
    CHECK(data_identity_residual(validate(testutil::heat_robin())) < 1e-12);
    std::mt19937 rng(71);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 2 + trial % 3;
        cplx a = (n % 2 == 1) ? cplx(0.0, -1.0) : cplx(1.0, 0.0);
        ValidatedProblem vp =
            validate(testutil::make_problem(n, testutil::random_rref(n, rng), a));
        CHECK(data_identity_residual(vp) < 1e-11);
    }
}

TEST_CASE("matrix entries keep the row exponent structure") {
    std::mt19937 rng(73);
    ValidatedProblem vp = validate(testutil::make_problem(3, testutil::random_rref(3, rng),
                                                          cplx(0.0, 1.0)));
    CharMatrix m = build_char_matrix(vp);
    for (int k = 1; k <= 3; ++k)
        for (int j = 1; j <= 3; ++j)
            for (const auto& [key, poly] : m.entries[k - 1][j - 1].terms())
                CHECK((key.counts == 0 || key.counts == exp_nibble(k - 1)));
}
