#include "doctest.h"

#include "test_util.hpp"
#include "utm/exppoly.hpp"

#include <random>

using namespace utm;
using doctest::Approx;

namespace {

ExpPolynomial random_exppoly(int n, uint32_t allowed_mask, std::mt19937& rng, bool atoms = false) {
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    std::uniform_int_distribution<int> ui(0, 3);
    ExpPolynomial f(n);
    for (int t = 0; t < 4; ++t) {
        uint32_t mask = 0;
        for (int y = 0; y < n; ++y)
            if ((allowed_mask & (1u << y)) && ui(rng) == 0) mask |= 1u << y;
        std::vector<cplx> c(static_cast<size_t>(ui(rng)) + 1);
        for (auto& v : c) v = cplx(ur(rng), ur(rng));
        DataAtom atom = DataAtom::none();
        if (atoms && ui(rng) == 0) atom = DataAtom::q0(ui(rng) % n);
        f.add_term(counts_from_mask(mask), atom, CPoly(std::move(c)));
    }
    return f;
}

} // namespace

TEST_CASE("cpoly basics") {
    CPoly p({1.0, 2.0, 3.0});
    CHECK(p.degree() == 2);
    CHECK(p.eval(2.0) == cplx(17.0, 0.0));
    CHECK(p.derivative().coeffs() == std::vector<cplx>{2.0, 6.0});
    CPoly z = p - p;
    CHECK(z.is_zero());
    CPoly q = CPoly::monomial(cplx(0.0, 1.0), 3);
    CHECK((p * q).degree() == 5);
}

TEST_CASE("additive identity and cancellation") {
    ExpPolynomial f(3);
    f.add_term(counts_from_mask(1u), DataAtom::none(), CPoly::constant(1.0));  // e^{-i rho}
    ExpPolynomial zero(3);
    CHECK((f + zero).term_count() == 1);
    ExpPolynomial g = f;
    g *= cplx(-1.0);
    CHECK((f + g).is_zero());
}

TEST_CASE("evaluate simple exponentials") {
    ExpPolynomial f(2);
    f.add_term(counts_from_mask(1u), DataAtom::none(), CPoly::constant(1.0));  // e^{-i rho}
    CHECK(std::abs(f.evaluate(pi) - cplx(-1.0, 0.0)) < 1e-14);
    ExpPolynomial z(2);
    CHECK(z.evaluate(cplx(0.3, 0.7)) == cplx(0.0));
}

TEST_CASE("evaluation is a ring homomorphism") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> ur(-1.5, 1.5);
    for (int trial = 0; trial < 40; ++trial) {
        // disjoint index support so products stay collision-free
        ExpPolynomial f = random_exppoly(4, 0b0011u, rng);
        ExpPolynomial g = random_exppoly(4, 0b1100u, rng);
        ExpPolynomial h = random_exppoly(4, 0b0110u, rng);
        ExpPolynomial combo = mul(f, g) + h;
        cplx rho(ur(rng), ur(rng));
        cplx direct = combo.evaluate(rho);
        cplx expect = f.evaluate(rho) * g.evaluate(rho) + h.evaluate(rho);
        CHECK(std::abs(direct - expect) <= 1e-12 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("strict product rejects exponent collisions") {
    ExpPolynomial f(2);
    f.add_term(counts_from_mask(1u), DataAtom::none(), CPoly::constant(1.0));
    CHECK_THROWS_AS((void)mul_strict(f, f), structural_error);
    // the free product accumulates counts instead
    ExpPolynomial p2 = mul(f, f);
    CHECK(p2.term_count() == 1);
    CHECK(std::abs(p2.evaluate(1.0) - std::exp(cplx(0.0, -2.0))) < 1e-14);
}

TEST_CASE("atoms are linear: product of two atoms throws") {
    ExpPolynomial f(2);
    f.add_term(0, DataAtom::q0(0), CPoly::constant(1.0));
    CHECK_THROWS_AS((void)mul(f, f), structural_error);
    CHECK_THROWS_AS((void)f.evaluate(1.0), structural_error);
}

TEST_CASE("determinant against the LU oracle") {
    ExpPolynomial e(2);
    e.add_term(counts_from_mask(1u), DataAtom::none(), CPoly::constant(cplx(0.0, 2.0)));
    auto d1 = ExpPolynomial::det({{e}});
    CHECK(std::abs(d1.evaluate(0.7) - e.evaluate(0.7)) < 1e-14);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + trial % 3;
        // row-structured matrix: row k uses keys {empty, {k-1}}
        std::vector<std::vector<ExpPolynomial>> m(static_cast<size_t>(n),
                                                  std::vector<ExpPolynomial>(static_cast<size_t>(n),
                                                                             ExpPolynomial(n)));
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) {
                ExpPolynomial entry(n);
                std::vector<cplx> c1{cplx(ur(rng), ur(rng)), cplx(ur(rng), ur(rng))};
                std::vector<cplx> c2{cplx(ur(rng), ur(rng))};
                entry.add_term(0, DataAtom::none(), CPoly(c1));
                entry.add_term(counts_from_mask(1u << k), DataAtom::none(), CPoly(c2));
                m[static_cast<size_t>(k)][static_cast<size_t>(j)] = entry;
            }
        ExpPolynomial d = ExpPolynomial::det(m);
        cplx rho(ur(rng), ur(rng));
        std::vector<std::vector<cplx>> num(static_cast<size_t>(n),
                                           std::vector<cplx>(static_cast<size_t>(n)));
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                num[static_cast<size_t>(k)][static_cast<size_t>(j)] =
                    m[static_cast<size_t>(k)][static_cast<size_t>(j)].evaluate(rho);
        cplx expect = testutil::lu_det(num);
        CHECK(std::abs(d.evaluate(rho) - expect) <= 1e-10 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("dominance: single term is trivially dominant") {
    ExpPolynomial f(3);
    f.add_term(counts_from_mask(0b011u), DataAtom::none(), CPoly::constant(1.0));
    auto dom = dominant_exponent(f, 0.0, pi / 3);
    CHECK(dom.strict);
    REQUIRE(dom.maximizers.size() == 1);
    CHECK(dom.maximizers[0] == counts_from_mask(0b011u));
}

TEST_CASE("dominance on the diagonal heat sector") {
    // keys {0} (s=1) and {1} (s=-1): on (pi/4, 3pi/4), Im(e^{i phi}) > 0
    ExpPolynomial f(2);
    f.add_term(counts_from_mask(0b01u), DataAtom::none(), CPoly::constant(1.0));
    f.add_term(counts_from_mask(0b10u), DataAtom::none(), CPoly::constant(-1.0));
    auto dom = dominant_exponent(f, pi / 4, 3 * pi / 4);
    CHECK(dom.strict);
    REQUIRE(dom.maximizers.size() == 1);
    CHECK(dom.maximizers[0] == counts_from_mask(0b01u));
    CHECK(dom.min_margin > 1.0);  // 2 sin(pi/4) at the ends
}

TEST_CASE("dominance invariant under polynomial factors") {
    std::mt19937 rng(11);
    ExpPolynomial f = random_exppoly(3, 0b111u, rng);
    if (f.is_zero()) return;
    auto dom1 = dominant_exponent(f, 0.1, 0.9);
    ExpPolynomial g = f.times_poly(CPoly({cplx(1.0, 2.0), cplx(0.0, 1.0), 3.0}));
    auto dom2 = dominant_exponent(g, 0.1, 0.9);
    CHECK(dom1.maximizers == dom2.maximizers);
    CHECK(dom1.strict == dom2.strict);
}

TEST_CASE("derivative matches finite differences") {
    std::mt19937 rng(13);
    ExpPolynomial f = random_exppoly(3, 0b111u, rng);
    ExpPolynomial fp = f.derivative();
    cplx rho(0.3, -0.2);
    const double h = 1e-6;
    cplx fd = (f.evaluate(rho + h) - f.evaluate(rho - h)) / (2.0 * h);
    CHECK(std::abs(fp.evaluate(rho) - fd) < 1e-7 * (1.0 + std::abs(fd)));
}

TEST_CASE("scaled evaluation agrees with direct evaluation") {
    std::mt19937 rng(17);
    ExpPolynomial f = random_exppoly(4, 0b1111u, rng);
    if (f.is_zero()) return;
    cplx rho(1.2, 2.3);
    auto [w, kappa] = f.evaluate_scaled(rho);
    cplx direct = f.evaluate(rho);
    CHECK(std::abs(w * std::exp(kappa) - direct) <= 1e-12 * (1.0 + std::abs(direct)));
}

TEST_CASE("degree-wise relative pruning removes roundoff-cancelled terms") {
    ExpPolynomial f(2);
    f.add_term(0, DataAtom::none(), CPoly({1.0}));
    f.add_term(counts_from_mask(1u), DataAtom::none(), CPoly({1e-17}));
    ExpPolynomial p = f.pruned_rel(1e-11);
    CHECK(p.term_count() == 1);
}

TEST_CASE("debug dump format and lexicographic order") {
    ExpPolynomial f(3);
    f.add_term(counts_from_mask(0b010u), DataAtom::none(), CPoly::constant(2.0));  // {1}
    f.add_term(counts_from_mask(0b011u), DataAtom::none(), CPoly::constant(1.0));  // {0,1}
    f.add_term(0, DataAtom::q0(2), CPoly({cplx(0.0, 1.0), 1.0}));                  // {}
    std::string d = f.dump();
    const char* expect =
        "Y={} sY=<0,0> atom=q0(2) poly=[(0,1),(1,0)]\n"
        "Y={0,1} sY=<0.5,0.866025403784> atom=none poly=[(1,0)]\n"
        "Y={1} sY=<-0.5,0.866025403784> atom=none poly=[(2,0)]\n";
    CHECK(d == expect);
}
