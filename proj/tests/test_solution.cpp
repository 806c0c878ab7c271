#include "doctest.h"

#include "test_util.hpp"
#include "utm/oracle.hpp"
#include "utm/solution.hpp"

#include <random>

using namespace utm;

namespace {

cplx sin_mode_q0hat(cplx rho) {
    // \int_0^1 e^{-i rho y} sin(pi y) dy = pi (1 + e^{-i rho}) / (pi^2 - rho^2)
    cplx num = pi * (1.0 + std::exp(cplx(0.0, -1.0) * rho));
    cplx den = pi * pi - rho * rho;
    if (std::abs(den) < 1e-6) {
        cplx rr = std::abs(rho - pi) < std::abs(rho + pi) ? pi : -pi;
        // L'Hopital: pi * (-i e^{-i rho}) / (-2 rho)
        return pi * (cplx(0.0, -1.0) * std::exp(cplx(0.0, -1.0) * rr)) / (-2.0 * rr);
    }
    return num / den;
}

} // namespace

TEST_CASE("q0 transform closed forms against quadrature") {
    ValidatedProblem vp = validate(testutil::heat_dirichlet());
    DataEvaluator de = make_data_evaluator(vp);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ur(-4.0, 4.0);
    for (int s = 0; s < 25; ++s) {
        cplx rho(ur(rng), ur(rng));
        cplx direct = de.q0hat(rho);
        CHECK(std::abs(direct - sin_mode_q0hat(rho)) < 1e-11 * (1.0 + std::abs(direct)));
        cplx quad = integrate_gk(
            [&](double y) {
                return std::exp(cplx(0.0, -1.0) * rho * y) * vp.spec().q0.eval(y);
            },
            0.0, 1.0, 1e-13);
        CHECK(std::abs(direct - quad) < 1e-10 * (1.0 + std::abs(direct)));
    }
    CHECK(std::abs(de.q0hat(pi) - cplx(0.0, -0.5)) < 1e-12);
    CHECK(std::abs(de.q0hat(-pi) - cplx(0.0, 0.5)) < 1e-12);
}

TEST_CASE("polynomial and spline transforms against quadrature") {
    FunctionSpec p = FunctionSpec::poly({cplx(0.3, 0.1), 1.0, cplx(0.0, -2.0), 0.5});
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ur(-5.0, 5.0);
    for (int s = 0; s < 15; ++s) {
        cplx w(ur(rng), ur(rng));
        cplx direct = p.weighted_integral(w, 0.0, 1.0);
        cplx quad =
            integrate_gk([&](double y) { return std::exp(w * y) * p.eval(y); }, 0.0, 1.0, 1e-13);
        CHECK(std::abs(direct - quad) < 1e-10 * (1.0 + std::abs(direct)));
    }
    std::vector<double> xs;
    std::vector<cplx> ys;
    for (int i = 0; i <= 64; ++i) {
        double x = i / 64.0;
        xs.push_back(x);
        ys.push_back(std::sin(pi * x));
    }
    FunctionSpec spl = FunctionSpec::samples(xs, ys);
    for (int s = 0; s < 8; ++s) {
        cplx rho(ur(rng), ur(rng));
        cplx direct = spl.weighted_integral(cplx(0.0, -1.0) * rho, 0.0, 1.0);
        CHECK(std::abs(direct - sin_mode_q0hat(rho)) < 1e-6);
    }
}

TEST_CASE("t-transform rotation invariance") {
    ProblemSpec p = testutil::heat_dirichlet();
    p.h[0] = FunctionSpec::poly({0.0, 0.5});
    p.h[1] = FunctionSpec::poly({0.0, 0.0, 1.0});
    ValidatedProblem vp = validate(p);
    DataEvaluator de = make_data_evaluator(vp);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    for (int s = 0; s < 12; ++s) {
        cplx rho(ur(rng), ur(rng));
        for (int j = 1; j <= 2; ++j) {
            cplx d = transform_h(de, j, omega(2) * rho) - transform_h(de, j, rho);
            CHECK(std::abs(d) < 1e-12);
        }
    }
}

TEST_CASE("H vanishes identically for homogeneous data") {
    ValidatedProblem vp = validate(testutil::heat_dirichlet());
    DataEvaluator de = make_data_evaluator(vp);
    CHECK(H_of_rho(vp, de, cplx(0.7, 0.3)) == cplx(0.0));
    CHECK(std::abs(H_symbolic(vp).evaluate(cplx(0.7, 0.3), de.atoms())) < 1e-14);
}

TEST_CASE("H for inhomogeneous Dirichlet matches the hand formula") {
    ProblemSpec p = testutil::heat_dirichlet(FunctionSpec::poly({}));
    p.h[0] = FunctionSpec::poly({0.0, 1.0});
    p.h[1] = FunctionSpec::poly({0.0, 0.0, 2.0});
    ValidatedProblem vp = validate(p);
    DataEvaluator de = make_data_evaluator(vp);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    for (int s = 0; s < 10; ++s) {
        cplx rho(ur(rng), ur(rng));
        // H = c0(rho) (h1~ - e^{-i rho} h2~), c0 = i a rho with a = 1
        cplx expect = cplx(0.0, 1.0) * rho *
                      (transform_h(de, 1, rho) -
                       std::exp(cplx(0.0, -1.0) * rho) * transform_h(de, 2, rho));
        cplx got = H_of_rho(vp, de, rho);
        CHECK(std::abs(got - expect) < 1e-11 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("homogeneous Dirichlet heat series reproduces separation of variables") {
    OracleCase oc = oracle_case("heat-dirichlet");
    Solver solver(validate(oc.problem));
    for (double t : {0.05, 0.3, 1.0}) {
        for (double x : {0.1, 0.5, 0.85}) {
            SolveResult r = solver.series(x, t);
            cplx expect = std::exp(-pi * pi * t) * std::sin(pi * x);
            CHECK(std::abs(r.value - expect) < 1e-6);
        }
    }
}

TEST_CASE("residues at the Fourier modes and the epsilon-circle cross-check") {
    OracleCase oc = oracle_case("heat-dirichlet");
    Solver solver(validate(oc.problem));
    const Spectrum& sp = solver.spectrum();
    int kpi = -1;
    for (size_t k = 0; k < sp.zeros.size(); ++k)
        if (std::abs(sp.zeros[k].sigma - cplx(pi, 0.0)) < 1e-8) kpi = static_cast<int>(k);
    REQUIRE(kpi >= 0);
    double x = 0.3, t = 0.2;
    cplx res = solver.residue_at(kpi, true, x, t);
    DataEvaluator& de = solver.data();
    AtomEvaluator ev = de.atoms();
    const CramerSystem& cs = solver.cramer();
    auto integrand = [&](cplx rho) {
        cplx num = 0.0;
        for (int j : cs.Jplus) num += cs.zeta[static_cast<size_t>(j - 1)].evaluate(rho, ev);
        return std::exp(cplx(0.0, 1.0) * rho * x - a_rho_n(cs.a, rho, cs.n) * t) * num /
               cs.Delta.evaluate(rho);
    };
    cplx circ = circle_mean(integrand, cplx(pi, 0.0), 0.4);
    CHECK(std::abs(res - circ) < 1e-8 * (1.0 + std::abs(circ)));
    for (size_t k = 0; k < sp.zeros.size(); ++k) {
        if (std::abs(std::abs(sp.zeros[k].sigma) - pi) < 1e-6) continue;
        cplx r = solver.residue_at(static_cast<int>(k), true, x, t);
        CHECK(std::abs(r) < 1e-10);
    }
}

TEST_CASE("entire combination stays bounded near spectrum points") {
    OracleCase oc = oracle_case("heat-dirichlet");
    Solver solver(validate(oc.problem));
    solver.data().qThat = [oc](cplx rho) { return oc.qT_hat(rho); };
    const Spectrum& sp = solver.spectrum();
    const CramerSystem& cs = solver.cramer();
    AtomEvaluator ev = solver.data().atoms();
    auto fG = [&](cplx rho) {
        cplx num = 0.0;
        cplx expT = std::exp(a_rho_n(cs.a, rho, cs.n) * cs.T);
        for (int j : cs.Jplus) {
            num += cs.zeta[static_cast<size_t>(j - 1)].evaluate(rho, ev);
            num -= expT * cs.eta[static_cast<size_t>(j - 1)].evaluate(rho, ev);
        }
        return num / cs.Delta.evaluate(rho);
    };
    for (int k = 0; k < 3; ++k) {
        cplx s = sp.zeros[static_cast<size_t>(k)].sigma;
        double ref = std::abs(fG(s + 0.1));
        for (cplx d : {cplx(1e-3, 0), cplx(0, 1e-3), cplx(-1e-3, 0), cplx(0, -1e-3)})
            CHECK(std::abs(fG(s + d)) <= 1e3 * (ref + 1e-12));
        cplx circ = circle_mean(fG, s, 0.25);
        double scale = std::max(1.0, ref);
        CHECK(std::abs(circ) < 1e-8 * scale);
    }
}

TEST_CASE("global relation residual with oracle data and a negative control") {
    OracleCase oc = oracle_case("heat-dirichlet");
    ValidatedProblem vp = validate(oc.problem);
    std::vector<std::function<cplx(double)>> f, g;
    for (int j = 0; j < 2; ++j) {
        f.push_back([oc, j](double t) { return oc.f(j, t); });
        g.push_back([oc, j](double t) { return oc.g(j, t); });
    }
    auto qT = [oc](cplx rho) { return oc.qT_hat(rho); };
    double r = global_relation_residual(vp, f, g, qT, 30, 5.0);
    CHECK(r < 1e-6);
    ProblemSpec zp = testutil::heat_dirichlet(FunctionSpec::poly({}));
    ValidatedProblem vz = validate(zp);
    std::vector<std::function<cplx(double)>> z2(2, [](double) { return cplx(0.0); });
    double rz = global_relation_residual(vz, z2, z2, [](cplx) { return cplx(0.0); }, 10, 5.0);
    CHECK(rz == 0.0);
    auto qTbad = [oc](cplx rho) { return 1.01 * oc.qT_hat(rho); };
    double rb = global_relation_residual(vp, f, g, qTbad, 30, 5.0);
    CHECK(rb > 1e-4);
}

TEST_CASE("implicit representation reproduces the oracle at interior points") {
    OracleCase oc = oracle_case("heat-dirichlet");
    Solver solver(validate(oc.problem));
    solver.data().qThat = [oc](cplx rho) { return oc.qT_hat(rho); };
    for (double t : {0.2, 0.6}) {
        for (double x : {0.35, 0.7}) {
            cplx got = solver.implicit_rep(x, t);
            cplx expect = oc.q(x, t);
            CHECK(std::abs(got - expect) < 1e-5);
        }
    }
}

TEST_CASE("boundary-function recovery for the Dirichlet problem") {
    OracleCase oc = oracle_case("heat-dirichlet");
    Solver solver(validate(oc.problem));
    solver.data().qThat = [oc](cplx rho) { return oc.qT_hat(rho); };
    double t = 0.25;
    // g1(t) = d/dx q(1,t) = pi e^{-pi^2 t} cos(pi) = -pi e^{-pi^2 t}
    cplx g1 = solver.recover_boundary(1, false, t);
    cplx expect = -pi * std::exp(-pi * pi * t);
    CHECK(std::abs(g1 - expect) < 1e-4);
    cplx f0 = solver.recover_boundary(0, true, t);
    CHECK(std::abs(f0) < 1e-4);
}

TEST_CASE("series and integral representations agree") {
    OracleCase oc = oracle_case("heat-dirichlet");
    Solver solver(validate(oc.problem));
    std::mt19937 rng(2029);
    std::uniform_real_distribution<double> ux(0.05, 0.95), ut(0.05, 1.0);
    for (int s = 0; s < 5; ++s) {
        double x = ux(rng), t = ut(rng);
        SolveResult a = solver.series(x, t);
        SolveResult b = solver.integral(x, t);
        CHECK(std::abs(a.value - b.value) < 1e-6);
    }
}

TEST_CASE("series is refused when the opposite direction is ill-posed") {
    ProblemSpec p = testutil::third_order_coupled(0.5, cplx(0.0, 1.0), FunctionSpec::poly({}));
    Solver solver{validate(p)};
    CHECK(solver.verdict().status == Wellposedness::WellPosed);
    CHECK(solver.dual_verdict().status == Wellposedness::IllPosed);
    CHECK_THROWS_WITH_AS((void)solver.series(0.5, 0.2), doctest::Contains("integral"), spec_error);
    SolveResult r = solver.integral(0.5, 0.2);
    CHECK(std::isfinite(r.value.real()));
    CHECK(std::isfinite(r.value.imag()));
}

TEST_CASE("manufactured inhomogeneous problem for a = i") {
    // q(x,t) = e^{i kappa x - a kappa^2 t} with kappa = 1, a = i, Dirichlet
    // data read off the exact solution; exercises the H term end to end
    const double kappa = 1.0;
    const cplx a(0.0, 1.0);
    const cplx lam = -a * kappa * kappa;
    ProblemSpec p;
    p.n = 2;
    p.a = a;
    p.A = {{0, 0, 1, 0}, {0, 0, 0, 1}};
    p.T = 1.0;
    p.q0 = FunctionSpec::expsum({{cplx(0.0, kappa), 1.0}});
    p.h.push_back(FunctionSpec::expsum({{lam, 1.0}}));
    p.h.push_back(FunctionSpec::expsum({{lam, std::exp(cplx(0.0, kappa))}}));
    SolveOptions so;
    so.radius = 150.0;
    so.tol_series = 1e-3;
    Solver solver(validate(p), so);
    double x = 0.4, t = 0.3;
    SolveResult r = solver.series(x, t);
    cplx expect = std::exp(cplx(0.0, kappa) * x + lam * t);
    // inhomogeneous data converge at the contour-truncation rate
    CHECK(std::abs(r.value - expect) < 5e-2);
    bool corrected = false;
    for (const auto& w : r.warnings)
        corrected = corrected || w.find("correction") != std::string::npos;
    CHECK(corrected);
}
