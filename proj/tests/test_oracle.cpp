#include "doctest.h"

#include "test_util.hpp"
#include "utm/oracle.hpp"

using namespace utm;

TEST_CASE("catalog cases satisfy their own equations and compatibility") {
    for (const auto& name : oracle_case_names()) {
        OracleCase c = oracle_case(name);
        INFO(name);
        for (double t : {0.0, 0.3, 0.9})
            for (double x : {0.1, 0.6}) CHECK(c.pde_residual(x, t) < 1e-9);
        auto viol = validate_violations(c.problem);
        CHECK(viol.empty());
    }
}

TEST_CASE("reference values") {
    OracleCase hd = oracle_case("heat-dirichlet");
    CHECK(std::abs(reference_solution(hd, 0.5, 0.1) - std::exp(-pi * pi * 0.1)) < 1e-14);
    OracleCase hp = oracle_case("heat-periodic");
    cplx expect = std::exp(-4 * pi * pi * 0.1) * std::exp(cplx(0.0, 2 * pi * 0.25));
    CHECK(std::abs(reference_solution(hp, 0.25, 0.1) - expect) < 1e-13);
    OracleCase ai = oracle_case("airy-periodic-i");
    // single mode: modulus preserved by the dispersive evolution
    CHECK(std::abs(std::abs(reference_solution(ai, 0.3, 0.5)) - 1.0) < 1e-13);
}

TEST_CASE("method of lines matches the exact Dirichlet solution") {
    OracleCase c = oracle_case("heat-dirichlet");
    ValidatedProblem vp = validate(c.problem);
    MolSolution sol = mol_solver(vp, 2048, 2048, {0.1});
    double worst = 0.0;
    for (double x : {0.1, 0.3, 0.5, 0.7, 0.9})
        worst = std::max(worst, std::abs(sol.at(x, 0.1) - c.q(x, 0.1)));
    CHECK(worst <= 1e-6);
}

TEST_CASE("method of lines converges at second order") {
    OracleCase c = oracle_case("heat-dirichlet");
    ValidatedProblem vp = validate(c.problem);
    std::vector<double> errs;
    for (int nx : {80, 160, 320}) {
        MolSolution sol = mol_solver(vp, nx, nx, {0.1});
        double worst = 0.0;
        for (double x : {0.25, 0.5, 0.75})
            worst = std::max(worst, std::abs(sol.at(x, 0.1) - c.q(x, 0.1)));
        errs.push_back(worst);
    }
    double order1 = std::log2(errs[0] / errs[1]);
    double order2 = std::log2(errs[1] / errs[2]);
    CHECK(order1 >= 1.8);
    CHECK(order2 >= 1.8);
}

TEST_CASE("method of lines handles the Robin row") {
    ValidatedProblem vp = validate(testutil::heat_robin());
    const double s1 = 4.493409457909064;
    MolSolution sol = mol_solver(vp, 1024, 1024, {0.1});
    // exact: e^{-s1^2 t} sin(s1 (1 - x))
    double worst = 0.0;
    for (double x : {0.2, 0.5, 0.8}) {
        cplx expect = std::exp(-s1 * s1 * 0.1) * std::sin(s1 * (1.0 - x));
        worst = std::max(worst, std::abs(sol.at(x, 0.1) - expect));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("zero data give the zero solution") {
    ProblemSpec p = testutil::heat_dirichlet(FunctionSpec::poly({}));
    MolSolution sol = mol_solver(validate(p), 128, 128, {0.5});
    for (double x : {0.2, 0.8}) CHECK(std::abs(sol.at(x, 0.5)) < 1e-14);
}

TEST_CASE("final-time transform suppliers") {
    OracleCase c = oracle_case("heat-dirichlet");
    // exact oracle transform versus spline-sampled supplier
    std::vector<double> xs;
    std::vector<cplx> ys;
    for (int i = 0; i <= 256; ++i) {
        double x = i / 256.0;
        xs.push_back(x);
        ys.push_back(c.q(x, c.problem.T));
    }
    auto qT = qT_supplier(xs, ys);
    for (cplx rho : {cplx(1.0, 0.5), cplx(-2.0, 1.0), cplx(3.0, -0.5)})
        CHECK(std::abs(qT(rho) - c.qT_hat(rho)) < 1e-7);
    // heat-dirichlet: q(.,T) = e^{-pi^2 T} sin(pi x)
    cplx v = c.qT_hat(cplx(2.0, 0.0));
    cplx expect = std::exp(-pi * pi * c.problem.T) *
                  (pi * (1.0 + std::exp(cplx(0.0, -2.0))) / (pi * pi - 4.0));
    CHECK(std::abs(v - expect) < 1e-10);
}
