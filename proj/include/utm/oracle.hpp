#pragma once

#include "utm/problem.hpp"
#include "utm/solution.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace utm {

/// A catalog problem with a classical closed-form solution and analytic
/// boundary traces, used as an independent reference.
struct OracleCase {
    std::string name;
    ProblemSpec problem;
    /// exact solution and x-derivatives: q_dx(j, x, t) = d^j/dx^j q(x,t)
    std::function<cplx(int, double, double)> q_dx;
    std::function<cplx(double, double)> q_t;  // time derivative

    cplx q(double x, double t) const { return q_dx(0, x, t); }
    cplx f(int j, double t) const { return q_dx(j, 0.0, t); }  // left traces
    cplx g(int j, double t) const { return q_dx(j, 1.0, t); }  // right traces

    /// final-time transform, exact
    cplx qT_hat(cplx rho) const;

    /// PDE residual |q_t + a (-i d/dx)^n q| at (x,t)
    double pde_residual(double x, double t) const;
};

/// Catalog: heat-dirichlet, heat-neumann, heat-periodic, airy-periodic-i,
/// airy-periodic-mi, quartic-periodic. Throws on unknown names.
OracleCase oracle_case(const std::string& name);
std::vector<std::string> oracle_case_names();

cplx reference_solution(const OracleCase& c, double x, double t);

/// Method-of-lines reference for second-order problems (Re a > 0):
/// Crank-Nicolson in time, second-order central differences in space,
/// boundary rows enforcing A * traces = h at each step.
struct MolSolution {
    std::vector<double> x;                    // nx+1 nodes on [0,1]
    std::vector<double> tsnap;                // requested snapshot times (plus T)
    std::vector<std::vector<cplx>> snapshots; // one row per snapshot time
    std::vector<double> tgrid;                // all time levels
    std::vector<std::vector<cplx>> f_traces;  // f_j(t) samples, j = 0..1
    std::vector<std::vector<cplx>> g_traces;

    cplx at(double xq, double tq) const;  // bilinear lookup on snapshots
};

MolSolution mol_solver(const ValidatedProblem& p, int nx = 2048, int nt = 2048,
                       std::vector<double> snapshot_times = {});

/// Final-time transform from a sampled solution row.
std::function<cplx(cplx)> qT_supplier(const std::vector<double>& x,
                                      const std::vector<cplx>& qT);

} // namespace utm
