#include "utm/cli.hpp"

#include "utm/charmat.hpp"
#include "utm/jsonio.hpp"
#include "utm/oracle.hpp"
#include "utm/solution.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

namespace utm::cli {

namespace {

struct TolOverrides {
    std::vector<std::string> raw;
    double get(const std::string& key, double dflt) const {
        for (const auto& kv : raw) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) continue;
            if (kv.substr(0, eq) == key) return std::stod(kv.substr(eq + 1));
        }
        return dflt;
    }
};

DecayOptions decay_options(const TolOverrides& tol) {
    DecayOptions d;
    d.tol_margin = tol.get("margin", d.tol_margin);
    d.tol_violation = tol.get("violation", d.tol_violation);
    d.grid = static_cast<int>(tol.get("grid", d.grid));
    return d;
}

int cmd_classify(const std::string& path, const TolOverrides& tol, std::ostream& out) {
    ProblemSpec p = parse_problem_file(path);
    nlohmann::json j;
    auto viol = validate_violations(p, tol.get("compat", -1.0));
    j["valid"] = viol.empty();
    j["violations"] = nlohmann::json::array();
    for (const auto& v : viol)
        j["violations"].push_back(
            {{"condition", v.condition}, {"detail", v.detail}, {"residual", v.residual}});
    if (viol.empty()) {
        ValidatedProblem vp = validate(p);
        const auto& is = vp.isets();
        const auto& bc = vp.bc();
        j["index_sets"] = {{"hatJplus", is.hatJplus},   {"hatJminus", is.hatJminus},
                           {"tildeJplus", is.tildeJplus}, {"tildeJminus", is.tildeJminus},
                           {"J", is.Jseq},              {"Jprime", is.Jprimeseq}};
        j["classification"] = {{"homogeneous", bc.homogeneous}, {"coupled", bc.coupled},
                               {"robin", bc.robin},             {"simple", bc.simple},
                               {"C", bc.C},                     {"R", bc.R},
                               {"B1", bc.B1},                   {"B2", bc.B2},
                               {"B3", bc.B3}};
        if (!bc.robin) j["condition_51"] = condition_51(bc, p.n, p.a);
        j["condition_robin"] = condition_robin(bc, p.n, p.a);
        auto pp = pseudo_periodic_criterion(vp);
        if (pp) j["pseudo_periodic_illposed"] = *pp;
    }
    out << j.dump(2) << "\n";
    return 0;
}

int cmd_matrix(const std::string& path, std::ostream& out) {
    ValidatedProblem vp = validate(parse_problem_file(path));
    CharMatrix m = build_char_matrix(vp);
    for (int k = 1; k <= m.n; ++k)
        for (int j = 1; j <= m.n; ++j) {
            out << "A[" << k << "][" << j << "]:\n";
            out << m.entries[k - 1][j - 1].dump();
        }
    out << "Delta:\n" << char_det(m).dump();
    return 0;
}

int cmd_wellposed(const std::string& path, bool dual, const TolOverrides& tol,
                  std::ostream& out) {
    ValidatedProblem vp = validate(parse_problem_file(path), tol.get("compat", -1.0));
    DecayOptions dopt = decay_options(tol);
    CramerSystem cs = cramer_system(vp, tol.get("prune", 1e-11));
    Verdict v = decay_check(cs, sectors(vp.spec().n, vp.spec().a), dopt);
    if (dual) {
        Verdict v2 = decay_check(cs, sectors(vp.spec().n, -vp.spec().a), dopt);
        v.dual = std::make_shared<Verdict>(std::move(v2));
    }
    out << verdict_to_json(v, vp.spec().n).dump(2) << "\n";
    return 0;
}

int cmd_spectrum(const std::string& path, double radius, const std::string& csv_path,
                 const TolOverrides& tol, std::ostream& out) {
    ValidatedProblem vp = validate(parse_problem_file(path));
    CramerSystem cs = cramer_system(vp, tol.get("prune", 1e-11));
    double R = radius > 0 ? radius : 12.0 * vp.spec().n;
    Spectrum sp = find_zeros(cs.Delta, R);
    IndicatorDiagram d = indicator_diagram(cs.Delta);
    bool counting = false;
    if (!vp.bc().robin) counting = condition_51(vp.bc(), vp.spec().n, vp.spec().a);
    if (!d.degenerate) sp.rays = asymptotic_rays(cs.Delta, d, vp.spec().n, counting, R);
    out << spectrum_to_json(sp).dump(2) << "\n";
    if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        f << spectrum_to_csv(sp);
    }
    return 0;
}

std::pair<int, int> parse_grid(const std::string& g) {
    auto x = g.find('x');
    if (x == std::string::npos) throw spec_error("grid must look like 5x3");
    return {std::stoi(g.substr(0, x)), std::stoi(g.substr(x + 1))};
}

int cmd_solve(const std::string& path, const std::string& rep, const std::string& grid,
              double radius, const std::string& out_path, const TolOverrides& tol,
              std::ostream& out) {
    ValidatedProblem vp = validate(parse_problem_file(path), tol.get("compat", -1.0));
    SolveOptions so;
    so.radius = radius;
    so.tol_series = tol.get("series", so.tol_series);
    so.tol_int = tol.get("int", so.tol_int);
    so.decay = decay_options(tol);
    Solver solver(vp, so);
    auto [nx, nt] = parse_grid(grid);
    std::string csv = "x,t,re,im,error_estimate\n";
    char buf[160];
    for (int i = 0; i < nx; ++i) {
        double x = nx > 1 ? static_cast<double>(i) / (nx - 1) : 0.5;
        for (int j = 1; j <= nt; ++j) {
            double t = vp.spec().T * j / nt;
            SolveResult r = rep == "series" ? solver.series(x, t) : solver.integral(x, t);
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.3g\n", x, t,
                          r.value.real(), r.value.imag(), r.tail_estimate);
            csv += buf;
        }
    }
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << csv;
    } else {
        out << csv;
    }
    return 0;
}

int cmd_verify(const std::string& path, const TolOverrides& tol, std::ostream& out) {
    ValidatedProblem vp = validate(parse_problem_file(path), tol.get("compat", -1.0));
    const int n = vp.spec().n;
    CramerSystem cs = cramer_system(vp);
    int failures = 0;
    auto report = [&](const std::string& name, bool pass, double value) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s %s: %.3g\n", pass ? "PASS" : "FAIL", name.c_str(),
                      value);
        out << buf;
        if (!pass) ++failures;
    };

    // rotation symmetry of the determinant
    double sym = verify_symmetry(cs.Delta);
    report("delta-rotation-symmetry", sym <= 1e-10, sym);

    // row rotation identity of the matrix entries
    {
        CharMatrix m = build_char_matrix(vp);
        std::mt19937 rng(2027);
        std::uniform_real_distribution<double> ur(-2.0, 2.0);
        double worst = 0.0;
        for (int s = 0; s < 24; ++s) {
            cplx rho(ur(rng), ur(rng));
            for (int k = 1; k <= n; ++k)
                for (int j = 1; j <= n; ++j) {
                    cplx lhs = m.entries[k - 1][j - 1].evaluate(omega(n) * rho);
                    cplx rhs = m.entries[k % n][j - 1].evaluate(rho);
                    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
                }
        }
        report("entry-row-rotation", worst <= 1e-10, worst);
    }

    // coefficient rotation identity Z_Y(rho) = (-1)^{n-1} Z_{Y'}(omega rho)
    {
        double worst = 0.0;
        double sign = (n % 2 == 1) ? 1.0 : -1.0;
        for (const auto& [key, poly] : cs.Delta.terms()) {
            // rotated key: y -> y-1 mod n (the shifted-set form of the identity)
            ExpCounts rot = 0;
            for (int y = 0; y < n; ++y) {
                int c = exp_count_of(key.counts, y);
                if (c) rot += static_cast<ExpCounts>(c) * exp_nibble((y + n - 1) % n);
            }
            auto it = cs.Delta.terms().find(ExponentKey{rot, DataAtom::none()});
            if (it == cs.Delta.terms().end()) {
                worst = 1.0;
                break;
            }
            // compare Z_Y(rho) with sign * Z_{Y'}(omega rho) coefficientwise
            const CPoly& zy = poly;
            const CPoly& zyp = it->second;
            int deg = std::max(zy.degree(), zyp.degree());
            double scale = std::max({zy.max_abs_coeff(), zyp.max_abs_coeff(),
                                     1e-4 * cs.Delta.max_abs_coeff(), 1e-300});
            for (int d = 0; d <= deg; ++d) {
                cplx rhs = sign * zyp.coeff(d) * omega_pow(n, d);
                worst = std::max(worst, std::abs(zy.coeff(d) - rhs) / scale);
            }
        }
        report("coefficient-rotation-symmetry", worst <= 1e-12, worst);
    }

    // Lemma-style data identity at random points:
    // sum_{J+} zeta - e^{-i rho} sum_{J-} zeta = Delta q0^ + (1 - Delta) H
    {
        DataEvaluator de = make_data_evaluator(vp);
        AtomEvaluator ev = de.atoms();
        std::mt19937 rng(90210);
        std::uniform_real_distribution<double> ur(-2.5, 2.5);
        double worst = 0.0;
        for (int s = 0; s < 40; ++s) {
            cplx rho(ur(rng), ur(rng));
            cplx lhs = 0.0;
            for (int j : cs.Jplus) lhs += cs.zeta[j - 1].evaluate(rho, ev);
            cplx sm = 0.0;
            for (int j : cs.Jminus) sm += cs.zeta[j - 1].evaluate(rho, ev);
            lhs -= std::exp(cplx(0.0, -1.0) * rho) * sm;
            cplx D = cs.Delta.evaluate(rho);
            cplx H = H_of_rho(vp, de, rho);
            cplx rhs = D * de.q0hat(rho) + (1.0 - D) * H;
            worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
        }
        report("boundary-data-identity", worst <= 1e-9, worst);
    }

    // t-transform invariance under rho -> omega rho
    {
        DataEvaluator de = make_data_evaluator(vp);
        std::mt19937 rng(5150);
        std::uniform_real_distribution<double> ur(-2.0, 2.0);
        double worst = 0.0;
        for (int s = 0; s < 20; ++s) {
            cplx rho(ur(rng), ur(rng));
            for (int j = 1; j <= n; ++j) {
                cplx d = transform_h(de, j, omega(n) * rho) - transform_h(de, j, rho);
                worst = std::max(worst, std::abs(d));
            }
        }
        report("t-transform-rotation-invariance", worst <= 1e-12, worst);
    }

    return failures == 0 ? 0 : 1;
}

int cmd_oracle(const std::string& name, const std::string& grid, const std::string& out_path,
               std::ostream& out) {
    OracleCase c = oracle_case(name);
    auto [nx, nt] = parse_grid(grid);
    std::string csv = "x,t,re,im,error_estimate\n";
    char buf[160];
    for (int i = 0; i < nx; ++i) {
        double x = nx > 1 ? static_cast<double>(i) / (nx - 1) : 0.5;
        for (int j = 1; j <= nt; ++j) {
            double t = c.problem.T * j / nt;
            cplx v = reference_solution(c, x, t);
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g,%.3g\n", x, t, v.real(),
                          v.imag(), 0.0);
            csv += buf;
        }
    }
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << csv;
    } else {
        out << csv;
    }
    return 0;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"utm: well-posedness, spectra and solutions of two-point "
                 "initial-boundary value problems for linear evolution equations"};
    app.require_subcommand(1);
    TolOverrides tol;

    std::string spec_path, grid = "5x3", rep = "series", csv_path, out_path, case_name;
    double radius = 0.0;
    bool dual = false;

    auto add_tol = [&](CLI::App* cmd) {
        cmd->add_option("--tol", tol.raw, "tolerance overrides key=value (compat, margin, "
                                          "violation, grid, prune, series, int)");
    };

    auto* c_classify = app.add_subcommand("classify", "validate and classify a problem");
    c_classify->add_option("spec", spec_path, "problem JSON")->required();
    add_tol(c_classify);

    auto* c_matrix = app.add_subcommand("matrix", "dump the characteristic matrix and Delta");
    c_matrix->add_option("spec", spec_path)->required();

    auto* c_well = app.add_subcommand("wellposed", "decide well-posedness");
    c_well->add_option("spec", spec_path)->required();
    c_well->add_flag("--dual", dual, "also report the verdict for a -> -a");
    add_tol(c_well);

    auto* c_spec = app.add_subcommand("spectrum", "locate the PDE discrete spectrum");
    c_spec->add_option("spec", spec_path)->required();
    c_spec->add_option("--radius", radius, "search radius (default 12 n)");
    c_spec->add_option("--csv", csv_path, "also write zeros as CSV");
    add_tol(c_spec);

    auto* c_solve = app.add_subcommand("solve", "evaluate the solution on a grid");
    c_solve->add_option("spec", spec_path)->required();
    c_solve->add_option("--rep", rep, "series|integral")
        ->check(CLI::IsMember({"series", "integral"}));
    c_solve->add_option("--grid", grid, "NXxNT evaluation grid (default 5x3)");
    c_solve->add_option("--radius", radius, "spectrum truncation radius");
    c_solve->add_option("--out", out_path, "write CSV here instead of stdout");
    add_tol(c_solve);

    auto* c_verify = app.add_subcommand("verify", "run the residual identity suite");
    c_verify->add_option("spec", spec_path)->required();
    add_tol(c_verify);

    auto* c_oracle = app.add_subcommand("oracle", "reference solutions for catalog problems");
    c_oracle->add_option("case", case_name, "catalog case name")->required();
    c_oracle->add_option("--grid", grid, "NXxNT evaluation grid");
    c_oracle->add_option("--out", out_path, "write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::stringstream ss;
        int code = app.exit(e, ss, ss);
        (code == 0 ? out : err) << ss.str();
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_classify->parsed()) return cmd_classify(spec_path, tol, out);
        if (c_matrix->parsed()) return cmd_matrix(spec_path, out);
        if (c_well->parsed()) return cmd_wellposed(spec_path, dual, tol, out);
        if (c_spec->parsed()) return cmd_spectrum(spec_path, radius, csv_path, tol, out);
        if (c_solve->parsed()) return cmd_solve(spec_path, rep, grid, radius, out_path, tol, out);
        if (c_verify->parsed()) return cmd_verify(spec_path, tol, out);
        if (c_oracle->parsed()) return cmd_oracle(case_name, grid, out_path, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace utm::cli
