#include "utm/solution.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace utm {

AtomEvaluator DataEvaluator::atoms() const {
    AtomEvaluator ev;
    const int nn = n;
    auto q0 = q0hat;
    auto qT = qThat;
    auto ht = htilde;
    ev.q0hat = [q0, nn](int z, cplx rho) { return q0(omega_pow(nn, z) * rho); };
    if (qT) ev.qThat = [qT, nn](int z, cplx rho) { return qT(omega_pow(nn, z) * rho); };
    ev.htilde = [ht](int j, cplx rho) {
        return ht.at(static_cast<size_t>(j - 1))(rho);
    };
    return ev;
}

DataEvaluator make_data_evaluator(const ValidatedProblem& p) {
    DataEvaluator de;
    de.n = p.spec().n;
    de.a = p.spec().a;
    de.T = p.spec().T;
    FunctionSpec q0 = p.spec().q0;
    de.q0hat = [q0](cplx rho) { return q0.weighted_integral(cplx(0.0, -1.0) * rho, 0.0, 1.0); };
    const int n = de.n;
    const cplx a = de.a;
    const double T = de.T;
    for (int j = 1; j <= n; ++j) {
        FunctionSpec hj = p.spec().h[static_cast<size_t>(j - 1)];
        de.htilde.push_back(
            [hj, a, n, T](cplx rho) { return hj.weighted_integral(a_rho_n(a, rho, n), 0.0, T); });
    }
    return de;
}

cplx transform_q0(const DataEvaluator& de, cplx rho) { return de.q0hat(rho); }

cplx transform_h(const DataEvaluator& de, int j, cplx rho) {
    return de.htilde.at(static_cast<size_t>(j - 1))(rho);
}

cplx H_of_rho(const ValidatedProblem& p, const DataEvaluator& de, cplx rho) {
    if (p.spec().homogeneous()) return 0.0;
    return H_symbolic(p).evaluate(rho, de.atoms());
}

cplx ContourPlan::integrate(const std::function<cplx(cplx)>& f) const {
    cplx total = 0.0;
    for (const auto& pc : pieces) {
        if (!pc.is_arc) {
            double len = std::abs(pc.z1 - pc.z0);
            if (len < 1e-15) continue;
            total += integrate_segment(f, pc.z0, pc.z1, panels_for(len, pc.min_wavelength));
        } else {
            double arclen = std::abs(pc.th1 - pc.th0) * pc.r;
            int panels = panels_for(arclen, pc.min_wavelength, 2);
            cplx c = pc.center;
            double r = pc.r;
            auto g = [&f, c, r](double th) {
                cplx z = c + std::polar(r, th);
                return f(z) * cplx(0.0, 1.0) * std::polar(r, th);
            };
            // Gauss-Legendre in the angle via a segment parametrization
            total += integrate_segment([&](cplx u) { return g(u.real()); }, cplx(pc.th0, 0.0),
                                       cplx(pc.th1, 0.0), panels);
        }
    }
    return total;
}

namespace {

/// Detour records for one ray: entry/exit parameters and the arc.
struct RayDetour {
    double t_in, t_out;
    cplx center;
    double r, th_in, th_out;
};

/// Build detours for the ray r*e^{i phi}, r in [r0, r1], around points
/// within their radius of the ray; arcs bulge toward interior_sign *
/// (left normal of the outward direction).
std::vector<RayDetour> ray_detours(double phi, double r0, double r1,
                                   const std::vector<cplx>& avoid,
                                   const std::vector<double>& radii,
                                   double interior_sign) {
    std::vector<RayDetour> out;
    cplx dir = std::polar(1.0, phi);
    for (size_t i = 0; i < avoid.size(); ++i) {
        cplx s = avoid[i];
        double rad = radii.size() == 1 ? radii[0] : radii[i];
        cplx w = s / dir;  // ray frame: real part = along, imag = perpendicular
        double along = w.real(), off = w.imag();
        if (std::abs(off) >= rad) continue;
        if (along < r0 - rad || along > r1 + rad) continue;
        double chord = std::sqrt(rad * rad - off * off);
        double tin = std::max(along - chord, r0);
        double tout = std::min(along + chord, r1);
        if (tout <= tin) continue;
        cplx zin = dir * tin, zout = dir * tout;
        double thin = std::arg((zin - s) / dir), thout = std::arg((zout - s) / dir);
        // choose the sweep through the interior side (perpendicular sign)
        double sweep = thout - thin;
        while (sweep <= -pi) sweep += 2 * pi;
        while (sweep > pi) sweep -= 2 * pi;
        double midperp = std::imag(std::polar(rad, thin + 0.5 * sweep)) + off;
        if (midperp * interior_sign < 0) sweep += (sweep <= 0.0) ? 2 * pi : -2 * pi;
        out.push_back({tin, tout, s, rad, phi + thin, phi + thin + sweep});
    }
    std::sort(out.begin(), out.end(), [](const RayDetour& a, const RayDetour& b) {
        return a.t_in < b.t_in;
    });
    // merge overlaps conservatively: keep the first, skip intersecting ones
    std::vector<RayDetour> merged;
    for (const auto& d : out) {
        if (!merged.empty() && d.t_in < merged.back().t_out) continue;
        merged.push_back(d);
    }
    return merged;
}

void add_ray(ContourPlan& plan, double phi, double r0, double r1, bool outward,
             const std::vector<cplx>& avoid, const std::vector<double>& radii,
             double interior_sign, double min_wavelength) {
    cplx dir = std::polar(1.0, phi);
    auto detours = ray_detours(phi, r0, r1, avoid, radii, interior_sign);
    std::vector<ContourPlan::Piece> pieces;
    auto push_seg = [&](double a0, double b0, double wl) {
        if (b0 - a0 < 1e-15) return;
        ContourPlan::Piece seg;
        seg.z0 = dir * a0;
        seg.z1 = dir * b0;
        seg.min_wavelength = wl;
        pieces.push_back(seg);
    };
    double t = r0;
    for (const auto& d : detours) {
        if (d.t_in > t) {
            // refine panels approaching the pole the detour skirts
            double pad = std::max(t, d.t_in - 6.0 * d.r);
            push_seg(t, pad, min_wavelength);
            push_seg(pad, d.t_in, std::min(min_wavelength, d.r));
        }
        ContourPlan::Piece arc;
        arc.is_arc = true;
        arc.center = d.center;
        arc.r = d.r;
        arc.th0 = d.th_in;
        arc.th1 = d.th_out;
        arc.min_wavelength = std::min(min_wavelength, d.r / 2.0);
        pieces.push_back(arc);
        double pad = std::min(r1, d.t_out + 6.0 * d.r);
        push_seg(d.t_out, pad, std::min(min_wavelength, d.r));
        t = pad;
    }
    push_seg(t, r1, min_wavelength);
    if (!outward) {
        std::reverse(pieces.begin(), pieces.end());
        for (auto& pc : pieces) {
            if (!pc.is_arc)
                std::swap(pc.z0, pc.z1);
            else
                std::swap(pc.th0, pc.th1);
        }
    }
    plan.pieces.insert(plan.pieces.end(), pieces.begin(), pieces.end());
}

} // namespace

ContourPlan wedge_boundary(double lo, double hi, double eps0, double R,
                           const std::vector<cplx>& avoid, std::vector<double> radii,
                           double min_wavelength) {
    ContourPlan plan;
    plan.truncation_radius = R;
    if (radii.empty()) radii.push_back(0.1);
    // anticlockwise around the wedge region (minus the origin disc):
    // lo-ray outward (interior on the +perp side), hi-ray inward
    // (interior on the -perp side), inner arc hi -> lo (clockwise).
    add_ray(plan, lo, eps0, R, true, avoid, radii, +1.0, min_wavelength);
    add_ray(plan, hi, eps0, R, false, avoid, radii, -1.0, min_wavelength);
    ContourPlan::Piece inner;
    inner.is_arc = true;
    inner.center = 0.0;
    inner.r = eps0;
    inner.th0 = hi;
    inner.th1 = lo;
    inner.min_wavelength = min_wavelength;
    plan.pieces.push_back(inner);
    return plan;
}

Solver::Solver(ValidatedProblem p, SolveOptions opts)
    : p_(std::move(p)), opts_(opts), cs_(cramer_system(p_)), dprime_(cs_.Delta.derivative()),
      ss_(sectors(p_.spec().n, p_.spec().a)), de_(make_data_evaluator(p_)) {
    v_ = decay_check(cs_, ss_, opts_.decay);
    vdual_ = decay_check(cs_, sectors(p_.spec().n, -p_.spec().a), opts_.decay);
}

const Spectrum& Solver::spectrum() {
    if (!sp_) {
        double R = opts_.radius > 0 ? opts_.radius : 12.0 * p_.spec().n;
        sp_ = std::make_unique<Spectrum>(find_zeros(cs_.Delta, R));
    }
    return *sp_;
}

cplx Solver::delta_prime(cplx sigma) const { return dprime_.evaluate(sigma); }

namespace {

cplx atom_value(const AtomEvaluator& ev, DataAtom atom, cplx rho) {
    switch (atom.kind) {
        case DataAtom::Kind::None: return 1.0;
        case DataAtom::Kind::Q0: return ev.q0hat(atom.index, rho);
        case DataAtom::Kind::QT:
            if (!ev.qThat) throw structural_error("missing final-time transform (qThat)");
            return ev.qThat(atom.index, rho);
        case DataAtom::Kind::Hdata: return ev.htilde(atom.index, rho);
    }
    return 1.0;
}

/// sum of f's terms evaluated as P(rho) e^{-i rho s - kappa} atom(rho).
cplx scaled_sum(const ExpPolynomial& f, cplx rho, double kappa, const AtomEvaluator& ev) {
    cplx v = 0.0;
    for (const auto& [k, p] : f.terms()) {
        cplx e = cplx(0.0, -1.0) * rho * exponent_sum_counts(f.order(), k.counts) - kappa;
        if (e.real() < -745.0) continue;  // underflow: exact zero contribution
        v += p.eval(rho) * std::exp(e) * atom_value(ev, k.atom, rho);
    }
    return v;
}

} // namespace

cplx Solver::zeta_sum_over_delta(bool plus_half, cplx rho) {
    auto [w, kappa] = cs_.Delta.evaluate_scaled(rho);
    AtomEvaluator ev = de_.atoms();
    cplx num = 0.0;
    const auto& idx = plus_half ? cs_.Jplus : cs_.Jminus;
    for (int j : idx) num += scaled_sum(cs_.zetaW[static_cast<size_t>(j - 1)], rho, kappa, ev);
    return num / w;
}

cplx Solver::fG_value(bool plus_half, cplx rho) {
    auto [w, kappa] = cs_.Delta.evaluate_scaled(rho);
    AtomEvaluator ev = de_.atoms();
    cplx num = 0.0;
    const auto& idx = plus_half ? cs_.Jplus : cs_.Jminus;
    cplx expT = std::exp(a_rho_n(cs_.a, rho, cs_.n) * cs_.T);
    for (int j : idx) {
        num += scaled_sum(cs_.zetaW[static_cast<size_t>(j - 1)], rho, kappa, ev);
        num -= expT * scaled_sum(cs_.etaW[static_cast<size_t>(j - 1)], rho, kappa, ev);
    }
    return num / w;
}

cplx Solver::residue_at(int k, bool plus_half, double x, double t) {
    const Spectrum& sp = spectrum();
    const auto& pt = sp.zeros.at(static_cast<size_t>(k));
    if (pt.multiplicity != 1)
        throw structural_error("residue_at: multiple spectral zero (unsupported)");
    cplx sigma = pt.sigma;
    auto [wp, kp] = dprime_.evaluate_scaled(sigma);
    if (std::abs(wp) < 1e-12)
        throw structural_error("residue_at: |Delta'(sigma)| too small (ill-conditioned)");
    AtomEvaluator ev = de_.atoms();
    cplx num = 0.0;
    const auto& idx = plus_half ? cs_.Jplus : cs_.Jminus;
    for (int j : idx) num += scaled_sum(cs_.zetaW[static_cast<size_t>(j - 1)], sigma, kp, ev);
    double xs = plus_half ? x : x - 1.0;
    cplx weight = std::exp(cplx(0.0, 1.0) * sigma * xs - a_rho_n(cs_.a, sigma, cs_.n) * t);
    return weight * num / wp;
}

namespace {

/// Zeros of Delta near the ray segment {t e^{i phi}: t in [lo,hi]} by a
/// scan of the scaled magnitude plus complex Newton refinement. Returns
/// zeros within `band` of the ray line.
std::vector<cplx> ray_zeros_on(const ExpPolynomial& Delta, const ExpPolynomial& dprime,
                               double phi, double lo, double hi, double step,
                               double band = 0.3) {
    std::vector<cplx> out;
    const cplx dir = std::polar(1.0, phi);
    int m = std::max(8, static_cast<int>(std::ceil((hi - lo) / step)));
    double prevmag = 1e300;
    for (int i = 0; i <= m; ++i) {
        double x = lo + (hi - lo) * i / m;
        auto [w, kap] = Delta.evaluate_scaled(dir * x);
        double mag = std::abs(w);
        (void)kap;
        if (mag < 0.25 && mag <= prevmag) {
            cplx z = dir * x;
            for (int it = 0; it < 50; ++it) {
                auto [wv, kv] = Delta.evaluate_scaled(z);
                auto [wd, kd] = dprime.evaluate_scaled(z);
                if (std::abs(wd) == 0.0) break;
                cplx stepc = (wv / wd) * std::exp(kv - kd);
                z -= stepc;
                if (std::abs(stepc) < 1e-13 * (1.0 + std::abs(z))) break;
            }
            cplx zr = z / dir;  // ray frame
            if (std::abs(zr.imag()) < band && zr.real() > lo - step && zr.real() < hi + step) {
                bool dup = false;
                for (cplx e : out)
                    if (std::abs(e - z) < 1e-6) dup = true;
                if (!dup && std::abs(Delta.evaluate_scaled(z).first) < 1e-6) out.push_back(z);
            }
        }
        prevmag = mag;
    }
    std::sort(out.begin(), out.end(), [&](cplx a, cplx b) {
        return (a / dir).real() < (b / dir).real();
    });
    return out;
}

/// Real-axis specialization.
std::vector<double> real_zeros_on(const ExpPolynomial& Delta, const ExpPolynomial& dprime,
                                  double lo, double hi, double step) {
    std::vector<double> out;
    if (hi <= lo) return out;
    if (lo >= 0.0) {
        for (cplx z : ray_zeros_on(Delta, dprime, 0.0, lo, hi, step, 0.05))
            out.push_back(z.real());
    } else if (hi <= 0.0) {
        for (cplx z : ray_zeros_on(Delta, dprime, pi, -hi, -lo, step, 0.05))
            out.push_back(z.real());
    } else {
        for (cplx z : ray_zeros_on(Delta, dprime, pi, 0.0, -lo, step, 0.05))
            out.push_back(z.real());
        for (cplx z : ray_zeros_on(Delta, dprime, 0.0, 0.0, hi, step, 0.05))
            out.push_back(z.real());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-6; }),
              out.end());
    return out;
}

} // namespace

SolveResult Solver::series(double x, double t) {
    SolveResult res;
    if (v_.status != Wellposedness::WellPosed)
        throw spec_error(std::string("series representation requires a well-posed problem; "
                                     "decay check returned ") +
                         to_string(v_.status));
    if (vdual_.status != Wellposedness::WellPosed)
        throw spec_error(std::string("series representation requires the opposite-direction "
                                     "problem to be well-posed too; its decay check returned ") +
                         to_string(vdual_.status) + "; use the integral representation");
    const bool homog = p_.spec().homogeneous();
    if (!homog && p_.spec().n % 2 == 0 && std::abs(p_.spec().a.real()) > 1e-12)
        throw spec_error("inhomogeneous boundary data require a = +-i (the boundary-data "
                         "transforms diverge on the real line otherwise)");
    double tail = 0.0;
    cplx acc = residue_sum(x, t, tail);
    if (!homog) {
        // the data transforms grow into the complement sectors, so the
        // deformation that kills these contours for homogeneous problems
        // does not apply; evaluate them
        double wtail = 0.0;
        acc += wedge_terms(x, t, wtail);
        tail = std::max(tail, wtail);
        res.warnings.push_back("inhomogeneous data: complement-sector contour correction added "
                               "to the residue series");
    }
    res.tail_estimate = tail;
    if (tail > opts_.tol_series)
        res.warnings.push_back("series truncation tail above tolerance; increase the radius");
    res.value = acc;
    return res;
}

cplx Solver::residue_sum(double x, double t, double& tail) {
    const Spectrum& sp = spectrum();
    cplx acc = 0.0;
    double Rc = sp.search_radius;
    for (size_t k = 0; k < sp.zeros.size(); ++k) {
        const auto& z = sp.zeros[k];
        bool plus = z.cls != SpectrumPoint::Class::Minus;  // Im >= 0 including real
        cplx r = cplx(0.0, 1.0) * residue_at(static_cast<int>(k), plus, x, t);
        acc += r;
        if (std::abs(z.sigma) > 0.85 * Rc) tail = std::max(tail, std::abs(r));
    }
    return acc;
}

cplx Solver::wedge_terms(double x, double t, double& tail) {
    const Spectrum& sp = spectrum();
    double Rc = sp.search_radius;
    std::vector<cplx> avoid;
    for (const auto& z : sp.zeros) avoid.push_back(z.sigma);
    double eps0 = std::min(0.35, 0.5 * sp.epsilon + 0.05);
    double rad = std::clamp(0.5 * sp.epsilon, 0.02, 0.3);
    const int n = cs_.n;
    const cplx a = cs_.a;
    const bool homog = p_.spec().homogeneous();
    const double Rmax = 2.5 * Rc;
    // with boundary data aboard, detours into E must shrink with |sigma| to
    // keep the t-transform growth e^{Re(a rho^n)(T-t)} bounded
    const double Tt = std::max(cs_.T - t, 0.05);
    auto detour_radius = [&](cplx z) {
        double cap = homog ? rad : std::min(rad, 3.0 / (1.0 + n * std::pow(std::abs(z), n - 1) * Tt));
        return std::max(cap, 1e-4);
    };

    cplx acc = 0.0;
    double block_tail = 0.0;
    for (int half = 0; half < 2; ++half) {
        const auto& arcs = half == 0 ? ss_.Eplus : ss_.Eminus;
        double xs = half == 0 ? x : x - 1.0;
        auto f = [&](cplx rho) -> cplx {
            cplx ratio = zeta_sum_over_delta(half == 0, rho);
            return std::exp(cplx(0.0, 1.0) * rho * xs - a_rho_n(a, rho, n) * t) * ratio;
        };
        for (const Arc& e : arcs) {
            // march each boundary ray outward in blocks; the integrand is a
            // conditionally convergent oscillation, so block contributions
            // collapse once the time phase spins fast
            for (int side = 0; side < 2; ++side) {
                double ang = side == 0 ? e.lo : e.hi;
                double sgn = side == 0 ? 1.0 : -1.0;             // lo-ray outward, hi-ray inward
                double interior = side == 0 ? 1.0 : -1.0;        // detour side
                std::vector<cplx> near = avoid;
                auto far = ray_zeros_on(cs_.Delta, dprime_, ang, Rc - 1.0, Rmax + 0.5, 0.25);
                near.insert(near.end(), far.begin(), far.end());
                std::vector<double> radii;
                for (cplx z : near) radii.push_back(detour_radius(z));
                cplx ray_acc = 0.0;
                double lo = eps0;
                int calm = 0;
                double last_mag = 0.0;
                // the oscillating blocks telescope, so the truncation error
                // is about the size of the last block
                const double tol_march = std::max(0.25 * opts_.tol_int, 1e-7);
                while (lo < Rmax && calm < 2) {
                    double hi = std::min(Rmax, lo + std::max(6.0, Rc / 6.0));
                    double lam = 2 * pi /
                                 (std::abs(xs) + n * std::pow(hi, n - 1) * t + n + 1.0);
                    ContourPlan plan;
                    add_ray(plan, ang, lo, hi, true, near, radii, interior, lam);
                    cplx add = plan.integrate(f);
                    ray_acc += add;
                    last_mag = std::abs(add);
                    if (last_mag <= tol_march * (1.0 + std::abs(ray_acc)))
                        ++calm;
                    else
                        calm = 0;
                    lo = hi;
                }
                block_tail = std::max(block_tail, last_mag);
                acc += sgn * ray_acc / (2.0 * pi);
            }
            // inner arc closing the wedge corner, hi -> lo
            double lam0 = 2 * pi / (std::abs(xs) + n + 1.0);
            ContourPlan corner;
            ContourPlan::Piece inner;
            inner.is_arc = true;
            inner.center = 0.0;
            inner.r = eps0;
            inner.th0 = e.hi;
            inner.th1 = e.lo;
            inner.min_wavelength = lam0;
            corner.pieces.push_back(inner);
            acc += corner.integrate(f) / (2.0 * pi);
        }
    }
    tail = std::max(tail, block_tail);
    return acc;
}

SolveResult Solver::integral(double x, double t) {
    SolveResult res;
    if (v_.status != Wellposedness::WellPosed)
        throw spec_error(std::string("integral representation requires a well-posed problem; "
                                     "decay check returned ") +
                         to_string(v_.status));
    const bool homog = p_.spec().homogeneous();
    if (!homog && p_.spec().n % 2 == 0 && std::abs(p_.spec().a.real()) > 1e-12)
        throw spec_error("inhomogeneous boundary data require a = +-i (the boundary-data "
                         "transforms diverge on the real line otherwise)");
    double tail = 0.0;
    cplx acc = residue_sum(x, t, tail);
    double wtail = 0.0;
    acc += wedge_terms(x, t, wtail);
    tail = std::max(tail, wtail);
    res.value = acc;
    res.tail_estimate = tail;
    if (tail > opts_.tol_int)
        res.warnings.push_back("contour truncation tail above tolerance; increase the radius");
    return res;
}

cplx Solver::implicit_rep(double x, double t) {
    if (!de_.qThat)
        throw spec_error("implicit representation needs a final-time transform (qThat)");
    const int n = cs_.n;
    const cplx a = cs_.a;
    const Spectrum& sp = spectrum();
    std::vector<cplx> avoid;
    for (const auto& z : sp.zeros) avoid.push_back(z.sigma);
    double Rc = sp.search_radius;
    double eps0 = std::min(0.35, 0.5 * sp.epsilon + 0.05);
    double rad = std::clamp(0.5 * sp.epsilon, 0.05, 0.3);

    // data term along the real line
    auto fdata = [&](cplx rho) {
        return std::exp(cplx(0.0, 1.0) * rho * x - a_rho_n(a, rho, n) * t) * de_.q0hat(rho);
    };
    double lam0 = 2 * pi / (x + n * std::pow(Rc, n - 1) * t + 1.0);
    cplx acc = integrate_segment(fdata, cplx(-Rc, 0.0), cplx(Rc, 0.0),
                                 panels_for(2 * Rc, lam0));
    double Lext = Rc;
    while (Lext < opts_.line_max) {
        double lam = 2 * pi / (x + n * std::pow(Lext + opts_.line_block, n - 1) * t + 1.0);
        cplx addp = integrate_segment(fdata, cplx(Lext, 0.0), cplx(Lext + opts_.line_block, 0.0),
                                      panels_for(opts_.line_block, lam));
        cplx addm = integrate_segment(fdata, cplx(-Lext - opts_.line_block, 0.0),
                                      cplx(-Lext, 0.0), panels_for(opts_.line_block, lam));
        acc += addp + addm;
        if (std::abs(addp) + std::abs(addm) < 1e-12 * (1.0 + std::abs(acc))) break;
        Lext += opts_.line_block;
    }

    for (int half = 0; half < 2; ++half) {
        const auto& arcs = half == 0 ? ss_.Dplus : ss_.Dminus;
        double xs = half == 0 ? x : x - 1.0;
        for (const Arc& d : arcs) {
            double lam = 2 * pi / (std::abs(xs) + n * std::pow(Rc, n - 1) * (cs_.T + t) + n + 1.0);
            std::vector<double> radii;
            for (cplx z : avoid)
                radii.push_back(std::max(
                    std::min(rad, 3.0 / (1.0 + n * std::pow(std::abs(z), n - 1) * t)), 1e-4));
            ContourPlan plan = wedge_boundary(d.lo, d.hi, eps0, Rc, avoid, radii, lam);
            auto f = [&](cplx rho) -> cplx {
                return std::exp(cplx(0.0, 1.0) * rho * xs - a_rho_n(a, rho, n) * t) *
                       fG_value(half == 0, rho);
            };
            acc -= plan.integrate(f);
        }
    }
    return acc / (2.0 * pi);
}

cplx Solver::recover_boundary(int j, bool left_end, double t) {
    if (!de_.qThat)
        throw spec_error("boundary-function recovery needs a final-time transform (qThat)");
    const int n = cs_.n;
    const cplx a = cs_.a;
    const Spectrum& sp = spectrum();
    double Rc = sp.search_radius;

    // nudge angle: the zeta part moves into E (time factor decays there),
    // the eta part into D; shrink until the swept wedges are zero-free
    double delta = pi / (16.0 * n);
    auto wedge_clear = [&](double lo, double hi) {
        for (const auto& z : sp.zeros) {
            double ang = wrap_angle(std::arg(z.sigma));
            for (int s = -1; s <= 1; ++s) {
                double aa = ang + 2 * pi * s;
                if (aa > lo + 1e-12 && aa < hi - 1e-12) return false;
            }
        }
        return true;
    };
    for (int tries = 0; tries < 8; ++tries) {
        bool ok = true;
        for (const Arc& d : ss_.D)
            ok = ok && wedge_clear(d.lo - delta, d.lo) && wedge_clear(d.hi, d.hi + delta) &&
                 wedge_clear(d.lo, d.lo + delta) && wedge_clear(d.hi - delta, d.hi);
        if (ok) break;
        delta *= 0.5;
        if (delta < 1e-3)
            throw structural_error("recover_boundary: spectrum hugs the sector boundary; "
                                   "no zero-free deformation wedge");
    }

    AtomEvaluator ev = de_.atoms();
    const auto& idx = left_end ? cs_.Jplus : cs_.Jminus;
    auto ratio_zeta = [&](cplx rho) {
        auto [w, kappa] = cs_.Delta.evaluate_scaled(rho);
        cplx num = 0.0;
        for (int jj : idx) num += scaled_sum(cs_.zeta[static_cast<size_t>(jj - 1)], rho, kappa, ev);
        return num / w;
    };
    auto ratio_eta = [&](cplx rho) {
        auto [w, kappa] = cs_.Delta.evaluate_scaled(rho);
        cplx num = 0.0;
        for (int jj : idx) num += scaled_sum(cs_.eta[static_cast<size_t>(jj - 1)], rho, kappa, ev);
        return num / w;
    };

    cplx izeta = 0.0, ieta = 0.0;
    double eps0 = 0.15;
    double lam = 2 * pi / (n * std::pow(Rc, n - 1) * (cs_.T + t) + n + 1.0);
    for (const Arc& d : ss_.D) {
        // zeta part: widen into E
        ContourPlan pz = wedge_boundary(d.lo - delta, d.hi + delta, eps0, Rc, {}, {}, lam);
        izeta += pz.integrate([&](cplx rho) {
            cplx w = std::pow(rho, j) * std::exp(-a_rho_n(a, rho, n) * t);
            return w * ratio_zeta(rho);
        });
        // eta part: shrink into D
        ContourPlan pe = wedge_boundary(d.lo + delta, d.hi - delta, eps0, Rc, {}, {}, lam);
        ieta += pe.integrate([&](cplx rho) {
            cplx w = std::pow(rho, j) *
                     std::exp(a_rho_n(a, rho, n) * (cs_.T - t));
            return w * ratio_eta(rho);
        });
    }
    cplx ij = std::pow(cplx(0.0, 1.0), j);
    return -(ij / (2.0 * pi)) * (izeta - ieta);
}

double global_relation_residual(const ValidatedProblem& p,
                                const std::vector<std::function<cplx(double)>>& f,
                                const std::vector<std::function<cplx(double)>>& g,
                                const std::function<cplx(cplx)>& qThat, int samples,
                                double radius, unsigned seed) {
    const int n = p.spec().n;
    const cplx a = p.spec().a;
    const double T = p.spec().T;
    DataEvaluator de = make_data_evaluator(p);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ur(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        cplx rho = std::polar(radius * std::sqrt(ur(rng)), 2 * pi * ur(rng));
        cplx z = a_rho_n(a, rho, n);
        cplx lhs = 0.0;
        for (int jj = 0; jj < n; ++jj) {
            cplx cj = c_monomial(n, a, jj).eval(rho);
            cplx ftil = integrate_gk([&](double s) { return std::exp(z * s) * f[jj](s); }, 0.0, T,
                                     1e-12);
            cplx gtil = integrate_gk([&](double s) { return std::exp(z * s) * g[jj](s); }, 0.0, T,
                                     1e-12);
            lhs += cj * (ftil - std::exp(cplx(0.0, -1.0) * rho) * gtil);
        }
        cplx rhs = de.q0hat(rho) - std::exp(z * T) * qThat(rho);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

} // namespace utm
