#include "utm/wellposed.hpp"

#include <algorithm>
#include <cmath>

namespace utm {

const char* to_string(Wellposedness s) {
    switch (s) {
        case Wellposedness::WellPosed: return "WellPosed";
        case Wellposedness::IllPosed: return "IllPosed";
        case Wellposedness::Indeterminate: return "Indeterminate";
    }
    return "?";
}

SectorSet sectors(int n, cplx a) {
    SectorSet ss;
    ss.n = n;
    ss.a = a;
    const double theta = std::arg(a);
    std::vector<Arc> D, E;
    for (int m = 0; m < n; ++m) {
        double lo = (pi / 2 - theta + 2 * pi * m) / n;
        D.push_back({wrap_angle(lo), 0.0});
        D.back().hi = D.back().lo + pi / n;
        double elo = (-pi / 2 - theta + 2 * pi * m) / n;
        E.push_back({wrap_angle(elo), 0.0});
        E.back().hi = E.back().lo + pi / n;
    }
    auto by_lo = [](const Arc& x, const Arc& y) { return x.lo < y.lo; };
    std::sort(D.begin(), D.end(), by_lo);
    std::sort(E.begin(), E.end(), by_lo);
    ss.D = D;
    ss.E = E;
    // split arcs across the real axis into upper / lower pieces
    auto split = [](const std::vector<Arc>& arcs, std::vector<Arc>& up, std::vector<Arc>& down) {
        for (const Arc& e : arcs) {
            for (int half = 0; half < 2; ++half) {
                double hlo = half == 0 ? 0.0 : pi;
                double hhi = half == 0 ? pi : 2 * pi;
                for (int shift = -1; shift <= 1; ++shift) {
                    double lo = std::max(e.lo, hlo + 2 * pi * shift);
                    double hi = std::min(e.hi, hhi + 2 * pi * shift);
                    if (hi - lo > 1e-12) {
                        Arc piece{wrap_angle(lo), 0.0};
                        piece.hi = piece.lo + (hi - lo);
                        (half == 0 ? up : down).push_back(piece);
                    }
                }
            }
        }
    };
    split(ss.E, ss.Eplus, ss.Eminus);
    split(ss.D, ss.Dplus, ss.Dminus);
    return ss;
}

ExpCounts theoretical_max_mask(int n, double phi) {
    ExpCounts m = 0;
    for (int y = 0; y < n; ++y)
        if (std::sin(phi + 2 * pi * y / n) > 0.0) m |= exp_nibble(y);
    return m;
}

namespace {

struct EnvKey {
    ExpCounts counts;
    cplx s;
    int degree;
};

struct EnvTerm {
    int j;
    ExpCounts counts;
    DataAtom atom;
    cplx s0;        // anchor without the transform exponential
    cplx s1;        // anchor with it (QT/Q0 only)
    bool two_anchor;
    int degree;     // coefficient polynomial degree
    int credit;     // algebraic decay credit of the atom at a tying anchor
};

SectorReport check_sector(const CramerSystem& cs, int p, const Arc& arc,
                          const std::vector<EnvKey>& dkeys,
                          const std::vector<EnvTerm>& terms, const DecayOptions& opt,
                          Wellposedness& grade) {
    SectorReport rep;
    rep.p = p;
    rep.arc = arc;

    DominanceResult dom = dominant_exponent(cs.Delta, arc.lo, arc.hi, opt.grid);
    rep.Ymax = dom.maximizers;
    rep.strict = dom.strict;
    rep.margin = dom.min_margin == 1e300 ? 0.0 : dom.min_margin;
    rep.theoretical = theoretical_max_mask(cs.n, arc.mid());
    cplx ts = exponent_sum_counts(cs.n, rep.theoretical);
    rep.theoretical_present = std::any_of(dkeys.begin(), dkeys.end(), [&](const EnvKey& k) {
        return std::abs(k.s - ts) <= 1e-9;
    });

    double worst = -1e300;
    FailingTerm worst_term{}, degree_term{};
    bool degree_ill = false, degree_marginal = false;
    for (int g = 1; g <= opt.grid; ++g) {
        double phi = arc.lo + arc.width() * g / (opt.grid + 1);
        cplx e = std::polar(1.0, phi);
        double M = -1e300;
        int tied_deg = -1;
        for (const auto& k : dkeys) M = std::max(M, std::imag(e * k.s));
        for (const auto& k : dkeys)
            if (std::imag(e * k.s) >= M - opt.tol_margin) tied_deg = std::max(tied_deg, k.degree);
        for (const auto& t : terms) {
            double env = std::imag(e * t.s0);
            if (t.two_anchor) env = std::max(env, std::imag(e * t.s1));
            double exceed = env - M;
            if (exceed > worst) {
                worst = exceed;
                worst_term = {t.j, t.counts, t.atom, exceed, phi};
            }
            if (std::abs(exceed) <= opt.tol_margin) {
                // envelope tie: resolve by polynomial degree, crediting the
                // transform's algebraic decay to the tying term
                int eff = t.degree + t.credit;
                if (eff > tied_deg) {
                    if (!degree_ill) degree_term = {t.j, t.counts, t.atom, exceed, phi};
                    degree_ill = true;
                } else if (eff == tied_deg) {
                    if (!degree_marginal && !degree_ill)
                        degree_term = {t.j, t.counts, t.atom, exceed, phi};
                    degree_marginal = true;
                }
            }
        }
    }

    if (worst > opt.tol_violation) {
        grade = Wellposedness::IllPosed;
        rep.failing = worst_term;
    } else if (degree_ill) {
        grade = Wellposedness::IllPosed;
        rep.failing = degree_term;
    } else if (worst > opt.tol_margin || degree_marginal) {
        grade = Wellposedness::Indeterminate;
        rep.borderline = true;
        rep.failing = (worst > opt.tol_margin) ? worst_term : degree_term;
    } else {
        grade = Wellposedness::WellPosed;
    }
    return rep;
}

} // namespace

Verdict decay_check(const CramerSystem& cs, const SectorSet& ss, const DecayOptions& opt) {
    const int n = cs.n;
    Verdict v;
    if (cs.Delta.is_zero())
        throw structural_error("decay_check: vanished determinant");

    std::vector<EnvKey> dkeys;
    for (const auto& [k, poly] : cs.Delta.terms())
        dkeys.push_back({k.counts, exponent_sum_counts(n, k.counts), poly.degree()});

    std::vector<EnvTerm> terms;
    for (int j = 1; j <= 2 * n; ++j) {
        for (const auto& [k, poly] : cs.eta[j - 1].terms()) {
            EnvTerm t;
            t.j = j;
            t.counts = k.counts;
            t.atom = k.atom;
            t.s0 = exponent_sum_counts(n, k.counts);
            t.degree = poly.degree();
            switch (k.atom.kind) {
                case DataAtom::Kind::QT:
                case DataAtom::Kind::Q0:
                    t.s1 = t.s0 + omega_pow(n, k.atom.index);
                    t.two_anchor = true;
                    t.credit = -1;
                    break;
                case DataAtom::Kind::Hdata:
                    t.s1 = t.s0;
                    t.two_anchor = false;
                    t.credit = -n;
                    break;
                case DataAtom::Kind::None:
                    t.s1 = t.s0;
                    t.two_anchor = false;
                    t.credit = 0;
                    break;
            }
            terms.push_back(t);
        }
    }

    Wellposedness overall = Wellposedness::WellPosed;
    for (size_t i = 0; i < ss.D.size(); ++i) {
        Wellposedness grade = Wellposedness::WellPosed;
        v.sectors.push_back(
            check_sector(cs, static_cast<int>(i) + 1, ss.D[i], dkeys, terms, opt, grade));
        if (grade == Wellposedness::IllPosed)
            overall = Wellposedness::IllPosed;
        else if (grade == Wellposedness::Indeterminate && overall == Wellposedness::WellPosed)
            overall = Wellposedness::Indeterminate;
    }
    v.status = overall;
    return v;
}

namespace {
int pelloni_count(int n, cplx a) {
    if (n % 2 == 0) return n / 2;
    return (std::imag(a) > 0) ? (n + 1) / 2 : (n - 1) / 2;
}
} // namespace

bool condition_51(const BCClassification& bc, int n, cplx a) {
    if (bc.robin)
        throw spec_error("condition_51 applies to non-Robin boundary conditions; "
                         "use condition_robin");
    int m = pelloni_count(n, a);
    return bc.R <= m && m <= bc.R + bc.C;
}

bool condition_robin(const BCClassification& bc, int n, cplx a) {
    int m = pelloni_count(n, a);
    return bc.B2 - bc.B1 <= m && m <= bc.B2 + bc.B3;
}

std::optional<bool> pseudo_periodic_criterion(const ValidatedProblem& p) {
    const int n = p.spec().n;
    // pseudo-periodic: row k couples exactly q^{(n-k)}(0) and q^{(n-k)}(1),
    // pivots all on the left end, no other entries
    std::vector<double> b(n, 0.0);
    for (int k = 1; k <= n; ++k) {
        int ord = n - k;
        for (int j = 0; j < n; ++j) {
            double av = p.spec().alpha(k, j), bv = p.spec().beta(k, j);
            if (j == ord) {
                if (std::abs(av - 1.0) > 1e-12 || std::abs(bv) < 1e-12) return std::nullopt;
                b[k - 1] = bv;
            } else if (std::abs(av) > 1e-12 || std::abs(bv) > 1e-12) {
                return std::nullopt;
            }
        }
    }
    const double tol = 1e-11;
    if (n == 2) return std::abs(b[0] + b[1]) <= tol;
    if (n == 3) {
        if (std::imag(p.spec().a) > 0) return std::abs(b[0] + b[1] + b[2]) <= tol;
        return std::abs(1.0 / b[0] + 1.0 / b[1] + 1.0 / b[2]) <= tol;
    }
    if (n == 4) {
        double q = b[0] * b[1] + b[1] * b[2] + b[2] * b[3] + b[3] * b[0] +
                   2.0 * (b[0] * b[2] + b[1] * b[3]);
        return std::abs(q) <= tol;
    }
    return std::nullopt;
}

std::pair<Verdict, Verdict> duality_verdict(const ValidatedProblem& p, const DecayOptions& opt) {
    CramerSystem cs = cramer_system(p);
    Verdict v1 = decay_check(cs, sectors(p.spec().n, p.spec().a), opt);
    Verdict v2 = decay_check(cs, sectors(p.spec().n, -p.spec().a), opt);
    return {v1, v2};
}

} // namespace utm
