#include "utm/exppoly.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>

namespace utm {

std::string DataAtom::to_string() const {
    char buf[32];
    switch (kind) {
        case Kind::None: return "none";
        case Kind::Q0: std::snprintf(buf, sizeof(buf), "q0(%d)", int(index)); return buf;
        case Kind::QT: std::snprintf(buf, sizeof(buf), "qT(%d)", int(index)); return buf;
        case Kind::Hdata: std::snprintf(buf, sizeof(buf), "h(%d)", int(index)); return buf;
    }
    return "?";
}

bool ExpPolynomial::is_polynomial() const {
    for (const auto& [k, p] : terms_)
        if (k.counts != 0) return false;
    return true;
}

bool ExpPolynomial::has_atoms() const {
    for (const auto& [k, p] : terms_)
        if (!k.atom.is_none()) return true;
    return false;
}

void ExpPolynomial::add_term(ExpCounts counts, DataAtom atom, const CPoly& p) {
    if (p.is_zero()) return;
    ExponentKey key{counts, atom};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(key, p);
    } else {
        it->second += p;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

ExpPolynomial& ExpPolynomial::operator+=(const ExpPolynomial& o) {
    if (n_ == 0) n_ = o.n_;
    if (o.n_ != 0 && o.n_ != n_) throw structural_error("exppoly: mismatched ambient order");
    for (const auto& [k, p] : o.terms_) add_term(k.counts, k.atom, p);
    return *this;
}

ExpPolynomial& ExpPolynomial::operator-=(const ExpPolynomial& o) {
    if (n_ == 0) n_ = o.n_;
    if (o.n_ != 0 && o.n_ != n_) throw structural_error("exppoly: mismatched ambient order");
    for (const auto& [k, p] : o.terms_) add_term(k.counts, k.atom, cplx(-1.0) * p);
    return *this;
}

ExpPolynomial& ExpPolynomial::operator*=(cplx s) {
    if (s == cplx(0.0)) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, p] : terms_) p *= s;
    return *this;
}

ExpPolynomial ExpPolynomial::times_poly(const CPoly& p) const {
    ExpPolynomial r(n_);
    if (p.is_zero()) return r;
    for (const auto& [k, q] : terms_) r.add_term(k.counts, k.atom, q * p);
    return r;
}

namespace {

ExpPolynomial mul_impl(const ExpPolynomial& f, const ExpPolynomial& g, bool strict) {
    if (f.order() != g.order() && f.order() != 0 && g.order() != 0)
        throw structural_error("exppoly: mismatched ambient order");
    ExpPolynomial r(f.order() ? f.order() : g.order());
    for (const auto& [ka, pa] : f.terms()) {
        for (const auto& [kb, pb] : g.terms()) {
            if (strict && (ka.counts & kb.counts))
                throw structural_error("exppoly: exponent-set collision in product");
            DataAtom atom;
            if (ka.atom.is_none()) {
                atom = kb.atom;
            } else if (kb.atom.is_none()) {
                atom = ka.atom;
            } else {
                throw structural_error("exppoly: product of two data atoms");
            }
            // nibble-wise count addition; overflow would corrupt neighbours
            for (int y = 0; y < r.order(); ++y)
                if (exp_count_of(ka.counts, y) + exp_count_of(kb.counts, y) > 15)
                    throw structural_error("exppoly: exponent count overflow");
            r.add_term(ka.counts + kb.counts, atom, pa * pb);
        }
    }
    return r;
}

} // namespace

ExpPolynomial mul(const ExpPolynomial& f, const ExpPolynomial& g) { return mul_impl(f, g, false); }

ExpPolynomial mul_strict(const ExpPolynomial& f, const ExpPolynomial& g) {
    return mul_impl(f, g, true);
}

ExpPolynomial ExpPolynomial::det(const std::vector<std::vector<ExpPolynomial>>& m) {
    const int n = static_cast<int>(m.size());
    if (n == 0) throw structural_error("det: empty matrix");
    for (const auto& row : m)
        if (static_cast<int>(row.size()) != n) throw structural_error("det: not square");
    if (n > 16) throw structural_error("det: order too large");
    const int amb = m[0][0].order();

    // d[S] = det of rows 0..popcount(S)-1, columns in S
    std::vector<ExpPolynomial> d(size_t(1) << n);
    d[0] = ExpPolynomial(amb);
    d[0].add_term(0, DataAtom::none(), CPoly::constant(1.0));
    for (uint32_t S = 1; S < (1u << n); ++S) {
        const int row = std::popcount(S) - 1;
        ExpPolynomial acc(amb);
        int pos = 0;
        for (int j = 0; j < n; ++j) {
            if (!(S & (1u << j))) continue;
            ExpPolynomial contrib = mul_strict(m[row][j], d[S & ~(1u << j)]);
            if ((row + pos) % 2 == 0)
                acc += contrib;
            else
                acc -= contrib;
            ++pos;
        }
        d[S] = std::move(acc);
    }
    return d[(1u << n) - 1];
}

cplx ExpPolynomial::evaluate(cplx rho) const {
    cplx v = 0.0;
    for (const auto& [k, p] : terms_) {
        if (!k.atom.is_none()) throw structural_error("evaluate: data atom present but no evaluator");
        v += p.eval(rho) * std::exp(cplx(0.0, -1.0) * rho * exponent_sum_counts(n_, k.counts));
    }
    return v;
}

cplx ExpPolynomial::evaluate(cplx rho, const AtomEvaluator& ev) const {
    cplx v = 0.0;
    for (const auto& [k, p] : terms_) {
        cplx atomval = 1.0;
        switch (k.atom.kind) {
            case DataAtom::Kind::None: break;
            case DataAtom::Kind::Q0:
                if (!ev.q0hat) throw structural_error("evaluate: q0 atom without evaluator");
                atomval = ev.q0hat(k.atom.index, rho);
                break;
            case DataAtom::Kind::QT:
                if (!ev.qThat) throw structural_error("evaluate: qT atom without evaluator");
                atomval = ev.qThat(k.atom.index, rho);
                break;
            case DataAtom::Kind::Hdata:
                if (!ev.htilde) throw structural_error("evaluate: h atom without evaluator");
                atomval = ev.htilde(k.atom.index, rho);
                break;
        }
        v += p.eval(rho) * std::exp(cplx(0.0, -1.0) * rho * exponent_sum_counts(n_, k.counts)) *
             atomval;
    }
    return v;
}

std::pair<cplx, double> ExpPolynomial::evaluate_scaled(cplx rho) const {
    if (terms_.empty()) return {0.0, 0.0};
    double kappa = -1e300;
    for (const auto& [k, p] : terms_) {
        if (!k.atom.is_none()) throw structural_error("evaluate_scaled: data atom present");
        kappa = std::max(kappa, std::imag(rho * exponent_sum_counts(n_, k.counts)));
    }
    cplx w = 0.0;
    for (const auto& [k, p] : terms_) {
        cplx e = cplx(0.0, -1.0) * rho * exponent_sum_counts(n_, k.counts) - kappa;
        w += p.eval(rho) * std::exp(e);
    }
    return {w, kappa};
}

ExpPolynomial ExpPolynomial::derivative() const {
    ExpPolynomial r(n_);
    for (const auto& [k, p] : terms_) {
        if (!k.atom.is_none()) throw structural_error("derivative: data atom present");
        CPoly d = p.derivative();
        d += p * (cplx(0.0, -1.0) * exponent_sum_counts(n_, k.counts));
        r.add_term(k.counts, k.atom, d);
    }
    return r;
}

ExpPolynomial ExpPolynomial::pruned_rel(double rel_tol) const {
    // Degree-wise scale: the largest coefficient magnitude at each degree
    // across all terms. Coefficients that cancelled to roundoff against
    // same-degree partners get dropped.
    int maxdeg = -1;
    for (const auto& [k, p] : terms_) maxdeg = std::max(maxdeg, p.degree());
    std::vector<double> scale(size_t(maxdeg + 1), 0.0);
    for (const auto& [k, p] : terms_)
        for (int d = 0; d <= p.degree(); ++d)
            scale[size_t(d)] = std::max(scale[size_t(d)], std::abs(p.coeff(d)));
    ExpPolynomial r(n_);
    for (const auto& [k, p] : terms_) {
        std::vector<cplx> v(p.coeffs());
        for (int d = 0; d <= p.degree(); ++d)
            if (std::abs(v[size_t(d)]) <= rel_tol * scale[size_t(d)]) v[size_t(d)] = 0.0;
        r.add_term(k.counts, k.atom, CPoly(std::move(v)));
    }
    return r;
}

double ExpPolynomial::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [k, p] : terms_) m = std::max(m, p.max_abs_coeff());
    return m;
}

bool lex_less_counts(ExpCounts a, ExpCounts b, int n) {
    std::vector<int> va, vb;
    for (int y = 0; y < n; ++y) {
        for (int c = 0; c < exp_count_of(a, y); ++c) va.push_back(y);
        for (int c = 0; c < exp_count_of(b, y); ++c) vb.push_back(y);
    }
    return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
}

std::string ExpPolynomial::dump() const {
    std::vector<const std::pair<const ExponentKey, CPoly>*> items;
    items.reserve(terms_.size());
    for (const auto& t : terms_) items.push_back(&t);
    std::sort(items.begin(), items.end(), [this](auto* a, auto* b) {
        if (a->first.counts != b->first.counts)
            return lex_less_counts(a->first.counts, b->first.counts, n_);
        return a->first.atom < b->first.atom;
    });
    std::string out;
    char buf[96];
    for (auto* t : items) {
        std::string ys = "{";
        bool first = true;
        for (int y = 0; y < n_; ++y) {
            for (int c = 0; c < exp_count_of(t->first.counts, y); ++c) {
                if (!first) ys += ",";
                ys += std::to_string(y);
                first = false;
            }
        }
        ys += "}";
        cplx s = exponent_sum_counts(n_, t->first.counts);
        std::snprintf(buf, sizeof(buf), " sY=<%.12g,%.12g> atom=", s.real(), s.imag());
        out += "Y=" + ys + buf + t->first.atom.to_string() +
               " poly=" + t->second.to_string() + "\n";
    }
    return out;
}

DominanceResult dominant_exponent(const ExpPolynomial& f, double phi1, double phi2, int grid) {
    if (f.is_zero()) throw structural_error("dominant_exponent: empty exponential polynomial");
    struct KeyS {
        ExpCounts counts;
        cplx s;
    };
    std::vector<KeyS> keys;
    std::vector<std::vector<ExpCounts>> members;
    for (const auto& [k, p] : f.terms()) {
        cplx s = exponent_sum_counts(f.order(), k.counts);
        bool found = false;
        for (size_t i = 0; i < keys.size(); ++i) {
            if (std::abs(keys[i].s - s) <= 1e-12) {
                members[i].push_back(k.counts);
                found = true;
                break;
            }
        }
        if (!found) {
            keys.push_back({k.counts, s});
            members.push_back({k.counts});
        }
    }

    DominanceResult res;
    res.strict = true;
    res.min_margin = 1e300;
    size_t mid_idx = 0;
    long common_max = -1;
    for (int g = 0; g <= grid + 1; ++g) {
        double phi = phi1 + (phi2 - phi1) * static_cast<double>(g) / static_cast<double>(grid + 1);
        cplx e = std::polar(1.0, phi);
        double best = -1e300, second = -1e300;
        size_t best_i = 0;
        for (size_t i = 0; i < keys.size(); ++i) {
            double v = std::imag(e * keys[i].s);
            if (v > best) {
                second = best;
                best = v;
                best_i = i;
            } else if (v > second) {
                second = v;
            }
        }
        bool interior = (g > 0 && g <= grid);
        if (interior) {
            double margin = (keys.size() > 1) ? best - second : 1e300;
            res.min_margin = std::min(res.min_margin, margin);
            if (common_max < 0)
                common_max = static_cast<long>(best_i);
            else if (common_max != static_cast<long>(best_i))
                res.strict = false;
            if (margin <= 1e-12) res.strict = false;
        }
        if (g == (grid + 1) / 2) mid_idx = best_i;
    }
    if (keys.size() == 1) {
        res.strict = true;
        res.min_margin = 1e300;
    }
    res.maximizers = members[mid_idx];
    return res;
}

} // namespace utm
