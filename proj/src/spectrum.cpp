#include "utm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <mutex>
#include <random>
#include <thread>

namespace utm {

std::vector<cplx> convex_hull(std::vector<cplx> pts) {
    auto less = [](cplx a, cplx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(pts.begin(), pts.end(), less);
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](cplx a, cplx b) { return std::abs(a - b) <= 1e-12; }),
              pts.end());
    const size_t n = pts.size();
    if (n <= 2) return pts;
    auto cross = [](cplx o, cplx a, cplx b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) -
               (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<cplx> h(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-12) --k;
        h[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 1e-12) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;  // anticlockwise
}

IndicatorDiagram indicator_diagram(const ExpPolynomial& Delta) {
    IndicatorDiagram d;
    const int n = Delta.order();
    for (const auto& [k, p] : Delta.terms()) {
        cplx s = std::conj(exponent_sum_counts(n, k.counts));
        // close under the rotation symmetry to guard roundoff-asymmetric pruning
        for (int m = 0; m < n; ++m) {
            cplx q = omega_pow(n, m) * s;
            bool dup = std::any_of(d.points.begin(), d.points.end(),
                                   [&](cplx x) { return std::abs(x - q) <= 1e-12; });
            if (!dup) d.points.push_back(q);
        }
    }
    d.hull = convex_hull(d.points);
    if (d.hull.size() <= 1) {
        d.degenerate = true;
        return d;
    }
    const size_t m = d.hull.size();
    const size_t nsides = (m == 2) ? 2 : m;  // a segment has two sides
    for (size_t i = 0; i < nsides; ++i) {
        IndicatorDiagram::Side s;
        s.a = d.hull[i % m];
        s.b = d.hull[(i + 1) % m];
        cplx v = s.b - s.a;
        s.direction = v / std::abs(v);
        for (const cplx& p : d.points) {
            cplx w = p - s.a;
            double t = (w.real() * v.real() + w.imag() * v.imag()) / std::norm(v);
            double dist = std::abs(w - t * v);
            if (dist <= 1e-9 && t >= -1e-9 && t <= 1.0 + 1e-9) ++s.colinear;
        }
        d.sides.push_back(s);
    }
    return d;
}

namespace {

/// Magnitude of the combined polynomial coefficient of the exponential
/// with conjugated exponent point `pt`, evaluated at rho.
double coeff_magnitude_at(const ExpPolynomial& Delta, cplx pt, cplx rho) {
    CPoly sum;
    for (const auto& [k, p] : Delta.terms())
        if (std::abs(std::conj(exponent_sum_counts(Delta.order(), k.counts)) - pt) <= 1e-9) sum += p;
    return std::abs(sum.eval(rho));
}

} // namespace

std::vector<RayDescriptor> asymptotic_rays(const ExpPolynomial& Delta, const IndicatorDiagram& d,
                                           int n, bool counting_ok, double report_radius) {
    std::vector<RayDescriptor> rays;
    const double r = std::max(report_radius, 2.0);
    for (const auto& s : d.sides) {
        RayDescriptor rd;
        rd.angle = std::arg(s.direction);
        rd.side_length = std::abs(s.b - s.a);
        bool two_points = s.colinear == 2;
        rd.is_ray = (n % 2 == 1) && two_points && (n < 7 || counting_ok);
        if (rd.is_ray) {
            rd.half_width = 0.0;
        } else {
            // strip half-width from the magnitude balance of the extreme
            // colinear terms, reported at the search radius
            cplx rho = std::polar(r, rd.angle);
            double za = coeff_magnitude_at(Delta, s.a, rho);
            double zb = coeff_magnitude_at(Delta, s.b, rho);
            if (za > 0 && zb > 0)
                rd.half_width = std::abs(std::log(zb / za)) / std::max(1e-9, rd.side_length);
            else
                rd.half_width = 1.0;
        }
        rays.push_back(rd);
    }
    return rays;
}

namespace {

/// Total argument change of f along the segment z0->z1 divided by 2*pi,
/// sampled adaptively so consecutive phase steps stay below pi/2.
/// Returns false when a sample lands too close to a zero.
bool edge_arg_change(const ExpPolynomial& f, const ExpPolynomial& fp, cplx z0, cplx z1,
                     double& total) {
    struct Node {
        cplx z;
        cplx v;      // scaled value
        double rate; // |f'/f| local phase-rate bound
    };
    auto eval = [&](cplx z) -> Node {
        auto [w, k] = f.evaluate_scaled(z);
        auto [wp, kp] = fp.evaluate_scaled(z);
        double rate = (std::abs(w) == 0.0) ? 1e300 : std::abs(wp / w) * std::exp(kp - k);
        return {z, w, rate};
    };
    const double L = std::abs(z1 - z0);
    const int initial = std::clamp(static_cast<int>(std::ceil(L * (f.order() + 2.0) / 2.0)), 8, 4000);
    std::vector<Node> nodes;
    nodes.reserve(static_cast<size_t>(initial) + 1);
    for (int i = 0; i <= initial; ++i)
        nodes.push_back(eval(z0 + (z1 - z0) * (static_cast<double>(i) / initial)));
    double scale = 0.0;
    for (auto& nd : nodes) scale = std::max(scale, std::abs(nd.v));
    if (scale == 0.0) return false;
    for (int pass = 0; pass < 48; ++pass) {
        bool ok = true;
        std::vector<Node> refined;
        refined.reserve(nodes.size() * 2);
        refined.push_back(nodes.front());
        for (size_t i = 1; i < nodes.size(); ++i) {
            const Node& a = nodes[i - 1];
            const Node& b = nodes[i];
            if (std::abs(a.v) < 1e-12 * scale || std::abs(b.v) < 1e-12 * scale)
                return false;  // sampling a zero: caller perturbs the box
            double gap = std::abs(b.z - a.z);
            // the inter-sample argument change is bounded by gap times the
            // phase rate |f'/f|; refine until that bound rules out aliasing
            bool fast = gap * std::max(a.rate, b.rate) > 1.2;
            if (fast && gap > 1e-12 * (1.0 + std::abs(b.z))) {
                refined.push_back(eval(0.5 * (a.z + b.z)));
                ok = false;
            }
            refined.push_back(b);
            if (refined.size() > 60000) return false;
        }
        nodes = std::move(refined);
        if (ok) break;
        if (pass == 47) return false;
    }
    double sum = 0.0;
    for (size_t i = 1; i < nodes.size(); ++i) sum += std::arg(nodes[i].v / nodes[i - 1].v);
    total += sum / (2.0 * pi);
    return true;
}

struct Box {
    double x0, x1, y0, y1;
    double diam() const { return std::hypot(x1 - x0, y1 - y0); }
    cplx center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
};

std::optional<int> box_count(const ExpPolynomial& f, const ExpPolynomial& fp, Box b) {
    for (int attempt = 0; attempt < 6; ++attempt) {
        double total = 0.0;
        bool ok = edge_arg_change(f, fp, {b.x0, b.y0}, {b.x1, b.y0}, total) &&
                  edge_arg_change(f, fp, {b.x1, b.y0}, {b.x1, b.y1}, total) &&
                  edge_arg_change(f, fp, {b.x1, b.y1}, {b.x0, b.y1}, total) &&
                  edge_arg_change(f, fp, {b.x0, b.y1}, {b.x0, b.y0}, total);
        if (ok) {
            int w = static_cast<int>(std::lround(total));
            if (std::abs(total - w) < 0.2) return w;
        }
        // contour ran near a zero: inflate the box asymmetrically and retry
        double d = std::max(b.x1 - b.x0, b.y1 - b.y0) * (7.3e-4 * (attempt + 1));
        b.x0 -= d;
        b.x1 += 1.31 * d;
        b.y0 -= 0.83 * d;
        b.y1 += d;
    }
    return std::nullopt;
}

double local_poly_scale(const ExpPolynomial& f, cplx z) {
    double m = 0.0;
    for (const auto& [k, p] : f.terms()) m = std::max(m, std::abs(p.eval(z)));
    return m;
}

/// First moment of the argument principle over the box boundary:
/// (1/2 pi i) \oint rho Delta'/Delta = sum of enclosed zeros (with
/// multiplicity). Used to locate a multiple zero without subdividing
/// into the cancellation noise floor.
cplx boundary_moment(const ExpPolynomial& f, const ExpPolynomial& fp, const Box& b) {
    auto integrand = [&](cplx z) {
        auto [w, k] = f.evaluate_scaled(z);
        auto [wp, kp] = fp.evaluate_scaled(z);
        return z * (wp / w) * std::exp(kp - k);
    };
    const cplx corners[5] = {{b.x0, b.y0}, {b.x1, b.y0}, {b.x1, b.y1}, {b.x0, b.y1},
                             {b.x0, b.y0}};
    cplx acc = 0.0;
    const int m = 96;
    for (int e = 0; e < 4; ++e) {
        cplx z0 = corners[e], z1 = corners[e + 1];
        cplx d = (z1 - z0) / static_cast<double>(m);
        for (int i = 0; i < m; ++i) acc += integrand(z0 + d * (i + 0.5)) * d;
    }
    return acc / cplx(0.0, 2.0 * pi);
}

/// Newton with known multiplicity: sigma <- sigma - m Delta/Delta'.
cplx multiple_refine(const ExpPolynomial& f, const ExpPolynomial& fp, cplx z, int mult,
                     int maxit) {
    for (int it = 0; it < maxit; ++it) {
        auto [w, k] = f.evaluate_scaled(z);
        auto [wp, kp] = fp.evaluate_scaled(z);
        if (std::abs(wp) == 0.0) break;
        cplx step = static_cast<double>(mult) * (w / wp) * std::exp(k - kp);
        if (std::abs(step) > 0.5) step *= 0.5 / std::abs(step);
        z -= step;
        if (std::abs(step) < 1e-12 * (1.0 + std::abs(z))) break;
    }
    return z;
}

std::optional<cplx> newton_refine(const ExpPolynomial& f, const ExpPolynomial& fp, cplx z,
                                  double tol, int maxit, double leash) {
    cplx z0 = z;
    for (int it = 0; it < maxit; ++it) {
        auto [w, k] = f.evaluate_scaled(z);
        auto [wp, kp] = fp.evaluate_scaled(z);
        if (std::abs(wp) == 0.0) return std::nullopt;
        cplx step = (w / wp) * std::exp(k - kp);
        double ms = std::abs(step);
        if (ms > leash) step *= leash / ms;
        z -= step;
        if (std::abs(z - z0) > 8.0 * leash) return std::nullopt;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(z))) break;
    }
    auto [w, k] = f.evaluate_scaled(z);
    (void)k;
    if (std::abs(w) > tol * 1e2 * std::max(1.0, local_poly_scale(f, z))) return std::nullopt;
    return z;
}

} // namespace

int winding_number(const ExpPolynomial& Delta, double x0, double x1, double y0, double y1) {
    auto c = box_count(Delta, Delta.derivative(), {x0, x1, y0, y1});
    if (!c) throw structural_error("winding_number: contour kept landing on zeros");
    return *c;
}

Spectrum find_zeros(const ExpPolynomial& Delta, double R, const FindZeroOptions& opt) {
    Spectrum sp;
    sp.search_radius = R;
    if (Delta.is_zero()) throw structural_error("find_zeros: zero exponential polynomial");
    ExpPolynomial dprime = Delta.derivative();

    int threads = opt.threads;
    if (threads <= 0) {
        if (const char* env = std::getenv("UTM_THREADS"))
            threads = std::max(1, std::atoi(env));
        else
            threads = std::max(1u, std::thread::hardware_concurrency());
    }

    const double pad = 1e-3;
    Box root{-R - pad, R + pad * 1.17, -R - pad * 0.91, R + pad * 1.05};
    std::vector<Box> work{root};
    std::vector<std::pair<cplx, int>> found;
    std::mutex found_mu;

    // rho = 0 is excluded by convention; near a high-multiplicity origin
    // zero the determinant falls below roundoff there, so stop descending
    const double origin_exclusion = opt.origin_exclusion;
    auto process = [&](const Box& b) -> std::vector<Box> {
        if (std::max(std::abs(b.x0), std::abs(b.x1)) <= origin_exclusion &&
            std::max(std::abs(b.y0), std::abs(b.y1)) <= origin_exclusion)
            return {};
        double dx = std::max({b.x0, -b.x1, 0.0});
        double dy = std::max({b.y0, -b.y1, 0.0});
        if (std::hypot(dx, dy) > R + 0.5) return {};  // outside the disc
        auto cnt = box_count(Delta, dprime, b);
        if (cnt && *cnt == 0) return {};
        if (cnt && b.diam() < 0.75) {
            if (*cnt == 1) {
                auto z = newton_refine(Delta, dprime, b.center(), opt.newton_tol, opt.max_newton,
                                       2.0 * b.diam());
                if (z && z->real() >= b.x0 - 1e-6 && z->real() <= b.x1 + 1e-6 &&
                    z->imag() >= b.y0 - 1e-6 && z->imag() <= b.y1 + 1e-6) {
                    std::lock_guard<std::mutex> lk(found_mu);
                    found.push_back({*z, 1});
                    return {};
                }
            }
            if (*cnt >= 2 && b.diam() < 0.05) {
                // a cluster this tight is a multiple zero (the spectrum is
                // separated); locate it by the boundary moment
                cplx z = boundary_moment(Delta, dprime, b) / static_cast<double>(*cnt);
                z = multiple_refine(Delta, dprime, z, *cnt, opt.max_newton);
                std::lock_guard<std::mutex> lk(found_mu);
                found.push_back({z, *cnt});
                return {};
            }
            if (b.diam() < opt.min_box) {
                std::lock_guard<std::mutex> lk(found_mu);
                found.push_back({b.center(), *cnt});
                return {};
            }
        }
        if (!cnt && b.diam() < opt.min_box) return {};  // undecidable sliver
        double xm = 0.5 * (b.x0 + b.x1) + (b.x1 - b.x0) * 1.7e-5;
        double ym = 0.5 * (b.y0 + b.y1) - (b.y1 - b.y0) * 2.3e-5;
        return {Box{b.x0, xm, b.y0, ym}, Box{xm, b.x1, b.y0, ym}, Box{b.x0, xm, ym, b.y1},
                Box{xm, b.x1, ym, b.y1}};
    };

    while (!work.empty()) {
        std::vector<Box> next;
        const size_t nchunk = std::min<size_t>(static_cast<size_t>(threads), work.size());
        if (nchunk > 1) {
            std::vector<std::future<std::vector<Box>>> futs;
            futs.reserve(nchunk);
            for (size_t c = 0; c < nchunk; ++c) {
                futs.push_back(std::async(std::launch::async, [&, c]() {
                    std::vector<Box> local;
                    for (size_t i = c; i < work.size(); i += nchunk) {
                        auto v = process(work[i]);
                        local.insert(local.end(), v.begin(), v.end());
                    }
                    return local;
                }));
            }
            for (auto& f : futs) {
                auto v = f.get();
                next.insert(next.end(), v.begin(), v.end());
            }
        } else {
            for (const auto& b : work) {
                auto v = process(b);
                next.insert(next.end(), v.begin(), v.end());
            }
        }
        work = std::move(next);
    }

    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (std::abs(a.first) != std::abs(b.first)) return std::abs(a.first) < std::abs(b.first);
        return std::arg(a.first) < std::arg(b.first);
    });
    for (const auto& [z, mult] : found) {
        if (std::abs(z) <= 1.5 * origin_exclusion) continue;  // nonzero zeros only
        if (std::abs(z) > R) continue;
        bool dup = false;
        for (auto& q : sp.zeros) {
            if (std::abs(q.sigma - z) < 1e-6) {
                dup = true;
                if (mult > q.multiplicity) {  // keep the moment-derived record
                    q.sigma = z;
                    q.multiplicity = mult;
                    q.flagged = true;
                }
            }
        }
        if (dup) continue;
        SpectrumPoint pt;
        pt.sigma = z;
        pt.multiplicity = mult;
        pt.flagged = mult > 1;
        if (std::abs(z.imag()) <= 1e-9)
            pt.cls = SpectrumPoint::Class::Real;
        else
            pt.cls = z.imag() > 0 ? SpectrumPoint::Class::Plus : SpectrumPoint::Class::Minus;
        sp.zeros.push_back(pt);
    }
    sp.epsilon = 1.0;
    for (size_t i = 0; i < sp.zeros.size(); ++i)
        for (size_t j = i + 1; j < sp.zeros.size(); ++j)
            sp.epsilon = std::min(sp.epsilon, std::abs(sp.zeros[i].sigma - sp.zeros[j].sigma));
    return sp;
}

double verify_symmetry(const ExpPolynomial& Delta, int samples, double radius, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ur(-radius, radius);
    const int n = Delta.order();
    double sign = (n % 2 == 1) ? 1.0 : -1.0;
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        cplx rho(ur(rng), ur(rng));
        cplx lhs = Delta.evaluate(rho);
        cplx rhs = sign * Delta.evaluate(omega(n) * rho);
        worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
    }
    return worst;
}

} // namespace utm
