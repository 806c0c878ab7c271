#include "utm/jsonio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace utm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw spec_error("parse error at " + path + ": " + what);
}

cplx parse_complex(const json& v, const std::string& path) {
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array()) {
        if (v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            fail(path, "complex value must be [re, im]");
        return cplx(v[0].get<double>(), v[1].get<double>());
    }
    if (v.is_object()) {
        if (!v.contains("re") || !v.contains("im")) fail(path, "complex object needs re and im");
        return cplx(v["re"].get<double>(), v["im"].get<double>());
    }
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s == "i") return cplx(0.0, 1.0);
        if (s == "-i") return cplx(0.0, -1.0);
        fail(path, "unrecognized complex literal '" + s + "'");
    }
    fail(path, "expected a number, [re,im], {re,im}, or \"i\"/\"-i\"");
}

FunctionSpec parse_function(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "function spec must be an object");
    if (!v.contains("kind")) fail(path + ".kind", "missing");
    std::string kind = v["kind"].get<std::string>();
    if (kind == "poly") {
        if (!v.contains("coeffs") || !v["coeffs"].is_array())
            fail(path + ".coeffs", "poly needs a coefficient array");
        std::vector<cplx> c;
        for (size_t i = 0; i < v["coeffs"].size(); ++i)
            c.push_back(parse_complex(v["coeffs"][i], path + ".coeffs[" + std::to_string(i) + "]"));
        return FunctionSpec::poly(std::move(c));
    }
    if (kind == "trig") {
        if (!v.contains("terms") || !v["terms"].is_array())
            fail(path + ".terms", "trig needs a term array");
        std::vector<FunctionSpec::TrigTerm> ts;
        for (size_t i = 0; i < v["terms"].size(); ++i) {
            const auto& t = v["terms"][i];
            std::string tp = path + ".terms[" + std::to_string(i) + "]";
            if (!t.contains("type") || !t.contains("freq") || !t.contains("amp"))
                fail(tp, "trig term needs type, freq, amp");
            std::string type = t["type"].get<std::string>();
            if (type != "sin" && type != "cos") fail(tp + ".type", "must be sin or cos");
            ts.push_back({type == "sin", t["freq"].get<double>(),
                          parse_complex(t["amp"], tp + ".amp")});
        }
        return FunctionSpec::trig(std::move(ts));
    }
    if (kind == "exp") {
        if (!v.contains("terms") || !v["terms"].is_array())
            fail(path + ".terms", "exp needs a term array");
        std::vector<FunctionSpec::ExpTerm> ts;
        for (size_t i = 0; i < v["terms"].size(); ++i) {
            const auto& t = v["terms"][i];
            std::string tp = path + ".terms[" + std::to_string(i) + "]";
            if (!t.contains("rate") || !t.contains("amp")) fail(tp, "exp term needs rate, amp");
            ts.push_back({parse_complex(t["rate"], tp + ".rate"),
                          parse_complex(t["amp"], tp + ".amp")});
        }
        return FunctionSpec::expsum(std::move(ts));
    }
    if (kind == "samples") {
        if (!v.contains("x") || !v.contains("y")) fail(path, "samples need x and y arrays");
        std::vector<double> xs;
        std::vector<cplx> ys;
        for (size_t i = 0; i < v["x"].size(); ++i) xs.push_back(v["x"][i].get<double>());
        for (size_t i = 0; i < v["y"].size(); ++i)
            ys.push_back(parse_complex(v["y"][i], path + ".y[" + std::to_string(i) + "]"));
        if (xs.size() != ys.size()) fail(path, "samples x and y must match in length");
        return FunctionSpec::samples(std::move(xs), std::move(ys));
    }
    fail(path + ".kind", "unknown kind '" + kind + "' (poly|trig|exp|samples)");
}

} // namespace

ProblemSpec parse_problem(const json& doc) {
    ProblemSpec p;
    if (!doc.is_object()) fail("$", "document must be an object");
    for (const char* field : {"n", "a", "A", "T", "q0", "h"})
        if (!doc.contains(field)) fail(std::string("$.") + field, "missing");
    if (!doc["n"].is_number_integer()) fail("$.n", "must be an integer");
    p.n = doc["n"].get<int>();
    if (p.n < 1 || p.n > 12) fail("$.n", "order out of supported range [2,12]");
    p.a = parse_complex(doc["a"], "$.a");
    if (!doc["A"].is_array() || doc["A"].size() != static_cast<size_t>(p.n))
        fail("$.A", "must be an n-row matrix");
    for (int r = 0; r < p.n; ++r) {
        const auto& row = doc["A"][static_cast<size_t>(r)];
        std::string rp = "$.A[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != static_cast<size_t>(2 * p.n))
            fail(rp, "row must have 2n entries");
        std::vector<double> rr;
        for (size_t c = 0; c < row.size(); ++c) {
            if (!row[c].is_number()) fail(rp + "[" + std::to_string(c) + "]", "must be numeric");
            rr.push_back(row[c].get<double>());
        }
        p.A.push_back(std::move(rr));
    }
    if (!doc["T"].is_number()) fail("$.T", "must be numeric");
    p.T = doc["T"].get<double>();
    p.q0 = parse_function(doc["q0"], "$.q0");
    if (!doc["h"].is_array())
        fail("$.h", "must be an array of n function specs");
    if (doc["h"].size() != static_cast<size_t>(p.n))
        fail("$.h", "expected " + std::to_string(p.n) + " boundary data, got " +
                        std::to_string(doc["h"].size()));
    for (size_t j = 0; j < doc["h"].size(); ++j)
        p.h.push_back(parse_function(doc["h"][j], "$.h[" + std::to_string(j) + "]"));
    return p;
}

ProblemSpec parse_problem_text(const std::string& text) {
    json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) fail("$", "invalid JSON");
    return parse_problem(doc);
}

ProblemSpec parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw spec_error("cannot open problem file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str());
}

json to_json(const ProblemSpec& p) {
    json j;
    j["n"] = p.n;
    j["a"] = {{"re", p.a.real()}, {"im", p.a.imag()}};
    j["A"] = p.A;
    j["T"] = p.T;
    return j;
}

namespace {

json counts_to_setlist(ExpCounts c, int n) {
    json arr = json::array();
    for (int y = 0; y < n; ++y)
        for (int k = 0; k < exp_count_of(c, y); ++k) arr.push_back(y);
    return arr;
}

const char* atom_kind_name(DataAtom a) {
    switch (a.kind) {
        case DataAtom::Kind::None: return "none";
        case DataAtom::Kind::Q0: return "q0";
        case DataAtom::Kind::QT: return "qT";
        case DataAtom::Kind::Hdata: return "h";
    }
    return "?";
}

} // namespace

json verdict_to_json(const Verdict& v, int n) {
    json j;
    j["status"] = to_string(v.status);
    j["sectors"] = json::array();
    for (const auto& s : v.sectors) {
        json js;
        js["p"] = s.p;
        js["arc"] = {s.arc.lo, s.arc.hi};
        js["Ymax"] = json::array();
        for (ExpCounts c : s.Ymax) js["Ymax"].push_back(counts_to_setlist(c, n));
        js["strict"] = s.strict;
        js["margin"] = s.margin;
        js["Zmax_nonzero"] = true;  // stored determinant keys are pruned of zeros
        js["theoretical_Ymax"] = counts_to_setlist(s.theoretical, n);
        js["theoretical_present"] = s.theoretical_present;
        js["borderline"] = s.borderline;
        if (s.failing) {
            js["failing_term"] = {{"j", s.failing->j},
                                  {"Y", counts_to_setlist(s.failing->Ycounts, n)},
                                  {"atom", atom_kind_name(s.failing->atom)},
                                  {"atom_index", int(s.failing->atom.index)},
                                  {"exceed", s.failing->exceed},
                                  {"phi", s.failing->phi}};
        }
        j["sectors"].push_back(js);
    }
    if (v.dual) j["dual"] = verdict_to_json(*v.dual, n);
    return j;
}

json spectrum_to_json(const Spectrum& sp) {
    json j;
    j["zeros"] = json::array();
    for (const auto& z : sp.zeros) {
        const char* cls = z.cls == SpectrumPoint::Class::Real
                              ? "real"
                              : (z.cls == SpectrumPoint::Class::Plus ? "plus" : "minus");
        j["zeros"].push_back({{"re", z.sigma.real()},
                              {"im", z.sigma.imag()},
                              {"mult", z.multiplicity},
                              {"class", cls},
                              {"flagged", z.flagged}});
    }
    j["epsilon"] = sp.epsilon;
    j["search_radius"] = sp.search_radius;
    j["rays"] = json::array();
    for (const auto& r : sp.rays)
        j["rays"].push_back({{"angle", r.angle},
                             {"width", r.half_width},
                             {"is_ray", r.is_ray},
                             {"side_length", r.side_length}});
    return j;
}

std::string spectrum_to_csv(const Spectrum& sp) {
    std::string out = "re,im,mult,class\n";
    char buf[128];
    for (const auto& z : sp.zeros) {
        const char* cls = z.cls == SpectrumPoint::Class::Real
                              ? "real"
                              : (z.cls == SpectrumPoint::Class::Plus ? "plus" : "minus");
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%d,%s\n", z.sigma.real(), z.sigma.imag(),
                      z.multiplicity, cls);
        out += buf;
    }
    return out;
}

} // namespace utm
