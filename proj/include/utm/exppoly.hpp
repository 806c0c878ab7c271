#pragma once

#include "utm/complex_util.hpp"
#include "utm/cpoly.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace utm {

/// Placeholder for a data transform attached to a term. Terms are linear
/// in the data, so a term carries at most one atom.
struct DataAtom {
    enum class Kind : uint8_t { None = 0, Q0 = 1, QT = 2, Hdata = 3 };
    Kind kind = Kind::None;
    /// rotation index z for Q0/QT (transform argument omega^z * rho),
    /// boundary-datum row j (1-based) for Hdata.
    uint8_t index = 0;

    static DataAtom none() { return {}; }
    static DataAtom q0(int z) { return {Kind::Q0, static_cast<uint8_t>(z)}; }
    static DataAtom qT(int z) { return {Kind::QT, static_cast<uint8_t>(z)}; }
    static DataAtom hdata(int j) { return {Kind::Hdata, static_cast<uint8_t>(j)}; }

    bool is_none() const { return kind == Kind::None; }
    auto operator<=>(const DataAtom&) const = default;
    std::string to_string() const;
};

/// Exponent multiset over root indices {0,...,n-1}: 4-bit counts packed in
/// a word (n <= 16, counts <= 15). Determinant-derived objects only ever
/// hold 0/1 counts (subsets); general products may accumulate counts.
using ExpCounts = uint64_t;

inline ExpCounts exp_nibble(int y) { return ExpCounts(1) << (4 * y); }
inline int exp_count_of(ExpCounts c, int y) { return static_cast<int>((c >> (4 * y)) & 0xF); }
inline ExpCounts counts_from_mask(uint32_t mask) {
    ExpCounts c = 0;
    for (int y = 0; y < 16; ++y)
        if (mask & (1u << y)) c |= exp_nibble(y);
    return c;
}
inline bool counts_is_subset(ExpCounts c) { return (c & 0xEEEEEEEEEEEEEEEEull) == 0; }

/// s = sum over y of count_y * omega^y.
inline cplx exponent_sum_counts(int n, ExpCounts c) {
    cplx s = 0.0;
    for (int y = 0; y < n; ++y) {
        int k = exp_count_of(c, y);
        if (k) s += static_cast<double>(k) * omega_pow(n, y);
    }
    return s;
}

struct ExponentKey {
    ExpCounts counts = 0;
    DataAtom atom{};
    auto operator<=>(const ExponentKey&) const = default;
};

/// Supplies values for data atoms during evaluation.
struct AtomEvaluator {
    std::function<cplx(int z, cplx rho)> q0hat;   // \hat q_0(omega^z rho)
    std::function<cplx(int z, cplx rho)> qThat;   // \hat q_T(omega^z rho)
    std::function<cplx(int j, cplx rho)> htilde;  // \tilde h_j(rho)
};

struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Finite sum of terms P_Y(rho) * exp(-i rho s_Y) * [optional data atom].
class ExpPolynomial {
  public:
    ExpPolynomial() = default;
    explicit ExpPolynomial(int n) : n_(n) {}

    int order() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<ExponentKey, CPoly>& terms() const { return terms_; }

    /// true when every key has an empty exponent set (pure polynomial in rho).
    bool is_polynomial() const;
    bool has_atoms() const;

    void add_term(ExpCounts counts, DataAtom atom, const CPoly& p);

    ExpPolynomial& operator+=(const ExpPolynomial& o);
    ExpPolynomial& operator-=(const ExpPolynomial& o);
    ExpPolynomial& operator*=(cplx s);
    friend ExpPolynomial operator+(ExpPolynomial a, const ExpPolynomial& b) { return a += b; }
    friend ExpPolynomial operator-(ExpPolynomial a, const ExpPolynomial& b) { return a -= b; }
    friend ExpPolynomial operator*(ExpPolynomial a, cplx s) { return a *= s; }
    friend ExpPolynomial operator*(cplx s, ExpPolynomial a) { return a *= s; }

    /// Multiply by a plain polynomial factor (exponents and atoms stay).
    ExpPolynomial times_poly(const CPoly& p) const;

    /// General product; exponent multisets add. At most one factor of each
    /// term pair may carry an atom.
    friend ExpPolynomial mul(const ExpPolynomial& f, const ExpPolynomial& g);

    /// Product restricted to disjoint exponent sets, as produced by
    /// determinant expansion over distinct rows; a repeated root index
    /// signals misuse and throws structural_error.
    friend ExpPolynomial mul_strict(const ExpPolynomial& f, const ExpPolynomial& g);

    /// Determinant of a square matrix of ExpPolynomials by subset dynamic
    /// programming over columns (Laplace expansion with memoization), with
    /// the strict disjoint-exponent product.
    static ExpPolynomial det(const std::vector<std::vector<ExpPolynomial>>& m);

    cplx evaluate(cplx rho) const;
    cplx evaluate(cplx rho, const AtomEvaluator& ev) const;

    /// Returns (w, kappa) with value = w * e^{kappa}, kappa real. Atom-free only.
    std::pair<cplx, double> evaluate_scaled(cplx rho) const;

    /// Termwise d/drho: (P' - i s_Y P) e^{-i rho s_Y}. Atom-free only.
    ExpPolynomial derivative() const;

    /// Drop coefficients small relative to the largest same-degree
    /// coefficient across all terms (degree-wise relative pruning).
    ExpPolynomial pruned_rel(double rel_tol) const;

    double max_abs_coeff() const;

    /// Debug dump, one line per term, sorted by Y lexicographically.
    std::string dump() const;

  private:
    int n_ = 0;
    std::map<ExponentKey, CPoly> terms_;
};

/// Lexicographic order on exponent multisets written as sorted lists.
bool lex_less_counts(ExpCounts a, ExpCounts b, int n);

/// Result of ranking exponent keys over a sector arc.
struct DominanceResult {
    std::vector<ExpCounts> maximizers;  ///< keys attaining the max at mid-arc
    bool strict = false;                ///< one s-value maximal at every interior grid point
    double min_margin = 0.0;            ///< min over interior grid of gap to runner-up
};

/// Rank exponent keys of f by Im(e^{i phi} s_Y) over the arc [phi1,phi2]
/// on a grid of `grid` interior points plus both endpoints. Keys with
/// equal s-values (within 1e-12) count as one.
DominanceResult dominant_exponent(const ExpPolynomial& f, double phi1, double phi2,
                                  int grid = 720);

} // namespace utm
