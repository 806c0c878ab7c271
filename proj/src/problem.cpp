#include "utm/problem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace utm {

bool is_rref(const std::vector<std::vector<double>>& A, double tol) {
    const int rows = static_cast<int>(A.size());
    if (rows == 0) return false;
    const int cols = static_cast<int>(A[0].size());
    int prev_pivot = -1;
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(A[r].size()) != cols) return false;
        int p = -1;
        for (int c = 0; c < cols; ++c) {
            if (std::abs(A[r][c]) > tol) {
                p = c;
                break;
            }
        }
        if (p < 0) return false;  // zero row: rank deficient
        if (p <= prev_pivot) return false;
        if (std::abs(A[r][p] - 1.0) > tol) return false;
        for (int rr = 0; rr < rows; ++rr)
            if (rr != r && std::abs(A[rr][p]) > tol) return false;
        prev_pivot = p;
    }
    return true;
}

std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>>
rref_transform(const std::vector<std::vector<double>>& A, double tol) {
    auto R = A;
    const int rows = static_cast<int>(R.size());
    const int cols = rows ? static_cast<int>(R[0].size()) : 0;
    std::vector<std::vector<double>> M(rows, std::vector<double>(rows, 0.0));
    for (int i = 0; i < rows; ++i) M[i][i] = 1.0;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        double best = tol;
        for (int i = r; i < rows; ++i) {
            if (std::abs(R[i][c]) > best) {
                best = std::abs(R[i][c]);
                piv = i;
            }
        }
        if (piv < 0) continue;
        std::swap(R[piv], R[r]);
        std::swap(M[piv], M[r]);
        double d = R[r][c];
        for (int j = 0; j < cols; ++j) R[r][j] /= d;
        for (int j = 0; j < rows; ++j) M[r][j] /= d;
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            double f = R[i][c];
            if (f == 0.0) continue;
            for (int j = 0; j < cols; ++j) R[i][j] -= f * R[r][j];
            for (int j = 0; j < rows; ++j) M[i][j] -= f * M[r][j];
        }
        ++r;
    }
    return {R, M};
}

IndexSets index_sets(const std::vector<std::vector<double>>& A, int n) {
    if (!is_rref(A, 1e-12))
        throw spec_error("index_sets: boundary coefficient matrix is not in reduced row-echelon form");
    IndexSets is;
    is.n = n;
    is.pivotRowPlus.assign(n, 0);
    is.pivotRowMinus.assign(n, 0);
    for (int r = 0; r < n; ++r) {
        int p = -1;
        for (int c = 0; c < 2 * n; ++c) {
            if (std::abs(A[r][c]) > 1e-12) {
                p = c;
                break;
            }
        }
        // column layout: alpha_{n-1}, beta_{n-1}, ..., alpha_0, beta_0
        int order = n - 1 - p / 2;
        if (p % 2 == 0) {
            is.hatJplus.push_back(order);
            is.pivotRowPlus[order] = r + 1;
        } else {
            is.hatJminus.push_back(order);
            is.pivotRowMinus[order] = r + 1;
        }
    }
    std::sort(is.hatJplus.begin(), is.hatJplus.end());
    std::sort(is.hatJminus.begin(), is.hatJminus.end());
    for (int j = 0; j < n; ++j) {
        if (!std::binary_search(is.hatJplus.begin(), is.hatJplus.end(), j))
            is.tildeJplus.push_back(j);
        if (!std::binary_search(is.hatJminus.begin(), is.hatJminus.end(), j))
            is.tildeJminus.push_back(j);
    }
    for (int j : is.tildeJplus) is.Jseq.push_back(2 * j + 1);
    for (int j : is.tildeJminus) is.Jseq.push_back(2 * j);
    for (int j : is.hatJplus) is.Jprimeseq.push_back(2 * j + 1);
    for (int j : is.hatJminus) is.Jprimeseq.push_back(2 * j);
    std::sort(is.Jseq.rbegin(), is.Jseq.rend());
    std::sort(is.Jprimeseq.rbegin(), is.Jprimeseq.rend());
    return is;
}

BCClassification classify_bc(const ProblemSpec& p, const IndexSets& is) {
    BCClassification bc;
    const int n = p.n;
    bc.homogeneous = p.homogeneous();

    auto nz = [&](double v) { return std::abs(v) > 1e-12; };

    // coupled: some row with a pivot has a nonzero entry on the other end
    for (int j : is.hatJplus) {
        int k = is.pivotRowPlus[j];
        for (int r = 0; r < n; ++r)
            if (nz(p.beta(k, r))) bc.coupled = true;
    }
    for (int j : is.hatJminus) {
        int k = is.pivotRowMinus[j];
        for (int r = 0; r < n; ++r)
            if (nz(p.alpha(k, r))) bc.coupled = true;
    }

    // robin: some row mixes derivative orders
    for (int k = 1; k <= n; ++k) {
        int orders = 0;
        for (int j = 0; j < n; ++j)
            if (nz(p.alpha(k, j)) || nz(p.beta(k, j))) ++orders;
        if (orders > 1) bc.robin = true;
    }
    bc.simple = !bc.coupled && !bc.robin;

    // C: orders j with both alpha_{k,j} and beta_{k,j} nonzero for some row k
    for (int j = 0; j < n; ++j) {
        bool both = false;
        for (int k = 1; k <= n; ++k)
            if (nz(p.alpha(k, j)) && nz(p.beta(k, j))) both = true;
        if (both) ++bc.C;
    }
    // R: orders whose beta column is zero throughout
    for (int j = 0; j < n; ++j) {
        bool anyb = false;
        for (int k = 1; k <= n; ++k)
            if (nz(p.beta(k, j))) anyb = true;
        if (!anyb) ++bc.R;
    }

    // Robin-variant counts.
    // B1: j in tildeJminus such that beta_{k,j} != 0 in a row whose pivot is an alpha.
    for (int j : is.tildeJminus) {
        bool hit = false;
        for (int r : is.hatJplus) {
            int k = is.pivotRowPlus[r];
            if (nz(p.beta(k, j))) hit = true;
        }
        if (hit) ++bc.B1;
    }
    bc.B2 = static_cast<int>(is.tildeJminus.size());
    // B3: j in tildeJplus such that alpha_{k,j} != 0 in a row whose pivot is a beta.
    for (int j : is.tildeJplus) {
        bool hit = false;
        for (int r : is.hatJminus) {
            int k = is.pivotRowMinus[r];
            if (nz(p.alpha(k, j))) hit = true;
        }
        if (hit) ++bc.B3;
    }
    return bc;
}

std::vector<Violation> validate_violations(const ProblemSpec& p, double tol_compat) {
    std::vector<Violation> v;
    char buf[256];
    if (p.n < 2) v.push_back({"Pi1", "order n must be >= 2", 0.0});
    if (static_cast<int>(p.A.size()) != p.n ||
        std::any_of(p.A.begin(), p.A.end(), [&](const auto& r) {
            return static_cast<int>(r.size()) != 2 * p.n;
        })) {
        v.push_back({"Pi2", "A must be n x 2n", 0.0});
        return v;
    }
    if (!is_rref(p.A))
        v.push_back({"Pi2", "A is not in reduced row-echelon form of full rank", 0.0});
    if (p.n % 2 == 1) {
        if (std::abs(p.a - cplx(0.0, 1.0)) > 1e-12 && std::abs(p.a - cplx(0.0, -1.0)) > 1e-12)
            v.push_back({"Pi3", "odd order requires direction coefficient a = +i or -i", 0.0});
    } else {
        if (std::abs(std::abs(p.a) - 1.0) > 1e-9 || p.a.real() < -1e-12)
            v.push_back({"Pi3", "even order requires |a| = 1 with Re(a) >= 0", 0.0});
    }
    if (static_cast<int>(p.h.size()) != p.n)
        v.push_back({"schema", "h must contain exactly n functions", 0.0});
    if (p.T <= 0.0) v.push_back({"schema", "T must be positive", 0.0});

    if (v.empty()) {
        // Pi4: A * (q0^{(n-1)}(0), q0^{(n-1)}(1), ..., q0(0), q0(1))^T = h(0)
        std::vector<cplx> traces(2 * p.n);
        for (int j = 0; j < p.n; ++j) {
            traces[2 * j] = p.q0.deriv(p.n - 1 - j, 0.0);
            traces[2 * j + 1] = p.q0.deriv(p.n - 1 - j, 1.0);
        }
        double h0norm = 0.0;
        for (int k = 0; k < p.n; ++k) h0norm = std::max(h0norm, std::abs(p.h[k].eval(0.0)));
        double tol = tol_compat > 0 ? tol_compat : 1e-9 * (1.0 + h0norm);
        double worst = 0.0;
        int worst_row = 0;
        for (int k = 0; k < p.n; ++k) {
            cplx lhs = 0.0;
            for (int c = 0; c < 2 * p.n; ++c) lhs += p.A[k][c] * traces[c];
            double res = std::abs(lhs - p.h[k].eval(0.0));
            if (res > worst) {
                worst = res;
                worst_row = k + 1;
            }
        }
        if (worst > tol) {
            std::snprintf(buf, sizeof(buf),
                          "compatibility residual %.6g at boundary-condition row %d exceeds %.3g",
                          worst, worst_row, tol);
            v.push_back({"Pi4", buf, worst});
        }
    }
    return v;
}

ValidatedProblem validate(const ProblemSpec& p, double tol_compat) {
    auto viol = validate_violations(p, tol_compat);
    if (!viol.empty()) {
        std::string msg = "problem validation failed:";
        for (const auto& x : viol) msg += " [" + x.condition + "] " + x.detail + ";";
        throw spec_error(msg, viol);
    }
    auto is = index_sets(p.A, p.n);
    auto bc = classify_bc(p, is);
    return ValidatedProblem(p, std::move(is), bc);
}

} // namespace utm
