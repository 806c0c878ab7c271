#pragma once

#include "utm/complex_util.hpp"
#include "utm/functionspec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace utm {

/// The full two-point IBVP description: order n, boundary coefficient
/// matrix A (n x 2n, reduced row-echelon form), direction coefficient a,
/// boundary data h, initial datum q0, final time T.
struct ProblemSpec {
    int n = 0;
    std::vector<std::vector<double>> A;  // n rows, 2n columns
    cplx a = 0.0;
    std::vector<FunctionSpec> h;  // n boundary data functions of t on [0,T]
    FunctionSpec q0;              // initial datum on [0,1]
    double T = 1.0;

    /// alpha_{row,j} / beta_{row,j} accessors (row 1-based, j = derivative
    /// order 0..n-1). Column layout: (alpha_{n-1}, beta_{n-1}, ..., alpha_0, beta_0).
    double alpha(int row, int j) const { return A[row - 1][2 * (n - 1 - j)]; }
    double beta(int row, int j) const { return A[row - 1][2 * (n - 1 - j) + 1]; }

    bool homogeneous() const {
        for (const auto& f : h)
            if (!f.is_zero_function()) return false;
        return true;
    }
};

/// Pivot bookkeeping for the boundary coefficient matrix.
struct IndexSets {
    int n = 0;
    std::vector<int> hatJplus;    // orders j with a pivot in the alpha_j column
    std::vector<int> hatJminus;   // orders j with a pivot in the beta_j column
    std::vector<int> tildeJplus;  // complement of hatJplus in {0..n-1}
    std::vector<int> tildeJminus; // complement of hatJminus
    std::vector<int> Jseq;        // decreasing, length n: 2j+1 for tildeJplus, 2j for tildeJminus
    std::vector<int> Jprimeseq;   // decreasing, length n: complement in {0..2n-1}
    std::vector<int> pivotRowPlus;   // order j -> 1-based pivot row (0 if none)
    std::vector<int> pivotRowMinus;  // order j -> 1-based pivot row (0 if none)
};

struct BCClassification {
    bool homogeneous = false;
    bool coupled = false;
    bool robin = false;
    bool simple = false;
    int C = 0;   // orders coupling both ends (non-Robin counting)
    int R = 0;   // orders whose beta column is entirely zero
    int B1 = 0, B2 = 0, B3 = 0;  // Robin-variant counts
};

struct Violation {
    std::string condition;  // "Pi1".."Pi4" or "schema"
    std::string detail;
    double residual = 0.0;
};

class ValidatedProblem {
  public:
    ValidatedProblem(ProblemSpec spec, IndexSets isets, BCClassification bc)
        : spec_(std::move(spec)), isets_(std::move(isets)), bc_(bc) {}
    const ProblemSpec& spec() const { return spec_; }
    const IndexSets& isets() const { return isets_; }
    const BCClassification& bc() const { return bc_; }

  private:
    ProblemSpec spec_;
    IndexSets isets_;
    BCClassification bc_;
};

/// True iff A is in reduced row-echelon form with full row rank
/// (pivot 1 within tol, zeros elsewhere in pivot columns, strictly
/// increasing pivot positions, no zero rows).
bool is_rref(const std::vector<std::vector<double>>& A, double tol = 1e-12);

/// Row-reduce (A | I), returning the RREF of A and the row-operation
/// matrix M with A_rref = M * A (so the transformed data are M * h).
std::pair<std::vector<std::vector<double>>, std::vector<std::vector<double>>>
rref_transform(const std::vector<std::vector<double>>& A, double tol = 1e-12);

IndexSets index_sets(const std::vector<std::vector<double>>& A, int n);

BCClassification classify_bc(const ProblemSpec& p, const IndexSets& is);

/// Check conditions (Pi1)-(Pi4); empty list means valid.
std::vector<Violation> validate_violations(const ProblemSpec& p, double tol_compat = -1.0);

/// Throwing wrapper: returns the validated problem or throws spec_error
/// listing every violated condition.
ValidatedProblem validate(const ProblemSpec& p, double tol_compat = -1.0);

struct spec_error : std::runtime_error {
    explicit spec_error(const std::string& what, std::vector<Violation> v = {})
        : std::runtime_error(what), violations(std::move(v)) {}
    std::vector<Violation> violations;
};

} // namespace utm
