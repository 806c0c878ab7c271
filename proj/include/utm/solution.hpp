#pragma once

#include "utm/charmat.hpp"
#include "utm/quadrature.hpp"
#include "utm/spectrum.hpp"
#include "utm/wellposed.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace utm {

/// Spectral transforms of the problem data: the Fourier transform of q0
/// on [0,1], the t-transforms of the boundary data on [0,T], and an
/// optional final-time transform supplied by an oracle or solver.
struct DataEvaluator {
    int n = 0;
    cplx a = 0.0;
    double T = 1.0;
    std::function<cplx(cplx)> q0hat;
    std::vector<std::function<cplx(cplx)>> htilde;  // 1-based datum j at [j-1]
    std::function<cplx(cplx)> qThat;                // optional

    AtomEvaluator atoms() const;
};

DataEvaluator make_data_evaluator(const ValidatedProblem& p);

cplx transform_q0(const DataEvaluator& de, cplx rho);
cplx transform_h(const DataEvaluator& de, int j, cplx rho);

/// H(rho): the boundary-data combination of the representation theorems;
/// identically zero for homogeneous problems.
cplx H_of_rho(const ValidatedProblem& p, const DataEvaluator& de, cplx rho);

/// A piecewise contour: straight segments and circular arcs.
struct ContourPlan {
    struct Piece {
        bool is_arc = false;
        cplx z0, z1;      // segment endpoints
        cplx center;      // arc data
        double r = 0.0, th0 = 0.0, th1 = 0.0;
        double min_wavelength = 1.0;  // oscillation floor for panel sizing
    };
    std::vector<Piece> pieces;
    double truncation_radius = 0.0;
    double tail_estimate = 0.0;

    cplx integrate(const std::function<cplx(cplx)>& f) const;
};

/// Boundary of the wedge (angle lo..hi, radii eps0..R) traversed
/// anticlockwise around the region, with circular detours around the
/// listed points (detour side = wedge interior). `radii` gives the detour
/// radius per avoided point; a single entry broadcasts.
ContourPlan wedge_boundary(double lo, double hi, double eps0, double R,
                           const std::vector<cplx>& avoid, std::vector<double> radii,
                           double min_wavelength);

struct SolveOptions {
    double radius = 0.0;       // spectrum search radius; 0 = 12 n
    double tol_series = 1e-8;
    double tol_int = 1e-8;
    double line_block = 40.0;  // real-line integration advances in blocks
    double line_max = 2000.0;
    DecayOptions decay{};
};

struct SolveResult {
    cplx value = 0.0;
    double tail_estimate = 0.0;
    std::vector<std::string> warnings;
};

/// Precomputes the Cramer system, verdicts, spectrum and transforms once,
/// then evaluates the solution representations pointwise.
class Solver {
  public:
    explicit Solver(ValidatedProblem p, SolveOptions opts = {});

    const ValidatedProblem& problem() const { return p_; }
    const CramerSystem& cramer() const { return cs_; }
    const Verdict& verdict() const { return v_; }
    const Verdict& dual_verdict() const { return vdual_; }
    const Spectrum& spectrum();
    DataEvaluator& data() { return de_; }

    /// Residue of e^{i rho x - a rho^n t} (sum of zeta over J+ or J-) / Delta
    /// at the k-th spectrum point (0-based, sorted by modulus).
    cplx residue_at(int k, bool plus_half, double x, double t);

    /// Series representation; requires both verdicts WellPosed. For
    /// inhomogeneous data the residue series alone does not close (the
    /// boundary-data transforms grow into the complement sectors), so the
    /// complement-sector contour correction is added and flagged in the
    /// warnings.
    SolveResult series(double x, double t);

    /// Integral representation; requires the primary verdict WellPosed.
    SolveResult integral(double x, double t);

    /// Implicit representation evaluated by quadrature (needs qThat).
    cplx implicit_rep(double x, double t);

    /// Boundary-function recovery at time t (needs qThat): returns the
    /// value of f_j(t) (left end) or g_j(t) (right end).
    cplx recover_boundary(int j, bool left_end, double t);

    /// Delta'(sigma) by termwise symbolic differentiation.
    cplx delta_prime(cplx sigma) const;

  private:
    cplx zeta_sum_over_delta(bool plus_half, cplx rho);
    cplx fG_value(bool plus_half, cplx rho);  // (sum zeta - e^{a rho^n T} sum eta)/Delta
    /// residue sum over the spectrum (the discrete-series part)
    cplx residue_sum(double x, double t, double& tail);
    /// complement-sector contour terms (exactly zero for homogeneous
    /// problems with a well-posed opposite direction)
    cplx wedge_terms(double x, double t, double& tail);
    ValidatedProblem p_;
    SolveOptions opts_;
    CramerSystem cs_;
    ExpPolynomial dprime_;
    Verdict v_, vdual_;
    SectorSet ss_;
    DataEvaluator de_;
    std::unique_ptr<Spectrum> sp_;
};

/// Max over sample points of the global-relation residual
/// |sum_j c_j (f~_j - e^{-i rho} g~_j) - q0^ + e^{a rho^n T} qT^|,
/// with the boundary-function transforms computed by adaptive quadrature
/// from the supplied closures.
double global_relation_residual(const ValidatedProblem& p,
                                const std::vector<std::function<cplx(double)>>& f,
                                const std::vector<std::function<cplx(double)>>& g,
                                const std::function<cplx(cplx)>& qThat, int samples = 40,
                                double radius = 5.0, unsigned seed = 777);

} // namespace utm
