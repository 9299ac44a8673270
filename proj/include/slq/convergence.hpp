#pragma once

#include "slq/green.hpp"

#include <optional>
#include <string>
#include <vector>

namespace slq {

/// One member of an epsilon family: coefficients plus the (possibly
/// epsilon-dependent) boundary matrices.
struct FamilyMember {
    CoefficientSet coeffs;
    LinearBC bc;
};

/// Decreasing epsilon ladder with its limit member (epsilon = 0) and the
/// spectral point mu used for resolvent comparisons.
struct Family {
    std::vector<double> epsilons;      // strictly decreasing, positive
    std::vector<FamilyMember> members; // parallel to epsilons
    FamilyMember limit;                // the epsilon = 0 member
    Complex mu;

    void validate() const;
};

/// L1 distances of the four coefficient products plus the spectral-norm
/// distances of the boundary matrices (conditions (1)-(5)).
struct HypothesisDistances {
    double p_inv;     // (1)
    double p_inv_Q;   // (2)
    double Q_p_inv;   // (3)
    double Q_p_inv_Q; // (4)
    double alpha;     // (5)
    double beta;      // (5)
};

HypothesisDistances hypothesis_distances(const Family& fam, std::size_t idx);

/// sup_k || Z(t_k) - I || for Z' = (A_eps - A_0) Z, Z(a) = I (both systems
/// at spectral shift 0). Small values certify the M-class membership of the
/// deviation numerically.
double mm_deviation(const Family& fam, std::size_t idx, double max_step);

struct ConvergenceRow {
    double eps;
    HypothesisDistances hyp;
    double mm_dev;
    double hs_dist;  // Hilbert-Schmidt kernel distance to the limit member
    double sup_dist; // sup-norm kernel distance (the proof's majorant)
    std::string status; // "ok" or the failure reason
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows; // sorted by decreasing eps
    double limit_condition;           // cond of D(mu) for the limit member
};

/// Per-epsilon Green kernels at mu compared against the limit kernel on a
/// shared grid. Throws NumericalError when mu is not in the resolvent set
/// of the limit operator; individual member failures are recorded in the
/// row status instead.
ConvergenceReport resolvent_distances(const Family& fam, int grid_n, double max_step,
                                      double mm_max_step);

/// Mollified delta potential q = strength * delta(t - t0) on (a, b):
/// Q_0 = strength * 1(t > t0) and Q_eps the piecewise-linear ramp of width
/// eps, p^{-1} = I throughout, boundary condition shared by all members.
Family make_mollified_delta_family(double t0, double strength, const std::vector<double>& widths,
                                   const LinearBC& bc, Complex mu, double a = 0.0, double b = 1.0);

/// Negative control violating condition (5): same mollified coefficients,
/// but for eps > 0 the alpha matrix is post-composed with a fixed rotation
/// of the state (alpha(eps) = alpha(0) * R(angle)), so alpha(eps) does not
/// converge to alpha(0) and the resolvents converge to a different
/// operator's resolvent.
Family make_condition5_violation_family(double t0, double strength,
                                        const std::vector<double>& widths, const LinearBC& bc,
                                        Complex mu, double angle, double a = 0.0, double b = 1.0);

} // namespace slq
