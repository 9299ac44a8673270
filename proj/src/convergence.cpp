#include "slq/convergence.hpp"

#include <cmath>
#include <stdexcept>

namespace slq {

void Family::validate() const {
    if (epsilons.size() != members.size())
        throw std::invalid_argument("Family: epsilon/member count mismatch");
    if (epsilons.empty()) throw std::invalid_argument("Family: empty ladder");
    for (std::size_t k = 0; k < epsilons.size(); ++k) {
        if (epsilons[k] <= 0.0) throw std::invalid_argument("Family: epsilons must be positive");
        if (k > 0 && epsilons[k] >= epsilons[k - 1])
            throw std::invalid_argument("Family: epsilons must decrease");
    }
    const Index s = limit.coeffs.dim();
    for (const auto& m : members) {
        if (m.coeffs.dim() != s) throw std::invalid_argument("Family: dimension mismatch");
        if (!m.coeffs.p_inv.same_interval(limit.coeffs.p_inv))
            throw std::invalid_argument("Family: interval mismatch");
    }
}

HypothesisDistances hypothesis_distances(const Family& fam, std::size_t idx) {
    if (idx >= fam.members.size())
        throw std::out_of_range("hypothesis_distances: no such member");
    const CoefficientSet& ce = fam.members[idx].coeffs;
    const CoefficientSet& c0 = fam.limit.coeffs;
    HypothesisDistances d;
    d.p_inv = (ce.p_inv - c0.p_inv).l1_norm();
    d.p_inv_Q = (ce.p_inv_Q - c0.p_inv_Q).l1_norm();
    d.Q_p_inv = (ce.Q_p_inv - c0.Q_p_inv).l1_norm();
    d.Q_p_inv_Q = (ce.Q_p_inv_Q - c0.Q_p_inv_Q).l1_norm();
    d.alpha = spectral_norm(Matrix(fam.members[idx].bc.alpha - fam.limit.bc.alpha));
    d.beta = spectral_norm(Matrix(fam.members[idx].bc.beta - fam.limit.bc.beta));
    return d;
}

double mm_deviation(const Family& fam, std::size_t idx, double max_step) {
    if (idx >= fam.members.size()) throw std::out_of_range("mm_deviation: no such member");
    const PiecewiseMatrixPoly R = shin_zettl(fam.members[idx].coeffs, 0.0).system() -
                                  shin_zettl(fam.limit.coeffs, 0.0).system();
    const Mesh mesh = Mesh::refine(R.breakpoints(), max_step);
    return sup_deviation_from_identity(propagate(R, mesh));
}

ConvergenceReport resolvent_distances(const Family& fam, int grid_n, double max_step,
                                      double mm_max_step) {
    fam.validate();
    const double a = fam.limit.coeffs.left(), b = fam.limit.coeffs.right();
    const TensorGrid grid = TensorGrid::uniform(a, b, grid_n);

    const ShinZettlMatrix A0(std::make_shared<CoefficientSet>(fam.limit.coeffs), fam.mu);
    const ResolventMembership limit_membership = in_resolvent_set(A0, fam.limit.bc, max_step);
    if (!limit_membership.in_set)
        throw NumericalError("resolvent_distances: mu is not in the resolvent set of the limit operator");
    const GreenKernel k0 = resolvent_kernel(fam.limit.coeffs, fam.limit.bc, fam.mu, grid, max_step);

    ConvergenceReport report;
    report.limit_condition = limit_membership.condition;
    for (std::size_t idx = 0; idx < fam.members.size(); ++idx) {
        ConvergenceRow row;
        row.eps = fam.epsilons[idx];
        row.hyp = hypothesis_distances(fam, idx);
        row.mm_dev = mm_deviation(fam, idx, mm_max_step);
        row.hs_dist = row.sup_dist = std::numeric_limits<double>::quiet_NaN();
        row.status = "ok";
        try {
            const GreenKernel ke = resolvent_kernel(fam.members[idx].coeffs, fam.members[idx].bc,
                                                    fam.mu, grid, max_step);
            row.hs_dist = hs_distance(ke, k0);
            row.sup_dist = sup_distance(ke, k0);
        } catch (const NumericalError& err) {
            row.status = err.what(); // member skipped, ladder continues
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

namespace {

PiecewiseMatrixPoly heaviside_step(double a, double b, double t0, double strength) {
    Matrix zero = Matrix::Zero(1, 1), c = Matrix::Constant(1, 1, strength);
    return PiecewiseMatrixPoly({a, t0, b},
                               {PiecewiseMatrixPoly::Piece{{zero}}, PiecewiseMatrixPoly::Piece{{c}}});
}

PiecewiseMatrixPoly ramp(double a, double b, double t0, double strength, double eps) {
    // 0 | linear from 0 to strength on [t0 - eps/2, t0 + eps/2] | strength
    Matrix zero = Matrix::Zero(1, 1);
    Matrix c = Matrix::Constant(1, 1, strength);
    Matrix slope = Matrix::Constant(1, 1, strength / eps);
    return PiecewiseMatrixPoly({a, t0 - eps / 2, t0 + eps / 2, b},
                               {PiecewiseMatrixPoly::Piece{{zero}},
                                PiecewiseMatrixPoly::Piece{{zero, slope}},
                                PiecewiseMatrixPoly::Piece{{c}}});
}

} // namespace

Family make_mollified_delta_family(double t0, double strength, const std::vector<double>& widths,
                                   const LinearBC& bc, Complex mu, double a, double b) {
    if (bc.dim != 1)
        throw std::invalid_argument("make_mollified_delta_family: scalar boundary condition required");
    const PiecewiseMatrixPoly one = PiecewiseMatrixPoly::constant(a, b, Matrix::Identity(1, 1));
    Family fam{{},
               {},
               FamilyMember{make_coefficients(one, heaviside_step(a, b, t0, strength), true), bc},
               mu};
    for (double eps : widths) {
        if (!(t0 - eps / 2 > a && t0 + eps / 2 < b))
            throw std::invalid_argument("make_mollified_delta_family: ramp escapes the interval");
        fam.epsilons.push_back(eps);
        fam.members.push_back(
            FamilyMember{make_coefficients(one, ramp(a, b, t0, strength, eps), true), bc});
    }
    fam.validate();
    return fam;
}

Family make_condition5_violation_family(double t0, double strength,
                                        const std::vector<double>& widths, const LinearBC& bc,
                                        Complex mu, double angle, double a, double b) {
    Family fam = make_mollified_delta_family(t0, strength, widths, bc, mu, a, b);
    Matrix rot(2, 2);
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    for (auto& member : fam.members)
        member.bc = LinearBC(Matrix(member.bc.alpha * rot), member.bc.beta);
    return fam;
}

} // namespace slq
