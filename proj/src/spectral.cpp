#include "slq/spectral.hpp"

#include "slq/parallel.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace slq {

Matrix characteristic_matrix(const CoefficientSet& c, const LinearBC& bc, Complex lambda,
                             const SpectralOptions& opt) {
    const ShinZettlMatrix A = shin_zettl(c, lambda);
    const Mesh mesh = Mesh::spectral(A.system(), opt.max_step);
    return boundary_matrix(A, bc, mesh);
}

Complex char_det(const CoefficientSet& c, const LinearBC& bc, Complex lambda,
                 const SpectralOptions& opt) {
    return characteristic_matrix(c, bc, lambda, opt).determinant();
}

namespace {

struct SigmaProbe {
    double sigma_min;
    double sigma_max;
};

SigmaProbe sigma_probe(const CoefficientSet& c, const LinearBC& bc, Complex lambda,
                       const SpectralOptions& opt) {
    const Matrix D = characteristic_matrix(c, bc, lambda, opt);
    Eigen::JacobiSVD<Matrix> svd(D);
    const auto& sv = svd.singularValues();
    return {sv(sv.size() - 1), sv(0)};
}

// ||D|| reference for the sigma_min acceptance threshold. At an eigenvalue
// of full multiplicity 2s the matrix D(lambda) vanishes entirely, so the
// local sigma_max is useless as a scale; probe once at a point displaced
// from the candidate root.
double problem_scale(const CoefficientSet& c, const LinearBC& bc, Complex lambda,
                     double sigma_max_local, const SpectralOptions& opt) {
    const double delta = 1e-2 * std::max(1.0, std::abs(lambda));
    const double away = sigma_probe(c, bc, lambda + delta, opt).sigma_max;
    return std::max(sigma_max_local, away);
}

Eigenvalue make_eigenvalue(const CoefficientSet& c, const LinearBC& bc, Complex lambda,
                           double scale, const SpectralOptions& opt) {
    const Matrix D = characteristic_matrix(c, bc, lambda, opt);
    Eigen::JacobiSVD<Matrix> svd(D);
    const auto& sv = svd.singularValues();
    const double thresh = opt.sigma_rel_tol * scale;
    int mult = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) <= thresh) ++mult;
    return {lambda, std::max(mult, 1), sv(sv.size() - 1)};
}

} // namespace

ScanOutcome eigenvalues_real_scan(const CoefficientSet& c, const LinearBC& bc, double lambda_lo,
                                  double lambda_hi, int scan_points, const SpectralOptions& opt) {
    if (!(lambda_lo < lambda_hi))
        throw std::invalid_argument("eigenvalues_real_scan: empty window");
    if (scan_points < 3)
        throw std::invalid_argument("eigenvalues_real_scan: need at least three scan points");

    std::vector<double> grid(scan_points);
    for (int k = 0; k < scan_points; ++k)
        grid[k] = lambda_lo + (lambda_hi - lambda_lo) * double(k) / double(scan_points - 1);

    std::vector<double> sig(scan_points);
    parallel_for(scan_points, [&](std::size_t k) {
        sig[k] = sigma_probe(c, bc, grid[k], opt).sigma_min;
    });

    auto sigma_at = [&](double lam) { return sigma_probe(c, bc, lam, opt).sigma_min; };

    ScanOutcome out;
    constexpr double golden = 0.61803398874989484820;
    for (int k = 1; k + 1 < scan_points; ++k) {
        if (!(sig[k] <= sig[k - 1] && sig[k] <= sig[k + 1])) continue;
        // golden-section refinement on [grid[k-1], grid[k+1]]
        double x1 = grid[k - 1], x4 = grid[k + 1];
        double x2 = x4 - golden * (x4 - x1), x3 = x1 + golden * (x4 - x1);
        double f2 = sigma_at(x2), f3 = sigma_at(x3);
        const double width_tol = opt.refine_rel_width * std::max(1.0, std::abs(grid[k]));
        while (x4 - x1 > width_tol) {
            if (f2 <= f3) {
                x4 = x3;
                x3 = x2;
                f3 = f2;
                x2 = x4 - golden * (x4 - x1);
                f2 = sigma_at(x2);
            } else {
                x1 = x2;
                x2 = x3;
                f2 = f3;
                x3 = x1 + golden * (x4 - x1);
                f3 = sigma_at(x3);
            }
        }
        const double lam = 0.5 * (x1 + x4);
        const SigmaProbe probe = sigma_probe(c, bc, lam, opt);
        const double scale = problem_scale(c, bc, lam, probe.sigma_max, opt);
        if (probe.sigma_min > opt.sigma_rel_tol * scale) continue;

        // coarse-scan sanity: a second dip hiding in the same bracket shows
        // up as another near-threshold value strictly between refined root
        // and bracket edge
        for (double q : {0.5 * (grid[k - 1] + lam), 0.5 * (lam + grid[k + 1])}) {
            if (std::abs(q - lam) < 16 * width_tol) continue;
            if (sigma_at(q) <= opt.sigma_rel_tol * scale)
                out.warnings.push_back("possible second eigenvalue inside one scan cell near lambda=" +
                                       std::to_string(lam) + "; rescan with more points");
        }
        out.eigenvalues.push_back(make_eigenvalue(c, bc, lam, scale, opt));
    }

    // merge refinements that converged to the same root from adjacent brackets
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
              [](const Eigenvalue& a, const Eigenvalue& b) { return a.lambda.real() < b.lambda.real(); });
    std::vector<Eigenvalue> dedup;
    for (const auto& ev : out.eigenvalues) {
        const double tol = 1e2 * opt.refine_rel_width * std::max(1.0, std::abs(ev.lambda));
        if (!dedup.empty() && std::abs(ev.lambda.real() - dedup.back().lambda.real()) <= tol) {
            if (ev.residual < dedup.back().residual) dedup.back() = ev;
        } else {
            dedup.push_back(ev);
        }
    }
    out.eigenvalues = std::move(dedup);
    return out;
}

namespace {

struct DetCache {
    const CoefficientSet& c;
    const LinearBC& bc;
    const SpectralOptions& opt;
    std::map<std::pair<double, double>, Complex> cache;

    Complex operator()(Complex z) {
        auto key = std::make_pair(z.real(), z.imag());
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        Complex v = char_det(c, bc, z, opt);
        cache.emplace(key, v);
        return v;
    }
};

struct ContourResult {
    int winding;
    double min_abs;
    bool stable;
};

// phase-tracked winding number along the rectangle boundary. Edges start
// with a dense uniform sampling; every candidate step must stay below pi/2
// in phase AND survive a midpoint consistency probe (a hidden full turn
// between samples makes arg(fm/fa) + arg(fb/fm) differ from arg(fb/fa) by
// a multiple of 2 pi), otherwise it is split.
ContourResult contour_winding(DetCache& det, const ComplexRect& r) {
    constexpr int kInitialSamplesPerEdge = 32;
    const Complex corners[4] = {{r.re_lo, r.im_lo}, {r.re_hi, r.im_lo},
                                {r.re_hi, r.im_hi}, {r.re_lo, r.im_hi}};
    double total = 0.0;
    double min_abs = std::numeric_limits<double>::infinity();
    for (int e = 0; e < 4; ++e) {
        const Complex z0 = corners[e], z1 = corners[(e + 1) % 4];
        // pending targets, nearest on top
        std::vector<Complex> targets;
        for (int k = kInitialSamplesPerEdge; k >= 1; --k)
            targets.push_back(z0 + (z1 - z0) * (double(k) / kInitialSamplesPerEdge));
        Complex cur = z0;
        Complex fcur = det(z0);
        min_abs = std::min(min_abs, std::abs(fcur));
        int safety = 0;
        while (!targets.empty()) {
            if (++safety > 200000)
                throw NumericalError("eigenvalues_complex: winding number unstable under refinement");
            const Complex zb = targets.back();
            const Complex fb = det(zb);
            const double dphi = std::arg(fb / fcur);
            const bool degenerate = std::abs(zb - cur) < 1e-13 * (1 + std::abs(zb));
            bool accept = degenerate;
            if (!accept && std::abs(dphi) < 0.5 * std::numbers::pi) {
                const Complex zm = 0.5 * (cur + zb);
                const Complex fm = det(zm);
                min_abs = std::min(min_abs, std::abs(fm));
                const double d1 = std::arg(fm / fcur), d2 = std::arg(fb / fm);
                accept = std::abs(d1) < 0.5 * std::numbers::pi &&
                         std::abs(d2) < 0.5 * std::numbers::pi &&
                         std::abs(d1 + d2 - dphi) < 1e-6;
            }
            if (accept) {
                total += dphi;
                min_abs = std::min(min_abs, std::abs(fb));
                cur = zb;
                fcur = fb;
                targets.pop_back();
            } else {
                targets.push_back(0.5 * (cur + zb));
            }
        }
    }
    const double w = total / (2 * std::numbers::pi);
    const int wi = static_cast<int>(std::lround(w));
    return {wi, min_abs, std::abs(w - wi) <= 0.25};
}

ContourResult winding_with_perturb(DetCache& det, ComplexRect& r) {
    ContourResult res = contour_winding(det, r);
    if (res.min_abs <= 1e-10) {
        // zero (or near-zero) on the contour: grow the rectangle once, retry
        const double dx = 1e-6 * std::max(1.0, r.re_hi - r.re_lo);
        const double dy = 1e-6 * std::max(1.0, r.im_hi - r.im_lo);
        r = ComplexRect{r.re_lo - dx, r.re_hi + dx, r.im_lo - dy, r.im_hi + dy};
        res = contour_winding(det, r);
        if (res.min_abs <= 1e-10)
            throw NumericalError("eigenvalues_complex: char_det vanishes on the contour");
    }
    if (!res.stable)
        throw NumericalError("eigenvalues_complex: winding number unstable under refinement");
    return res;
}

bool inside(const ComplexRect& r, Complex z, double margin) {
    return z.real() >= r.re_lo - margin && z.real() <= r.re_hi + margin &&
           z.imag() >= r.im_lo - margin && z.imag() <= r.im_hi + margin;
}

// Newton with central finite-difference derivative
bool newton_polish(DetCache& det, Complex& z) {
    for (int it = 0; it < 60; ++it) {
        const double h = 1e-6 * std::max(1.0, std::abs(z));
        const Complex f = det(z);
        const Complex df = (det(z + h) - det(z - h)) / (2 * h);
        if (df == Complex(0, 0)) return false;
        const Complex dz = f / df;
        z -= dz;
        if (std::abs(dz) <= 1e-12 * std::max(1.0, std::abs(z))) return true;
    }
    return false;
}

void search_rect(DetCache& det, const CoefficientSet& c, const LinearBC& bc,
                 const SpectralOptions& opt, ComplexRect rect, int depth,
                 std::vector<Eigenvalue>& found) {
    ContourResult cr = winding_with_perturb(det, rect);
    if (cr.winding == 0) return;

    const Complex center(0.5 * (rect.re_lo + rect.re_hi), 0.5 * (rect.im_lo + rect.im_hi));
    const double diag = std::hypot(rect.re_hi - rect.re_lo, rect.im_hi - rect.im_lo);
    const double scale = std::max(1.0, std::abs(center));

    auto try_accept = [&](Complex z0) {
        Complex z = z0;
        if (!newton_polish(det, z)) return false;
        if (!inside(rect, z, 0.05 * diag + 1e-12 * scale)) return false;
        const SigmaProbe probe = sigma_probe(c, bc, z, opt);
        const double ref = problem_scale(c, bc, z, probe.sigma_max, opt);
        if (probe.sigma_min > opt.sigma_rel_tol * ref) return false;
        found.push_back(make_eigenvalue(c, bc, z, ref, opt));
        return true;
    };

    if (cr.winding == 1 && try_accept(center)) return;
    if (diag < 1e-8 * scale) {
        // cluster of zeros too tight to separate; report the centroid
        Complex z = center;
        newton_polish(det, z);
        const double ref = problem_scale(c, bc, z, sigma_probe(c, bc, z, opt).sigma_max, opt);
        Eigenvalue ev = make_eigenvalue(c, bc, z, ref, opt);
        ev.multiplicity = std::max(ev.multiplicity, cr.winding);
        found.push_back(ev);
        return;
    }
    if (depth <= 0)
        throw NumericalError("eigenvalues_complex: max subdivision depth exceeded");

    // slightly biased cuts keep subdivision lines off the real axis, where
    // the zeros of self-adjoint problems live
    const double rm = rect.re_lo + 0.493718 * (rect.re_hi - rect.re_lo);
    const double im = rect.im_lo + 0.506281 * (rect.im_hi - rect.im_lo);
    search_rect(det, c, bc, opt, {rect.re_lo, rm, rect.im_lo, im}, depth - 1, found);
    search_rect(det, c, bc, opt, {rm, rect.re_hi, rect.im_lo, im}, depth - 1, found);
    search_rect(det, c, bc, opt, {rect.re_lo, rm, im, rect.im_hi}, depth - 1, found);
    search_rect(det, c, bc, opt, {rm, rect.re_hi, im, rect.im_hi}, depth - 1, found);
}

} // namespace

std::vector<Eigenvalue> eigenvalues_complex(const CoefficientSet& c, const LinearBC& bc,
                                            const ComplexRect& rect, int max_depth,
                                            const SpectralOptions& opt) {
    if (!(rect.re_lo < rect.re_hi && rect.im_lo < rect.im_hi))
        throw std::invalid_argument("eigenvalues_complex: degenerate rectangle");
    DetCache det{c, bc, opt, {}};
    std::vector<Eigenvalue> found;
    search_rect(det, c, bc, opt, rect, max_depth, found);

    std::sort(found.begin(), found.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    std::vector<Eigenvalue> dedup;
    for (const auto& ev : found) {
        const double tol = 1e-7 * std::max(1.0, std::abs(ev.lambda));
        if (!dedup.empty() && std::abs(ev.lambda - dedup.back().lambda) <= tol) {
            if (ev.residual < dedup.back().residual) dedup.back() = ev;
        } else {
            dedup.push_back(ev);
        }
    }
    return dedup;
}

Complex l2_inner(const Mesh& mesh, const std::vector<Vector>& f, const std::vector<Vector>& g) {
    if (f.size() != mesh.size() || g.size() != mesh.size())
        throw std::invalid_argument("l2_inner: sample count does not match mesh");
    const std::vector<double> w = mesh.simpson_weights();
    Complex acc(0, 0);
    for (std::size_t k = 0; k < f.size(); ++k) acc += w[k] * g[k].dot(f[k]);
    return acc;
}

std::vector<Eigenfunction> eigenfunction_basis(const CoefficientSet& c, const LinearBC& bc,
                                               const Eigenvalue& ev, const SpectralOptions& opt) {
    const Index s = c.dim();
    const ShinZettlMatrix A = shin_zettl(c, ev.lambda);
    const Mesh mesh = Mesh::refine(A.system().breakpoints(), opt.max_step);
    const FundamentalSolution Z = propagate(A, mesh);
    const Matrix D = bc.alpha + bc.beta * Z.endpoint();

    Eigen::JacobiSVD<Matrix> svd(D, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = problem_scale(c, bc, ev.lambda, sv(0), opt);
    const double thresh = std::max(opt.sigma_rel_tol * scale, 2.0 * ev.residual);
    std::vector<Index> null_cols;
    for (Index k = sv.size() - 1; k >= 0; --k)
        if (sv(k) <= thresh) null_cols.push_back(k);
    if (null_cols.empty()) null_cols.push_back(sv.size() - 1);

    const std::vector<double> wq = mesh.trapezoid_weights();
    std::vector<Eigenfunction> out;
    for (Index col : null_cols) {
        const Vector cvec = svd.matrixV().col(col);
        Trajectory traj{mesh, s, {}};
        traj.w.reserve(mesh.size());
        for (std::size_t k = 0; k < mesh.size(); ++k) traj.w.push_back(Z.at_node(k) * cvec);

        double norm2 = 0.0, maxabs = 0.0;
        for (std::size_t k = 0; k < mesh.size(); ++k) {
            norm2 += wq[k] * traj.w[k].head(s).squaredNorm();
            maxabs = std::max(maxabs, traj.w[k].head(s).cwiseAbs().maxCoeff());
        }
        Complex phase(1, 0);
        for (std::size_t k = 0; k < mesh.size() && phase == Complex(1, 0); ++k)
            for (Index i = 0; i < s; ++i) {
                const Complex v = traj.w[k](i);
                if (std::abs(v) >= 1e-6 * maxabs) {
                    phase = std::conj(v) / std::abs(v);
                    break;
                }
            }
        const Complex scale = phase / std::sqrt(norm2);
        for (auto& wk : traj.w) wk *= scale;
        out.push_back(Eigenfunction{ev.lambda, std::move(traj)});
    }
    return out;
}

} // namespace slq
