#include "slq/green.hpp"

#include "slq/parallel.hpp"
#include "slq/quadrature.hpp"
#include "slq/simd/kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace slq {

TensorGrid TensorGrid::uniform(double a, double b, int n) {
    if (n < 2) throw std::invalid_argument("TensorGrid: need at least two points per axis");
    std::vector<double> pts(n);
    for (int k = 0; k < n; ++k) pts[k] = a + (b - a) * double(k) / double(n - 1);
    pts.back() = b;
    return TensorGrid{pts, pts};
}

bool TensorGrid::same_as(const TensorGrid& other, double tol) const {
    if (t.size() != other.t.size() || tau.size() != other.tau.size()) return false;
    for (std::size_t k = 0; k < t.size(); ++k)
        if (std::abs(t[k] - other.t[k]) > tol) return false;
    for (std::size_t k = 0; k < tau.size(); ++k)
        if (std::abs(tau[k] - other.tau[k]) > tol) return false;
    return true;
}

Matrix boundary_matrix(const ShinZettlMatrix& A, const LinearBC& bc, const Mesh& mesh) {
    if (bc.dim != A.dim()) throw std::invalid_argument("boundary_matrix: dimension mismatch");
    FundamentalSolution Z = propagate(A, mesh);
    return bc.alpha + bc.beta * Z.endpoint();
}

GreenMatrix::GreenMatrix(TensorGrid grid, Complex mu, Index s)
    : grid_(std::move(grid)), mu_(mu), s_(s),
      values_(grid_.t.size() * grid_.tau.size() * 4 * s * s, Complex(0, 0)) {}

Matrix GreenMatrix::cell(std::size_t i, std::size_t j) const {
    const Index n = 2 * s_;
    Matrix out(n, n);
    const Complex* base = values_.data() + ((i * grid_.tau.size()) + j) * n * n;
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c) out(r, c) = base[r * n + c];
    return out;
}

double GreenMatrix::jump_residual(std::size_t i) const {
    // both one-sided limits at tau = t_i, off the stored factors
    auto it = std::lower_bound(grid_.tau.begin(), grid_.tau.end(), grid_.t[i] - 1e-12);
    if (it == grid_.tau.end() || std::abs(*it - grid_.t[i]) > 1e-12)
        throw std::invalid_argument("jump_residual: t_i is not a tau grid point");
    const std::size_t j = static_cast<std::size_t>(it - grid_.tau.begin());
    const Matrix below = left_lower_[i] * right_[j];
    const Matrix above = left_upper_[i] * right_[j];
    return spectral_norm(Matrix(above - below + Matrix::Identity(2 * s_, 2 * s_)));
}

GreenMatrix green_matrix(const ShinZettlMatrix& A, const LinearBC& bc, const TensorGrid& grid,
                         double max_step) {
    const Index s = A.dim();
    if (bc.dim != s) throw std::invalid_argument("green_matrix: boundary dimension mismatch");
    std::vector<double> required = grid.t;
    required.insert(required.end(), grid.tau.begin(), grid.tau.end());
    const Mesh mesh = Mesh::refine(A.system().breakpoints(), max_step, required);
    const FundamentalSolution Z = propagate(A, mesh);

    const Matrix Zb = Z.endpoint();
    const Matrix D = bc.alpha + bc.beta * Zb;
    if (condition_number(D) >= 1e12)
        throw NumericalError("mu is not in the resolvent set for this boundary condition");
    const auto Dlu = D.partialPivLu();
    const Matrix Dinv_alpha = Dlu.solve(bc.alpha);
    const Matrix Dinv_betaZb = Dlu.solve(Matrix(bc.beta * Zb));

    GreenMatrix gm(grid, A.lambda(), s);
    const std::size_t nt = grid.t.size(), ntau = grid.tau.size();
    const Index n = 2 * s;

    gm.left_lower_.resize(nt);
    gm.left_upper_.resize(nt);
    gm.right_.resize(ntau);
    for (std::size_t i = 0; i < nt; ++i) {
        const Matrix Zt = Z.eval(grid.t[i]);
        gm.left_lower_[i] = Zt * Dinv_alpha;
        gm.left_upper_[i] = -(Zt * Dinv_betaZb);
    }
    for (std::size_t j = 0; j < ntau; ++j)
        gm.right_[j] = Z.eval(grid.tau[j]).partialPivLu().inverse();

    parallel_for(nt, [&](std::size_t i) {
        for (std::size_t j = 0; j < ntau; ++j) {
            const Matrix cell = (grid.tau[j] <= grid.t[i] ? gm.left_lower_[i] : gm.left_upper_[i]) *
                                gm.right_[j];
            Complex* base = gm.values_.data() + ((i * ntau) + j) * n * n;
            for (Index r = 0; r < n; ++r)
                for (Index c = 0; c < n; ++c) base[r * n + c] = cell(r, c);
        }
    });
    return gm;
}

GreenKernel::GreenKernel(TensorGrid grid, Complex mu, Index s)
    : grid_(std::move(grid)), mu_(mu), s_(s),
      values_(grid_.t.size() * grid_.tau.size() * s * s, Complex(0, 0)) {}

Matrix GreenKernel::cell(std::size_t i, std::size_t j) const {
    Matrix out(s_, s_);
    const Complex* base = values_.data() + ((i * grid_.tau.size()) + j) * s_ * s_;
    for (Index r = 0; r < s_; ++r)
        for (Index c = 0; c < s_; ++c) out(r, c) = base[r * s_ + c];
    return out;
}

GreenKernel green_kernel(const GreenMatrix& gm) {
    const Index s = gm.dim();
    GreenKernel kernel(gm.grid(), gm.mu(), s);
    const std::size_t nt = gm.grid().t.size(), ntau = gm.grid().tau.size();
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < ntau; ++j) {
            const Matrix g = gm.cell(i, j);
            Complex* base = kernel.data() + ((i * ntau) + j) * s * s;
            for (Index r = 0; r < s; ++r)
                for (Index c = 0; c < s; ++c) base[r * s + c] = -g(r, s + c);
        }
    return kernel;
}

GreenKernel resolvent_kernel(const CoefficientSet& c, const LinearBC& bc, Complex mu,
                             const TensorGrid& grid, double max_step) {
    return green_kernel(green_matrix(shin_zettl(c, mu), bc, grid, max_step));
}

std::vector<Vector> apply_resolvent(const GreenKernel& kernel, const std::vector<Vector>& f) {
    const std::size_t ntau = kernel.grid().tau.size();
    const std::size_t nt = kernel.grid().t.size();
    const Index s = kernel.dim();
    if (f.size() != ntau) throw std::invalid_argument("apply_resolvent: grid mismatch");
    const std::vector<double> w = trapezoid_weights(kernel.grid().tau);

    std::vector<Vector> y(nt, Vector::Zero(s));
    if (s == 1) {
        std::vector<Complex> fv(ntau);
        for (std::size_t j = 0; j < ntau; ++j) fv[j] = f[j](0);
        for (std::size_t i = 0; i < nt; ++i)
            y[i](0) = simd::weighted_cdot(kernel.data() + i * ntau, fv.data(), w.data(), ntau);
        return y;
    }
    for (std::size_t i = 0; i < nt; ++i) {
        Vector acc = Vector::Zero(s);
        for (std::size_t j = 0; j < ntau; ++j) acc += w[j] * (kernel.cell(i, j) * f[j]);
        y[i] = acc;
    }
    return y;
}

namespace {

// per-double weights for one kernel row: tau weight replicated across the
// s^2 complex entries of each cell (re and im separately)
std::vector<double> row_weights(const GreenKernel& k) {
    const std::size_t ntau = k.grid().tau.size();
    const std::size_t block = 2 * k.dim() * k.dim();
    const std::vector<double> w = trapezoid_weights(k.grid().tau);
    std::vector<double> out(ntau * block);
    for (std::size_t j = 0; j < ntau; ++j)
        for (std::size_t e = 0; e < block; ++e) out[j * block + e] = w[j];
    return out;
}

} // namespace

double hs_norm(const GreenKernel& kernel) {
    const std::size_t nt = kernel.grid().t.size(), ntau = kernel.grid().tau.size();
    const std::size_t row_len = 2 * ntau * kernel.dim() * kernel.dim();
    const std::vector<double> wrow = row_weights(kernel);
    const std::vector<double> wt = trapezoid_weights(kernel.grid().t);
    const double* data = reinterpret_cast<const double*>(kernel.data());

    std::vector<double> rowsum(nt);
    parallel_for(nt, [&](std::size_t i) {
        rowsum[i] = simd::weighted_sumsq(data + i * row_len, wrow.data(), row_len);
    });
    double total = 0.0;
    for (std::size_t i = 0; i < nt; ++i) total += wt[i] * rowsum[i];
    return std::sqrt(total);
}

double hs_distance(const GreenKernel& k1, const GreenKernel& k2) {
    if (k1.dim() != k2.dim() || !k1.grid().same_as(k2.grid()))
        throw std::invalid_argument("hs_distance: grid mismatch");
    const std::size_t nt = k1.grid().t.size(), ntau = k1.grid().tau.size();
    const std::size_t row_len = 2 * ntau * k1.dim() * k1.dim();
    const std::vector<double> wrow = row_weights(k1);
    const std::vector<double> wt = trapezoid_weights(k1.grid().t);
    const double* d1 = reinterpret_cast<const double*>(k1.data());
    const double* d2 = reinterpret_cast<const double*>(k2.data());

    std::vector<double> rowsum(nt);
    parallel_for(nt, [&](std::size_t i) {
        rowsum[i] =
            simd::weighted_sumsq_diff(d1 + i * row_len, d2 + i * row_len, wrow.data(), row_len);
    });
    double total = 0.0;
    for (std::size_t i = 0; i < nt; ++i) total += wt[i] * rowsum[i];
    return std::sqrt(total);
}

double sup_distance(const GreenKernel& k1, const GreenKernel& k2) {
    if (k1.dim() != k2.dim() || !k1.grid().same_as(k2.grid()))
        throw std::invalid_argument("sup_distance: grid mismatch");
    double best = 0.0;
    for (std::size_t i = 0; i < k1.grid().t.size(); ++i)
        for (std::size_t j = 0; j < k1.grid().tau.size(); ++j)
            best = std::max(best, spectral_norm(Matrix(k1.cell(i, j) - k2.cell(i, j))));
    return best;
}

double hermitian_symmetry_defect(const GreenKernel& kernel) {
    const std::size_t n = kernel.grid().t.size();
    if (kernel.grid().tau.size() != n)
        throw std::invalid_argument("hermitian_symmetry_defect: square grid required");
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const Matrix d = kernel.cell(i, j) - kernel.cell(j, i).adjoint();
            best = std::max(best, d.cwiseAbs().maxCoeff());
        }
    return best;
}

Complex greens_formula_residual(const CoefficientSet& c, const Trajectory& y,
                                const std::function<Vector(double)>& f_y, const Trajectory& z,
                                const std::function<Vector(double)>& f_z) {
    (void)c; // trajectories already encode the quasi-derivatives
    const auto& nodes = y.mesh.nodes();
    if (z.mesh.nodes().size() != nodes.size())
        throw std::invalid_argument("greens_formula_residual: trajectory grid mismatch");
    for (std::size_t k = 0; k < nodes.size(); ++k)
        if (std::abs(nodes[k] - z.mesh.nodes()[k]) > 1e-12)
            throw std::invalid_argument("greens_formula_residual: trajectory grid mismatch");

    const Index s = y.dim;
    const std::vector<double> w = y.mesh.simpson_weights();
    Complex lhs(0, 0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const Vector yk = y.w[k].head(s);
        const Vector zk = z.w[k].head(s);
        const Vector d2y = -f_y(nodes[k]); // l[y] = f  =>  D2 y = -f
        const Vector d2z = -f_z(nodes[k]);
        lhs += w[k] * (zk.dot(d2y) - d2z.dot(yk));
    }
    auto bterm = [&](std::size_t k) {
        const Vector yk = y.w[k].head(s), d1y = y.w[k].tail(s);
        const Vector zk = z.w[k].head(s), d1z = z.w[k].tail(s);
        return zk.dot(d1y) - d1z.dot(yk);
    };
    const Complex rhs = bterm(nodes.size() - 1) - bterm(0);
    return lhs - rhs;
}

ResolventMembership in_resolvent_set(const ShinZettlMatrix& A_mu, const LinearBC& bc,
                                     double max_step) {
    const Mesh mesh = Mesh::spectral(A_mu.system(), max_step);
    const Matrix D = boundary_matrix(A_mu, bc, mesh);
    const double cond = condition_number(D);
    return {cond < 1e12, cond};
}

} // namespace slq
