#include "hypac/pdesolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "hypac/error.hpp"

namespace hypac {

namespace {

// Reductions sum fixed blocks of the active list and then the block sums in
// order, so results do not depend on the thread count.
constexpr int kBlock = 4096;

template <class Term>
double block_sum(const std::vector<int>& idx, Term&& term) {
    const int n = static_cast<int>(idx.size());
    const int nb = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(nb, 0.0);
#pragma omp parallel for schedule(static)
    for (int b = 0; b < nb; ++b) {
        double s = 0.0;
        const int end = std::min(n, (b + 1) * kBlock);
        for (int q = b * kBlock; q < end; ++q) s += term(idx[q]);
        partial[b] = s;
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double dot(const std::vector<int>& idx, const std::vector<double>& a, const std::vector<double>& b) {
    return block_sum(idx, [&](int k) { return a[k] * b[k]; });
}

void require_same_grid(const DiskGrid& grid, const Field& f) {
    if (&f.grid() != &grid && (f.grid().size() != grid.size() || f.grid().spacing() != grid.spacing() ||
                               f.grid().r_max() != grid.r_max()))
        throw MaskError("field belongs to a different grid");
}

}  // namespace

// ---------------------------------------------------------------------------
// DiskGrid / Field

DiskGrid::DiskGrid(double h_g, double r_max) : r_max_(r_max) {
    if (!(h_g > 0.0) || !(r_max > 0.0) || !(r_max < 1.0)) throw MaskError("need h_g > 0 and 0 < r_max < 1");
    const double cells = 2.0 / h_g;
    n_ = static_cast<int>(std::lround(cells));
    if (std::abs(cells - n_) > 1e-9 * cells || n_ < 4 || n_ % 2 != 0)
        throw MaskError("h_g must split [-1, 1] into an even number of cells");
    h_ = 2.0 / n_;
    if (!(r_max_ + h_ < 1.0)) throw MaskError("r_max + h_g must stay below 1");

    type_.assign(static_cast<std::size_t>(n_) * n_, CellType::Outside);
    lambda_.assign(type_.size(), 0.0);
    const double r2max = r_max_ * r_max_;
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i) {
            const double r2 = x(i) * x(i) + y(j) * y(j);
            if (r2 < r2max) type_[index(i, j)] = CellType::Active;
        }
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i) {
            const int k = index(i, j);
            if (type_[k] == CellType::Active) {
                active_.push_back(k);
                continue;
            }
            const bool touches = (i > 0 && type_[k - 1] == CellType::Active) ||
                                 (i + 1 < n_ && type_[k + 1] == CellType::Active) ||
                                 (j > 0 && type_[k - n_] == CellType::Active) ||
                                 (j + 1 < n_ && type_[k + n_] == CellType::Active);
            if (touches) boundary_.push_back(k);
        }
    for (int k : boundary_) type_[k] = CellType::Boundary;
    for (int j = 0; j < n_; ++j)
        for (int i = 0; i < n_; ++i) {
            const int k = index(i, j);
            if (type_[k] != CellType::Outside)
                lambda_[k] = 2.0 / (1.0 - (x(i) * x(i) + y(j) * y(j)));
        }
    if (active_.empty()) throw MaskError("grid has no active cells");
}

double DiskGrid::truncation_distance() const { return 2.0 * std::atanh(r_max_); }

Field::Field(std::shared_ptr<const DiskGrid> grid, double fill) : grid_(std::move(grid)) {
    values_.assign(grid_->size(), 0.0);
    if (fill != 0.0) {
        for (int k : grid_->active()) values_[k] = fill;
        for (int k : grid_->boundary()) values_[k] = fill;
    }
}

double Field::interpolate(double x, double y) const {
    const DiskGrid& g = *grid_;
    const double fx = (x + 1.0) / g.spacing() - 0.5, fy = (y + 1.0) / g.spacing() - 0.5;
    const int i0 = static_cast<int>(std::floor(fx)), j0 = static_cast<int>(std::floor(fy));
    const int n = g.cells_per_side();
    if (i0 < 0 || j0 < 0 || i0 + 1 >= n || j0 + 1 >= n) throw DomainError("point outside the grid");
    const int k00 = g.index(i0, j0), k10 = k00 + 1, k01 = k00 + n, k11 = k01 + 1;
    for (int k : {k00, k10, k01, k11})
        if (g.type(k) == CellType::Outside) throw DomainError("interpolation stencil leaves the grid");
    const double ax = fx - i0, ay = fy - j0;
    return (1 - ax) * (1 - ay) * values_[k00] + ax * (1 - ay) * values_[k10] + (1 - ax) * ay * values_[k01] +
           ax * ay * values_[k11];
}

double Field::sup_norm() const {
    double s = 0.0;
    for (int k : grid_->active()) s = std::max(s, std::abs(values_[k]));
    return s;
}

Field hyperbolic_laplacian_apply(const DiskGrid& grid, const Field& field) {
    require_same_grid(grid, field);
    Field out(field.grid_ptr());
    const int n = grid.cells_per_side();
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    const auto& u = field.values();
    const auto& lam = grid.conformal();
    const auto& act = grid.active();
    const int m = static_cast<int>(act.size());
#pragma omp parallel for schedule(static)
    for (int q = 0; q < m; ++q) {
        const int k = act[q];
        const double lap = (u[k - 1] + u[k + 1] + u[k - n] + u[k + n] - 4.0 * u[k]) * inv_h2;
        out[k] = lap / (lam[k] * lam[k]);
    }
    return out;
}

Field boundary_data(const ApproximateSolution& approx, std::shared_ptr<const DiskGrid> grid) {
    const double reach = grid->truncation_distance();
    const auto& gs = approx.configuration().geodesics();
    for (std::size_t j = 0; j < gs.size(); ++j) {
        if (gs[j].distance_from_origin() > reach - 2.0) {
            std::ostringstream os;
            os << "geodesic " << j << " passes at distance " << gs[j].distance_from_origin()
               << " from the origin; the truncation circle sits at " << reach;
            throw TruncationTooTight(os.str());
        }
    }
    Field out(grid);
    for (int k : grid->boundary()) out[k] = approx.value(grid->center(k));
    return out;
}

// ---------------------------------------------------------------------------
// ScreenedOperator

ScreenedOperator::ScreenedOperator(std::shared_ptr<const DiskGrid> grid, std::vector<double> w)
    : grid_(std::move(grid)), w_(std::move(w)) {
    if (static_cast<int>(w_.size()) != grid_->size()) throw MaskError("potential does not match the grid");
}

void ScreenedOperator::apply_flat(const std::vector<double>& x, std::vector<double>& out) const {
    const DiskGrid& g = *grid_;
    const int n = g.cells_per_side();
    const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
    const auto& lam = g.conformal();
    const auto& types = g.types();
    out.assign(x.size(), 0.0);
    const auto& act = g.active();
    const int m = static_cast<int>(act.size());
    auto val = [&](int k) { return types[k] == CellType::Active ? x[k] : 0.0; };
#pragma omp parallel for schedule(static)
    for (int q = 0; q < m; ++q) {
        const int k = act[q];
        out[k] = (4.0 * x[k] - val(k - 1) - val(k + 1) - val(k - n) - val(k + n)) * inv_h2 +
                 lam[k] * lam[k] * w_[k] * x[k];
    }
}

// ---------------------------------------------------------------------------
// Multigrid-preconditioned CG

namespace {

struct Level {
    int n = 0;
    double inv_h2 = 0.0;
    std::vector<unsigned char> active;
    std::vector<double> c;  // zeroth-order coefficient of the flat operator
    std::vector<int> cells, red, black;
    mutable std::vector<double> x, b, r;

    double nb(const std::vector<double>& v, int k) const { return active[k] ? v[k] : 0.0; }

    void sweep(const std::vector<int>& color) const {
        const int m = static_cast<int>(color.size());
#pragma omp parallel for schedule(static)
        for (int q = 0; q < m; ++q) {
            const int k = color[q];
            const double s = nb(x, k - 1) + nb(x, k + 1) + nb(x, k - n) + nb(x, k + n);
            x[k] = (b[k] + s * inv_h2) / (4.0 * inv_h2 + c[k]);
        }
    }

    void residual() const {
        const int m = static_cast<int>(cells.size());
#pragma omp parallel for schedule(static)
        for (int q = 0; q < m; ++q) {
            const int k = cells[q];
            const double s = nb(x, k - 1) + nb(x, k + 1) + nb(x, k - n) + nb(x, k + n);
            r[k] = b[k] - ((4.0 * x[k] - s) * inv_h2 + c[k] * x[k]);
        }
    }
};

}  // namespace

struct LinearSolver::Impl {
    const ScreenedOperator* op = nullptr;
    int max_iterations = 500;
    std::vector<Level> levels;
    static constexpr int kPre = 2, kCoarsest = 24;

    void build(const ScreenedOperator& o) {
        op = &o;
        const DiskGrid& g = o.grid();
        Level fine;
        fine.n = g.cells_per_side();
        fine.inv_h2 = 1.0 / (g.spacing() * g.spacing());
        fine.active.assign(g.size(), 0);
        fine.c.assign(g.size(), 0.0);
        const auto& lam = g.conformal();
        for (int k : g.active()) {
            fine.active[k] = 1;
            fine.c[k] = lam[k] * lam[k] * o.potential()[k];
            if (!(4.0 * fine.inv_h2 + fine.c[k] > 0.0))
                throw LinearSolveFailure("grid too coarse for the negative part of the potential");
        }
        levels.push_back(std::move(fine));
        while (levels.back().n >= 16) {
            const Level& f = levels.back();
            Level cl;
            cl.n = f.n / 2;
            cl.inv_h2 = f.inv_h2 / 4.0;
            cl.active.assign(static_cast<std::size_t>(cl.n) * cl.n, 0);
            cl.c.assign(cl.active.size(), 0.0);
            int count = 0;
            for (int J = 0; J < cl.n; ++J)
                for (int I = 0; I < cl.n; ++I) {
                    const int k0 = (2 * J) * f.n + 2 * I;
                    const int kids[4] = {k0, k0 + 1, k0 + f.n, k0 + f.n + 1};
                    bool all = true;
                    double csum = 0.0;
                    for (int kk : kids) {
                        all = all && f.active[kk];
                        csum += f.c[kk];
                    }
                    if (!all) continue;
                    const int K = J * cl.n + I;
                    cl.active[K] = 1;
                    cl.c[K] = std::max(0.0, 0.25 * csum);
                    ++count;
                }
            if (count < 4) break;
            levels.push_back(std::move(cl));
        }
        for (auto& L : levels) {
            for (int k = 0; k < static_cast<int>(L.active.size()); ++k) {
                if (!L.active[k]) continue;
                L.cells.push_back(k);
                (((k % L.n) + (k / L.n)) % 2 == 0 ? L.red : L.black).push_back(k);
            }
            L.x.assign(L.active.size(), 0.0);
            L.b.assign(L.active.size(), 0.0);
            L.r.assign(L.active.size(), 0.0);
        }
    }

    void vcycle(std::size_t l) const {
        const Level& L = levels[l];
        std::fill(L.x.begin(), L.x.end(), 0.0);
        if (l + 1 == levels.size()) {
            for (int s = 0; s < kCoarsest; ++s) {
                L.sweep(L.red);
                L.sweep(L.black);
                L.sweep(L.black);
                L.sweep(L.red);
            }
            return;
        }
        for (int s = 0; s < kPre; ++s) {
            L.sweep(L.red);
            L.sweep(L.black);
        }
        L.residual();
        const Level& C = levels[l + 1];
        const int cm = static_cast<int>(C.cells.size());
#pragma omp parallel for schedule(static)
        for (int q = 0; q < cm; ++q) {
            const int K = C.cells[q];
            const int k0 = 2 * (K / C.n) * L.n + 2 * (K % C.n);
            C.b[K] = 0.25 * (L.r[k0] + L.r[k0 + 1] + L.r[k0 + L.n] + L.r[k0 + L.n + 1]);
        }
        vcycle(l + 1);
#pragma omp parallel for schedule(static)
        for (int q = 0; q < cm; ++q) {
            const int K = C.cells[q];
            const int k0 = 2 * (K / C.n) * L.n + 2 * (K % C.n);
            const double e = C.x[K];
            L.x[k0] += e;
            L.x[k0 + 1] += e;
            L.x[k0 + L.n] += e;
            L.x[k0 + L.n + 1] += e;
        }
        for (int s = 0; s < kPre; ++s) {
            L.sweep(L.black);
            L.sweep(L.red);
        }
    }

    void precondition(const std::vector<double>& r, std::vector<double>& z) const {
        const Level& L = levels[0];
        for (int k : L.cells) L.b[k] = r[k];
        vcycle(0);
        z.assign(r.size(), 0.0);
        for (int k : L.cells) z[k] = L.x[k];
    }

    void pcg(const std::vector<double>& b, std::vector<double>& x, double tol, LinearSolveReport* rep) const {
        const auto& act = op->grid().active();
        x.assign(b.size(), 0.0);
        const double bnorm = std::sqrt(dot(act, b, b));
        if (rep) *rep = {};
        if (bnorm == 0.0) return;
        std::vector<double> r = b, z, p, Ap;
        precondition(r, z);
        p = z;
        double rz = dot(act, r, z);
        double best = 1.0;
        int since_best = 0;
        for (int it = 1; it <= max_iterations; ++it) {
            op->apply_flat(p, Ap);
            const double pAp = dot(act, p, Ap);
            if (!(pAp > 0.0)) throw LinearSolveFailure("operator is not positive definite");
            const double alpha = rz / pAp;
            for (int k : act) {
                x[k] += alpha * p[k];
                r[k] -= alpha * Ap[k];
            }
            const double rel = std::sqrt(dot(act, r, r)) / bnorm;
            if (rep) {
                rep->iterations = it;
                rep->relative_residual = rel;
            }
            if (rel <= tol) return;
            if (rel < 0.5 * best) {
                best = rel;
                since_best = 0;
            } else if (++since_best > 50) {
                break;
            }
            precondition(r, z);
            const double rz_new = dot(act, r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int k : act) p[k] = z[k] + beta * p[k];
        }
        std::ostringstream os;
        os << "conjugate gradients stalled at relative residual "
           << std::sqrt(dot(act, r, r)) / bnorm << " (target " << tol << ")";
        throw LinearSolveFailure(os.str());
    }
};

LinearSolver::LinearSolver(const ScreenedOperator& op, int max_iterations) : impl_(std::make_unique<Impl>()) {
    impl_->max_iterations = max_iterations;
    impl_->build(op);
}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

const ScreenedOperator& LinearSolver::op() const { return *impl_->op; }

void LinearSolver::precondition(const std::vector<double>& r, std::vector<double>& z) const {
    impl_->precondition(r, z);
}

void LinearSolver::solve_flat(const std::vector<double>& b, std::vector<double>& x, double tol,
                              LinearSolveReport* report) const {
    impl_->pcg(b, x, tol, report);
}

Field LinearSolver::solve(const Field& rhs, double tol, LinearSolveReport* report) const {
    const DiskGrid& g = op().grid();
    require_same_grid(g, rhs);
    const auto& lam = g.conformal();
    std::vector<double> b(g.size(), 0.0);
    for (int k : g.active()) b[k] = lam[k] * lam[k] * rhs[k];
    Field out(op().grid_ptr());
    impl_->pcg(b, out.values(), tol, report);
    return out;
}

Field linear_solve(const ScreenedOperator& op, const Field& rhs, double tol) {
    return LinearSolver(op).solve(rhs, tol);
}

// ---------------------------------------------------------------------------
// Nonlinear correction

std::string to_string(Formulation f) { return f == Formulation::Direct ? "direct" : "corrected"; }

Formulation formulation_from_string(const std::string& s) {
    if (s == "direct") return Formulation::Direct;
    if (s == "corrected") return Formulation::Corrected;
    throw InvalidArgument("unknown formulation '" + s + "' (expected direct or corrected)");
}

DiscreteProblem assemble_problem(const ApproximateSolution& approx, std::shared_ptr<const DiskGrid> grid,
                                 Formulation formulation) {
    DiscreteProblem prob{grid, approx.profile().potential(), formulation, Field(grid), Field(grid), Field(grid)};
    const Field bd = boundary_data(approx, grid);
    const DiskGrid& g = *grid;
    const auto& act = g.active();
    const int m = static_cast<int>(act.size());
#pragma omp parallel for schedule(static)
    for (int q = 0; q < m; ++q) {
        const int k = act[q];
        const DiskPoint p = g.center(k);
        prob.u_H[k] = approx.value(p);
        prob.tau[k] = approx.tau(p);
        if (formulation == Formulation::Corrected) prob.g[k] = approx.residual(p);
    }
    for (int k : g.boundary()) prob.u_H[k] = bd[k];
    if (formulation == Formulation::Direct) {
        const Field lap = hyperbolic_laplacian_apply(g, prob.u_H);
        for (int k : act) prob.g[k] = lap[k] - prob.potential.f(prob.u_H[k]);
    }
    return prob;
}

Field discrete_residual(const DiscreteProblem& prob, const Field& v) {
    const DiskGrid& g = *prob.grid;
    Field r = hyperbolic_laplacian_apply(g, v);
    const auto& F = prob.potential;
    for (int k : g.active()) {
        const double uh = prob.u_H[k];
        r[k] += prob.g[k] - (F.f(uh + v[k]) - F.f(uh));
    }
    return r;
}

namespace {

double weighted_sup(const Field& f, const Field& tau, double mu) {
    double s = 0.0;
    for (int k : f.grid().active()) s = std::max(s, std::abs(f[k]) * std::cosh(mu * tau[k]));
    return s;
}

double sup_diff(const Field& a, const Field& b) {
    double s = 0.0;
    for (int k : a.grid().active()) s = std::max(s, std::abs(a[k] - b[k]));
    return s;
}

SolveResult finish(const DiscreteProblem& prob, Field v, SolverReport rep) {
    SolveResult res{v, prob.u_H, std::move(rep)};
    for (int k : prob.grid->active()) res.u[k] += v[k];
    res.report.correction_norm = v.sup_norm();
    return res;
}

}  // namespace

SolveResult picard_solve(const DiscreteProblem& prob, const NonlinearOptions& opts) {
    const DiskGrid& g = *prob.grid;
    const auto& F = prob.potential;
    std::vector<double> w(g.size(), 0.0);
    for (int k : g.active()) w[k] = F.fprime(prob.u_H[k]);
    const ScreenedOperator op(prob.grid, std::move(w));
    const LinearSolver solver(op);

    SolverReport rep;
    rep.method = "picard";
    Field v(prob.grid);
    Field R = discrete_residual(prob, v);
    rep.residual_trace.push_back(R.sup_norm());
    rep.weighted_trace.push_back(weighted_sup(R, prob.tau, opts.mu));
    if (rep.residual_trace.back() <= opts.tol) {
        rep.converged = true;
        return finish(prob, std::move(v), std::move(rep));
    }
    int growth = 0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        Field rhs(prob.grid);
        for (int k : g.active()) {
            const double uh = prob.u_H[k], vk = v[k];
            const double Q = F.f(uh + vk) - F.f(uh) - F.fprime(uh) * vk;
            rhs[k] = prob.g[k] - Q;
        }
        LinearSolveReport lr;
        Field next = solver.solve(rhs, opts.linear_tol, &lr);
        rep.linear_iterations.push_back(lr.iterations);
        const double inc = sup_diff(next, v);
        v = std::move(next);
        R = discrete_residual(prob, v);
        rep.iterations = it;
        rep.increment_trace.push_back(inc);
        rep.residual_trace.push_back(R.sup_norm());
        rep.weighted_trace.push_back(weighted_sup(R, prob.tau, opts.mu));
        if (rep.residual_trace.back() <= opts.tol) {
            rep.converged = true;
            return finish(prob, std::move(v), std::move(rep));
        }
        const std::size_t m = rep.increment_trace.size();
        if (m >= 2 && !(rep.increment_trace[m - 1] < rep.increment_trace[m - 2])) {
            if (++growth >= 3) {
                std::ostringstream os;
                os << "fixed-point increments stopped shrinking at iteration " << it << " (|dv| = " << inc
                   << ", residual " << rep.residual_trace.back() << ")";
                throw ContractionFailure(os.str());
            }
        } else {
            growth = 0;
        }
    }
    std::ostringstream os;
    os << "no convergence in " << opts.max_iterations << " fixed-point iterations (residual "
       << rep.residual_trace.back() << ")";
    throw ContractionFailure(os.str());
}

SolveResult newton_solve(const DiscreteProblem& prob, const NonlinearOptions& opts) {
    const DiskGrid& g = *prob.grid;
    const auto& F = prob.potential;
    SolverReport rep;
    rep.method = "newton";
    Field v(prob.grid);
    Field R = discrete_residual(prob, v);
    double rnorm = R.sup_norm();
    rep.residual_trace.push_back(rnorm);
    rep.weighted_trace.push_back(weighted_sup(R, prob.tau, opts.mu));
    for (int it = 1; rnorm > opts.tol; ++it) {
        if (it > opts.max_iterations) {
            std::ostringstream os;
            os << "no convergence in " << opts.max_iterations << " Newton iterations (residual " << rnorm << ")";
            throw NewtonDivergence(os.str());
        }
        std::vector<double> w(g.size(), 0.0);
        for (int k : g.active()) w[k] = F.fprime(prob.u_H[k] + v[k]);
        const ScreenedOperator op(prob.grid, std::move(w));
        LinearSolveReport lr;
        const Field step = LinearSolver(op).solve(R, opts.linear_tol, &lr);
        rep.linear_iterations.push_back(lr.iterations);

        double alpha = 1.0;
        for (int halvings = 0;; ++halvings) {
            Field trial = v;
            for (int k : g.active()) trial[k] += alpha * step[k];
            Field Rt = discrete_residual(prob, trial);
            const double rt = Rt.sup_norm();
            if (rt < rnorm) {
                rep.increment_trace.push_back(alpha * step.sup_norm());
                v = std::move(trial);
                R = std::move(Rt);
                rnorm = rt;
                break;
            }
            if (halvings >= 20) {
                std::ostringstream os;
                os << "line search failed at Newton iteration " << it << " (residual " << rnorm << ")";
                throw NewtonDivergence(os.str());
            }
            alpha *= 0.5;
        }
        rep.iterations = it;
        rep.residual_trace.push_back(rnorm);
        rep.weighted_trace.push_back(weighted_sup(R, prob.tau, opts.mu));
    }
    rep.converged = true;
    return finish(prob, std::move(v), std::move(rep));
}

// ---------------------------------------------------------------------------
// Diagnostics

ResidualSummary residual_gH(const ApproximateSolution& approx, std::shared_ptr<const DiskGrid> grid, double mu,
                            bool discrete) {
    const DiskGrid& g = *grid;
    ResidualSummary out{Field(grid)};
    const auto& act = g.active();
    const int m = static_cast<int>(act.size());
    if (discrete) {
        Field uh = sample_field(grid, [&](const DiskPoint& p) { return approx.value(p); });
        const Field lap = hyperbolic_laplacian_apply(g, uh);
        for (int k : act) out.g[k] = lap[k] - approx.profile().potential().f(uh[k]);
    } else {
#pragma omp parallel for schedule(static)
        for (int q = 0; q < m; ++q) out.g[act[q]] = approx.residual(g.center(act[q]));
    }
    std::vector<double> pure(g.size(), 0.0);
#pragma omp parallel for schedule(static)
    for (int q = 0; q < m; ++q) {
        const auto chi = approx.partition().weights(g.center(act[q]));
        // a single nonzero weight; chi_j == 1.0 alone can hide a tiny neighbour
        pure[act[q]] = std::count_if(chi.begin(), chi.end(), [](double c) { return c > 0.0; }) == 1 ? 1.0 : 0.0;
    }
    out.sup = out.g.sup_norm();
    out.weighted_sup = weighted_sup_norm(out.g, approx.configuration(), mu, 0.0);
    for (int k : act)
        if (pure[k] != 0.0) out.sup_outside_overlap = std::max(out.sup_outside_overlap, std::abs(out.g[k]));
    return out;
}

double weighted_sup_norm(const Field& field, const LabeledConfiguration& cfg, double mu, double delta) {
    const DiskGrid& g = field.grid();
    const auto& act = g.active();
    double s = 0.0;
    for (int k : act) {
        const double f = field[k];
        if (f == 0.0) continue;
        const DiskPoint p = g.center(k);
        const double rho = weight_rho(cfg, p);
        s = std::max(s, std::abs(f) * std::cosh(mu * weight_tau(cfg, p)) * std::pow(rho, -delta));
    }
    return s;
}

namespace {

// Marching squares on the dual grid whose vertices are cell centres.
// `crossing(ka, kb)` returns the zero on the segment between two centres with
// values of opposite sign.
template <class Crossing>
std::vector<Polyline> contour(const DiskGrid& g, const std::vector<double>& u, Crossing&& crossing) {
    const int n = g.cells_per_side();
    auto has = [&](int k) { return g.type(k) != CellType::Outside; };
    auto pos = [&](int k) { return u[k] >= 0.0; };
    // edge id: 2k for (k, k+1), 2k+1 for (k, k+n)
    std::map<long long, DiskPoint> points;
    std::map<long long, std::vector<long long>> links;
    auto edge_point = [&](long long id) {
        auto it = points.find(id);
        if (it != points.end()) return;
        const int k = static_cast<int>(id / 2);
        const int kb = (id % 2 == 0) ? k + 1 : k + n;
        points.emplace(id, crossing(k, kb));
    };
    auto link = [&](long long a, long long b) {
        edge_point(a);
        edge_point(b);
        links[a].push_back(b);
        links[b].push_back(a);
    };
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) {
            const int k00 = g.index(i, j), k10 = k00 + 1, k01 = k00 + n, k11 = k01 + 1;
            if (!has(k00) || !has(k10) || !has(k01) || !has(k11)) continue;
            const int code = (pos(k00) ? 1 : 0) | (pos(k10) ? 2 : 0) | (pos(k11) ? 4 : 0) | (pos(k01) ? 8 : 0);
            if (code == 0 || code == 15) continue;
            const long long bottom = 2LL * k00, top = 2LL * k01, left = 2LL * k00 + 1, right = 2LL * k10 + 1;
            std::vector<long long> cut;
            // edges in ccw order around the dual cell
            if (pos(k00) != pos(k10)) cut.push_back(bottom);
            if (pos(k10) != pos(k11)) cut.push_back(right);
            if (pos(k11) != pos(k01)) cut.push_back(top);
            if (pos(k01) != pos(k00)) cut.push_back(left);
            if (cut.size() == 2) {
                link(cut[0], cut[1]);
            } else {
                // saddle: the centre average decides which corners connect
                const double centre = 0.25 * (u[k00] + u[k10] + u[k11] + u[k01]);
                if ((centre >= 0.0) == pos(k00)) {
                    link(bottom, right);
                    link(top, left);
                } else {
                    link(bottom, left);
                    link(right, top);
                }
            }
        }
    std::vector<Polyline> lines;
    std::map<long long, bool> used;
    auto walk = [&](long long start) {
        Polyline line;
        long long prev = -1, cur = start;
        while (true) {
            used[cur] = true;
            line.push_back(points[cur]);
            long long next = -1;
            for (long long nb : links[cur])
                if (nb != prev && !used[nb]) {
                    next = nb;
                    break;
                }
            if (next < 0) {
                // close loops back to their start
                for (long long nb : links[cur])
                    if (nb == start && nb != prev && line.size() > 2) line.push_back(points[start]);
                break;
            }
            prev = cur;
            cur = next;
        }
        lines.push_back(std::move(line));
    };
    for (const auto& [id, nbs] : links)
        if (nbs.size() == 1 && !used[id]) walk(id);
    for (const auto& [id, nbs] : links)
        if (!used[id]) walk(id);
    return lines;
}

}  // namespace

std::vector<Polyline> nodal_set(const Field& u) {
    const DiskGrid& g = u.grid();
    const auto& val = u.values();
    return contour(g, val, [&](int a, int b) {
        const DiskPoint pa = g.center(a), pb = g.center(b);
        const double s = val[a] / (val[a] - val[b]);
        return DiskPoint{pa.x + s * (pb.x - pa.x), pa.y + s * (pb.y - pa.y)};
    });
}

std::vector<Polyline> nodal_set(const Field& v, const ApproximateSolution& approx) {
    const DiskGrid& g = v.grid();
    std::vector<double> u(g.size(), 0.0);
    for (int k = 0; k < g.size(); ++k)
        if (g.type(k) != CellType::Outside) u[k] = approx.value(g.center(k)) + (g.type(k) == CellType::Active ? v[k] : 0.0);
    auto vv = [&](int k) { return g.type(k) == CellType::Active ? v[k] : 0.0; };
    return contour(g, u, [&](int a, int b) {
        const DiskPoint pa = g.center(a), pb = g.center(b);
        const double va = vv(a), vb = vv(b);
        auto phi = [&](double s) {
            const DiskPoint p{pa.x + s * (pb.x - pa.x), pa.y + s * (pb.y - pa.y)};
            return approx.value(p) + (1.0 - s) * va + s * vb;
        };
        double s = u[a] / (u[a] - u[b]);
        const double fa = u[a], fb = u[b];
        if (fa != 0.0 && fb != 0.0) {
            boost::uintmax_t iters = 60;
            const auto bracket = boost::math::tools::toms748_solve(
                phi, 0.0, 1.0, fa, fb, boost::math::tools::eps_tolerance<double>(48), iters);
            s = 0.5 * (bracket.first + bracket.second);
        } else {
            s = fa == 0.0 ? 0.0 : 1.0;
        }
        return DiskPoint{pa.x + s * (pb.x - pa.x), pa.y + s * (pb.y - pa.y)};
    });
}

namespace {

double euclidean_distance_to_geodesic(const DiskPoint& p, const Geodesic& g) {
    double span = ccw_angle(g.theta1(), g.theta2());
    double start = g.theta1();
    if (span > std::numbers::pi) {
        span = 2.0 * std::numbers::pi - span;
        start = g.theta2();
    }
    const double half = 0.5 * span;
    const double mid = start + half;
    if (std::abs(half - 0.5 * std::numbers::pi) < 1e-12) {
        // diameter through angle `start`
        return std::abs(-std::sin(start) * p.x + std::cos(start) * p.y);
    }
    const double cd = 1.0 / std::cos(half), radius = std::tan(half);
    const double cx = cd * std::cos(mid), cy = cd * std::sin(mid);
    return std::abs(std::hypot(p.x - cx, p.y - cy) - radius);
}

}  // namespace

NodalDeviation nodal_deviation(const std::vector<Polyline>& lines, const LabeledConfiguration& cfg) {
    NodalDeviation out;
    out.per_geodesic_max.assign(cfg.size(), 0.0);
    out.per_geodesic_points.assign(cfg.size(), 0);
    std::size_t total = 0;
    for (const auto& line : lines) {
        for (const auto& p : line) {
            ++total;
            int best = 0;
            double d = std::numeric_limits<double>::infinity();
            for (int j = 0; j < cfg.size(); ++j) {
                const double dj = std::abs(signed_distance(p, cfg.geodesics()[j]));
                if (dj < d) {
                    d = dj;
                    best = j;
                }
            }
            out.max_deviation = std::max(out.max_deviation, d);
            out.per_geodesic_max[best] = std::max(out.per_geodesic_max[best], d);
            ++out.per_geodesic_points[best];
            out.max_euclidean =
                std::max(out.max_euclidean, euclidean_distance_to_geodesic(p, cfg.geodesics()[best]));
        }
    }
    if (total == 0) throw EmptyNodalSet("nodal set has no points");
    return out;
}

Eigenpair2D lowest_eigenvalue_2d(const Field& u, const DoubleWellPotential& potential, double shift, double tol,
                                 int max_iterations) {
    const auto grid = u.grid_ptr();
    const DiskGrid& g = *grid;
    const auto& act = g.active();
    const auto& lam = g.conformal();
    std::vector<double> w(g.size(), 0.0);
    for (int k : act) w[k] = potential.fprime(u[k]) + shift;
    const ScreenedOperator op(grid, w);
    const LinearSolver solver(op);

    // Locally optimal preconditioned iteration for A x = mu M x with M = lambda^2;
    // the subspace is spanned by the iterate, the preconditioned residual and
    // the previous update.
    auto mdot = [&](const std::vector<double>& a, const std::vector<double>& b) {
        return block_sum(act, [&](int k) { return lam[k] * lam[k] * a[k] * b[k]; });
    };
    const int N = g.size();
    std::vector<double> x(N, 0.0), Ax, r(N, 0.0), z, p;
    for (int k : act) x[k] = 1.0 - u[k] * u[k] + 1e-3;
    {
        const double s = 1.0 / std::sqrt(mdot(x, x));
        for (int k : act) x[k] *= s;
    }
    double rho = 0.0, prev = std::numeric_limits<double>::infinity();
    int stable = 0;
    for (int it = 1; it <= max_iterations; ++it) {
        op.apply_flat(x, Ax);
        rho = dot(act, x, Ax);  // x is M-normalized
        for (int k : act) r[k] = Ax[k] - rho * lam[k] * lam[k] * x[k];
        // hyperbolic residual norm: |r|_{M^{-1}}
        const double res = std::sqrt(block_sum(act, [&](int k) { return r[k] * r[k] / (lam[k] * lam[k]); }));
        stable = std::abs(rho - prev) <= tol * std::max(1.0, std::abs(rho)) ? stable + 1 : 0;
        prev = rho;
        if (stable >= 3 && res <= 1e-6) {
            Eigenpair2D out{rho, Field(grid), it};
            for (int k : act) out.vector[k] = x[k];
            return out;
        }
        solver.precondition(r, z);

        std::vector<std::vector<double>> basis{x, z};
        if (!p.empty()) basis.push_back(p);
        // M-orthonormalize (twice) and drop nearly dependent directions
        std::vector<std::vector<double>> q;
        for (auto& b : basis) {
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& e : q) {
                    const double c = mdot(e, b);
                    for (int k : act) b[k] -= c * e[k];
                }
            const double nn = std::sqrt(mdot(b, b));
            if (!(nn > 1e-10) && !q.empty()) continue;
            for (int k : act) b[k] /= nn;
            q.push_back(std::move(b));
        }
        const int m = static_cast<int>(q.size());
        std::vector<std::vector<double>> Aq(m);
        for (int a = 0; a < m; ++a) op.apply_flat(q[a], Aq[a]);
        Eigen::MatrixXd S(m, m);
        for (int a = 0; a < m; ++a)
            for (int b = a; b < m; ++b) S(a, b) = S(b, a) = dot(act, q[a], Aq[b]);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
        const Eigen::VectorXd c = es.eigenvectors().col(0);
        std::vector<double> xn(N, 0.0), pn(N, 0.0);
        for (int a = 0; a < m; ++a)
            for (int k : act) {
                xn[k] += c(a) * q[a][k];
                if (a > 0) pn[k] += c(a) * q[a][k];
            }
        const double s = 1.0 / std::sqrt(mdot(xn, xn));
        for (int k : act) xn[k] *= s;
        // keep the sign fixed so the iterate stays positive where it is large
        if (dot(act, xn, x) < 0.0)
            for (int k : act) xn[k] = -xn[k];
        x = std::move(xn);
        p = std::move(pn);
    }
    std::ostringstream os;
    os << "eigen-iteration did not settle in " << max_iterations << " iterations (estimate " << rho << ")";
    throw IterationStall(os.str());
}

}  // namespace hypac
