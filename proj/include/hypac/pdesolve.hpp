#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hypac/geometry.hpp"
#include "hypac/gluing.hpp"
#include "hypac/potential.hpp"

namespace hypac {

enum class CellType : unsigned char { Outside = 0, Active = 1, Boundary = 2 };

/// Cell-centred Cartesian grid on [-1, 1]^2 truncated to the disk of radius
/// r_max. Active cells have centres inside r_max; boundary cells are the
/// inactive 4-neighbours of active cells and carry Dirichlet data.
class DiskGrid {
public:
    /// h_g must divide 2 into an even number of cells; requires r_max + h_g < 1.
    DiskGrid(double h_g, double r_max);

    int cells_per_side() const { return n_; }
    double spacing() const { return h_; }
    double r_max() const { return r_max_; }
    /// Hyperbolic distance from the origin to the truncation circle.
    double truncation_distance() const;

    int index(int i, int j) const { return j * n_ + i; }
    int size() const { return n_ * n_; }
    double x(int i) const { return -1.0 + (i + 0.5) * h_; }
    double y(int j) const { return -1.0 + (j + 0.5) * h_; }
    DiskPoint center(int k) const { return {x(k % n_), y(k / n_)}; }
    CellType type(int k) const { return type_[k]; }
    const std::vector<CellType>& types() const { return type_; }
    const std::vector<int>& active() const { return active_; }
    const std::vector<int>& boundary() const { return boundary_; }
    /// 2 / (1 - |x|^2) at each cell centre (0 outside).
    const std::vector<double>& conformal() const { return lambda_; }

private:
    int n_;
    double h_, r_max_;
    std::vector<CellType> type_;
    std::vector<int> active_, boundary_;
    std::vector<double> lambda_;
};

/// Values on the active and boundary cells of a grid (zero elsewhere).
class Field {
public:
    Field() = default;
    explicit Field(std::shared_ptr<const DiskGrid> grid, double fill = 0.0);

    const DiskGrid& grid() const { return *grid_; }
    std::shared_ptr<const DiskGrid> grid_ptr() const { return grid_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    double& operator[](int k) { return values_[k]; }
    double operator[](int k) const { return values_[k]; }

    /// Bilinear interpolation between cell centres; needs all four
    /// surrounding cells to carry values (throws DomainError otherwise).
    double interpolate(double x, double y) const;

    /// sup over active cells.
    double sup_norm() const;

private:
    std::shared_ptr<const DiskGrid> grid_;
    std::vector<double> values_;
};

template <class Fn>
Field sample_field(std::shared_ptr<const DiskGrid> grid, Fn&& fn, bool include_boundary = true) {
    const DiskGrid& g = *grid;
    Field out(grid);
    for (int k : g.active()) out[k] = fn(g.center(k));
    if (include_boundary)
        for (int k : g.boundary()) out[k] = fn(g.center(k));
    return out;
}

/// lambda^{-2} times the flat 5-point Laplacian, on active cells.
Field hyperbolic_laplacian_apply(const DiskGrid& grid, const Field& field);

/// u_H on the boundary cells, zero elsewhere. Throws TruncationTooTight when
/// some geodesic comes closer than 2 to the truncation circle at its apex.
Field boundary_data(const ApproximateSolution& approx, std::shared_ptr<const DiskGrid> grid);

// ---------------------------------------------------------------------------
// Linear solves

/// -Delta_H + w with zero Dirichlet data, in flat form -Delta_h + lambda^2 w.
class ScreenedOperator {
public:
    ScreenedOperator(std::shared_ptr<const DiskGrid> grid, std::vector<double> w);

    const DiskGrid& grid() const { return *grid_; }
    std::shared_ptr<const DiskGrid> grid_ptr() const { return grid_; }
    const std::vector<double>& potential() const { return w_; }
    /// Flat operator applied to x (values outside the active set ignored).
    void apply_flat(const std::vector<double>& x, std::vector<double>& out) const;

private:
    std::shared_ptr<const DiskGrid> grid_;
    std::vector<double> w_;
};

struct LinearSolveReport {
    int iterations = 0;
    double relative_residual = 0.0;
};

/// Conjugate gradients with a geometric multigrid V-cycle preconditioner.
class LinearSolver {
public:
    explicit LinearSolver(const ScreenedOperator& op, int max_iterations = 500);
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;

    /// Solves (-Delta_H + w) x = rhs; rhs given in hyperbolic scaling.
    Field solve(const Field& rhs, double tol, LinearSolveReport* report = nullptr) const;
    /// Solves the flat system A x = b directly (for eigen-iterations).
    void solve_flat(const std::vector<double>& b, std::vector<double>& x, double tol,
                    LinearSolveReport* report = nullptr) const;
    /// One V-cycle as an approximate inverse of the flat operator.
    void precondition(const std::vector<double>& r, std::vector<double>& z) const;

    const ScreenedOperator& op() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot solve of (-Delta_H + w) x = rhs. Throws LinearSolveFailure.
Field linear_solve(const ScreenedOperator& op, const Field& rhs, double tol);

// ---------------------------------------------------------------------------
// Nonlinear correction

/// How the source term is formed. Direct differences u_H on the grid, so the
/// result solves the discrete equation with the same data. Corrected feeds
/// the exactly evaluated g_H, so only the correction v is discretized.
enum class Formulation { Direct, Corrected };

std::string to_string(Formulation f);
Formulation formulation_from_string(const std::string& s);

/// Discretized correction problem for u = u_H + v with v = 0 on the boundary.
struct DiscreteProblem {
    std::shared_ptr<const DiskGrid> grid;
    DoubleWellPotential potential;
    Formulation formulation = Formulation::Direct;
    Field u_H;  // on active and boundary cells
    Field g;    // source on active cells
    Field tau;  // smoothed signed distance on active cells
};

DiscreteProblem assemble_problem(const ApproximateSolution& approx, std::shared_ptr<const DiskGrid> grid,
                                 Formulation formulation);

/// lambda^{-2} Delta_h v + g - [f(u_H + v) - f(u_H)] on active cells.
Field discrete_residual(const DiscreteProblem& prob, const Field& v);

struct SolverReport {
    std::string method;
    int iterations = 0;
    std::vector<double> residual_trace;   // sup-norm of the residual, from v = 0
    std::vector<double> weighted_trace;   // weighted sup-norm of the residual
    std::vector<double> increment_trace;  // sup-norm of v_{k+1} - v_k
    std::vector<int> linear_iterations;
    bool converged = false;
    double correction_norm = 0.0;  // sup |v|
    double nodal_deviation = -1.0;
    double lowest_eigenvalue = 0.0;
    bool has_eigenvalue = false;
};

struct SolveResult {
    Field v;
    Field u;  // u_H + v, including boundary cells
    SolverReport report;
};

struct NonlinearOptions {
    double tol = 1e-10;
    int max_iterations = 50;
    double linear_tol = 1e-12;
    double mu = 1.0;  // exponent of the weighted residual norm
};

/// Fixed linearization at u_H: (-Delta_H + f'(u_H)) v_{k+1} = g - Q(v_k).
/// Throws ContractionFailure when the increment fails to shrink three times in a row.
SolveResult picard_solve(const DiscreteProblem& prob, const NonlinearOptions& opts);

/// Newton with backtracking on the residual sup-norm. Throws NewtonDivergence.
SolveResult newton_solve(const DiscreteProblem& prob, const NonlinearOptions& opts);

// ---------------------------------------------------------------------------
// Diagnostics

struct ResidualSummary {
    Field g;
    double sup = 0.0;
    double weighted_sup = 0.0;
    double sup_outside_overlap = 0.0;  // max |g| where only one chi_j is nonzero
};

/// g_H on the active cells with the exact derivative evaluation, or with the
/// discrete Laplacian when `discrete` is set.
ResidualSummary residual_gH(const ApproximateSolution& approx, std::shared_ptr<const DiskGrid> grid,
                            double mu, bool discrete = false);

/// sup |field| cosh(mu tau) rho^{-delta}, the 2D weight rho being 1.
double weighted_sup_norm(const Field& field, const LabeledConfiguration& cfg, double mu, double delta);

using Polyline = std::vector<DiskPoint>;

/// Zero contour by marching squares over the dual cells, with linear
/// interpolation along edges, chained into polylines.
std::vector<Polyline> nodal_set(const Field& u);

/// Same contour, with each edge crossing refined on u_H (exact) plus the
/// linearly interpolated correction v.
std::vector<Polyline> nodal_set(const Field& v, const ApproximateSolution& approx);

struct NodalDeviation {
    double max_deviation = 0.0;              // hyperbolic
    std::vector<double> per_geodesic_max;    // max over points assigned to H_j
    std::vector<int> per_geodesic_points;    // coverage counts
    double max_euclidean = 0.0;              // Euclidean distance to the nearest H_j
};

/// Throws EmptyNodalSet.
NodalDeviation nodal_deviation(const std::vector<Polyline>& lines, const LabeledConfiguration& cfg);

struct Eigenpair2D {
    double eigenvalue = 0.0;
    Field vector;
    int iterations = 0;
};

/// Bottom of -Delta_H + f'(u) + shift with zero Dirichlet data in the
/// hyperbolic inner product. Throws IterationStall.
Eigenpair2D lowest_eigenvalue_2d(const Field& u, const DoubleWellPotential& potential, double shift = 0.0,
                                 double tol = 1e-11, int max_iterations = 400);

}  // namespace hypac
