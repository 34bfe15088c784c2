#include "p2dsim/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseLU>

namespace p2d {

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

/// Precomputed per-solve geometry and coefficient data. Face f in [0, n] sits
/// between cells f-1 and f; faces 0 and n are the outer boundary.
struct Assembly {
    int n = 0;  // macro cells
    int m = 0;  // electrode cells
    std::vector<double> kface;   // electrolyte conductance per interior face, else 0
    std::vector<double> sface;   // solid conductance per intra-electrode face, else 0
    std::vector<double> phie_of_u0;  // alpha_phie * T * f(ce) per cell (phie = u + this)
    double IA = 0;                   // I / A
};

Assembly precompute(const Mesh& mesh, const CellConfig& cfg, const StateSlice& slice, double I) {
    Assembly a;
    a.n = mesh.cells();
    a.m = mesh.electrode_count();
    a.IA = I / cfg.geometry.A;
    a.kface.assign(a.n + 1, 0.0);
    a.sface.assign(a.n + 1, 0.0);
    a.phie_of_u0.resize(a.n);

    std::vector<double> kappa(a.n);
    for (int i = 0; i < a.n; ++i) {
        kappa[i] = cfg.transport.kappa(slice.ce[i], slice.T);
        a.phie_of_u0[i] =
            cfg.transport.alpha_phie * slice.T * cfg.transport.f_phie(slice.ce[i]);
    }
    for (int f = 1; f < a.n; ++f) {
        const double h = mesh.centers[f] - mesh.centers[f - 1];
        a.kface[f] = harmonic(kappa[f - 1], kappa[f]) / h;
        if (mesh.is_electrode(f - 1) && mesh.is_electrode(f) &&
            mesh.region[f - 1] == mesh.region[f]) {
            a.sface[f] = cfg.transport.sigma(mesh.region[f]) / h;
        }
    }
    return a;
}

FluxInput flux_input(const Mesh& mesh, const StateSlice& slice, const Assembly& a, int cell,
                     int e, std::span<const double> u, std::span<const double> v) {
    return FluxInput{mesh.region[cell], slice.ce[cell], slice.csB[e],
                     v[e],              u[cell] + a.phie_of_u0[cell], slice.T};
}

// residual without the gauge row; also reports the flux field
void residual_raw(const Mesh& mesh, const CellConfig& cfg, const StateSlice& slice,
                  const Assembly& a, std::span<const double> u, std::span<const double> v,
                  const FluxMode& mode, std::vector<double>& R, std::vector<double>& j) {
    const int n = a.n, m = a.m;
    R.assign(n + m, 0.0);
    j.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const int e = mesh.electrode_of_cell(i);
        if (e >= 0)
            j[i] = flux(flux_input(mesh, slice, a, i, e, u, v), cfg.kinetics, cfg.transport, mode);
    }
    // electrolyte rows: q(f) = -kface[f] (u_f - u_{f-1}), zero at both ends
    for (int i = 0; i < n; ++i) {
        const double q_below = i > 0 ? -a.kface[i] * (u[i] - u[i - 1]) : 0.0;
        const double q_above = i < n - 1 ? -a.kface[i + 1] * (u[i + 1] - u[i]) : 0.0;
        R[i] = q_above - q_below - mesh.widths[i] * j[i];
    }
    // solid rows: boundary faces carry -sigma phis' = I/A at x = 0 and x = L,
    // zero flux at the electrode/separator interfaces
    for (int e = 0; e < m; ++e) {
        const int i = mesh.cell_of_electrode(e);
        double p_below, p_above;
        if (i == 0)
            p_below = a.IA;
        else
            p_below = a.sface[i] != 0.0 ? -a.sface[i] * (v[e] - v[e - 1]) : 0.0;
        if (i == n - 1)
            p_above = a.IA;
        else
            p_above = a.sface[i + 1] != 0.0 ? -a.sface[i + 1] * (v[e + 1] - v[e]) : 0.0;
        R[n + e] = p_above - p_below + mesh.widths[i] * j[i];
    }
}

void apply_gauge_row(const Mesh& mesh, std::span<const double> u, std::vector<double>& R) {
    const int n = mesh.cells();
    double s = 0;
    for (int i = 0; i < n; ++i) s += mesh.widths[i] * u[i];
    R[n - 1] = s;  // replaces the redundant last electrolyte row
}

}  // namespace

std::vector<double> assemble_residual(const Mesh& mesh, const CellConfig& cfg,
                                      const StateSlice& slice, double I,
                                      std::span<const double> phie_li,
                                      std::span<const double> phis, const FluxMode& mode,
                                      bool with_gauge_row) {
    const Assembly a = precompute(mesh, cfg, slice, I);
    std::vector<double> R, j;
    residual_raw(mesh, cfg, slice, a, phie_li, phis, mode, R, j);
    if (with_gauge_row) apply_gauge_row(mesh, phie_li, R);
    return R;
}

Eigen::SparseMatrix<double> assemble_jacobian(const Mesh& mesh, const CellConfig& cfg,
                                              const StateSlice& slice,
                                              std::span<const double> phie_li,
                                              std::span<const double> phis,
                                              const FluxMode& mode, bool with_gauge_row) {
    const Assembly a = precompute(mesh, cfg, slice, 0.0);
    const int n = a.n, m = a.m;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * (n + m));
    const int gauge_row = n - 1;

    auto add = [&](int r, int c, double val) {
        if (with_gauge_row && r == gauge_row) return;  // gauge row is written separately
        trip.emplace_back(r, c, val);
    };

    std::vector<double> Dj(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const int e = mesh.electrode_of_cell(i);
        if (e >= 0)
            Dj[i] = flux_deta(flux_input(mesh, slice, a, i, e, phie_li, phis), cfg.kinetics,
                              cfg.transport, mode);
    }

    for (int i = 0; i < n; ++i) {  // electrolyte rows
        double diag = 0;
        if (i > 0) {
            add(i, i - 1, -a.kface[i]);
            diag += a.kface[i];
        }
        if (i < n - 1) {
            add(i, i + 1, -a.kface[i + 1]);
            diag += a.kface[i + 1];
        }
        const int e = mesh.electrode_of_cell(i);
        if (e >= 0) {
            diag += mesh.widths[i] * Dj[i];
            add(i, n + e, -mesh.widths[i] * Dj[i]);
        }
        add(i, i, diag);
    }
    for (int e = 0; e < m; ++e) {  // solid rows
        const int i = mesh.cell_of_electrode(e);
        double diag = mesh.widths[i] * Dj[i];
        if (i > 0 && a.sface[i] != 0.0) {
            add(n + e, n + e - 1, -a.sface[i]);
            diag += a.sface[i];
        }
        if (i < n - 1 && a.sface[i + 1] != 0.0) {
            add(n + e, n + e + 1, -a.sface[i + 1]);
            diag += a.sface[i + 1];
        }
        add(n + e, i, -mesh.widths[i] * Dj[i]);
        add(n + e, n + e, diag);
    }
    if (with_gauge_row)
        for (int i = 0; i < n; ++i) trip.emplace_back(gauge_row, i, mesh.widths[i]);

    Eigen::SparseMatrix<double> J(n + m, n + m);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

std::vector<double> flux_field(const Mesh& mesh, const CellConfig& cfg, const StateSlice& slice,
                               std::span<const double> phie_li, std::span<const double> phis,
                               const FluxMode& mode) {
    const Assembly a = precompute(mesh, cfg, slice, 0.0);
    std::vector<double> j(mesh.cells(), 0.0);
    for (int i = 0; i < mesh.cells(); ++i) {
        const int e = mesh.electrode_of_cell(i);
        if (e >= 0)
            j[i] = flux(flux_input(mesh, slice, a, i, e, phie_li, phis), cfg.kinetics,
                        cfg.transport, mode);
    }
    return j;
}

namespace {

double norm1(const std::vector<double>& R) {
    double s = 0;
    for (double r : R) s += std::abs(r);
    return s;
}

double merit(const std::vector<double>& R) {
    double s = 0;
    for (double r : R) s += r * r;
    return 0.5 * s;
}

// subtract the width-weighted mean of u from both fields: leaves every flux and
// every non-gauge residual entry unchanged, makes the gauge exact
void project_gauge(const Mesh& mesh, std::vector<double>& u, std::vector<double>& v) {
    double s = 0;
    for (int i = 0; i < mesh.cells(); ++i) s += mesh.widths[i] * u[i];
    const double mean = s / mesh.length();
    for (double& x : u) x -= mean;
    for (double& x : v) x -= mean;
}

}  // namespace

PotentialSolveResult solve_potentials(const Mesh& mesh, const CellConfig& cfg,
                                      const StateSlice& slice, double I, const FluxMode& mode,
                                      const EllipticOptions& opts,
                                      const PotentialSolution* warm_start) {
    const Assembly a = precompute(mesh, cfg, slice, I);
    const int n = a.n, m = a.m;

    std::vector<double> u(n, 0.0), v(m, 0.0);
    if (warm_start && static_cast<int>(warm_start->phie_li.size()) == n &&
        static_cast<int>(warm_start->phis.size()) == m) {
        u = warm_start->phie_li;
        v = warm_start->phis;
    } else {
        // equilibrium start: phis at the local open-circuit value (eta = 0, j = 0)
        for (int e = 0; e < m; ++e) {
            const int i = mesh.cell_of_electrode(e);
            v[e] = ocp(mesh.region[i], slice.ce[i], slice.csB[e], slice.T, cfg.kinetics) +
                   a.phie_of_u0[i];
        }
    }
    project_gauge(mesh, u, v);

    std::vector<double> R, j;
    PotentialSolveResult out;

    int iter = 0;
    double scaled = std::numeric_limits<double>::infinity();
    for (;; ++iter) {
        residual_raw(mesh, cfg, slice, a, u, v, mode, R, j);
        double jnorm = 0;
        for (int i = 0; i < n; ++i) jnorm += mesh.widths[i] * std::abs(j[i]);
        const double scale = std::max({std::abs(a.IA), jnorm, 1e-300});
        const double r1 = norm1(R);
        scaled = r1 / scale;
        // roundoff floor: magnitudes of the actually-evaluated flux terms
        double magsum = std::abs(a.IA) + jnorm;
        for (int f = 1; f < n; ++f) magsum += 2.0 * a.kface[f] * std::abs(u[f] - u[f - 1]);
        for (int e = 1; e < m; ++e) {
            const int i = mesh.cell_of_electrode(e);
            if (i > 0 && a.sface[i] != 0.0)
                magsum += 2.0 * a.sface[i] * std::abs(v[e] - v[e - 1]);
        }
        const bool tiny = r1 <= 1e-14 * magsum + 1e-300;
        if (scaled <= opts.newton_tol || tiny) break;
        if (iter >= opts.max_iters) {
            std::ostringstream os;
            os << "Newton stalled after " << iter << " iterations, scaled residual " << scaled;
            out.message = os.str();
            out.converged = false;
            return out;
        }

        Eigen::SparseMatrix<double> J =
            assemble_jacobian(mesh, cfg, slice, u, v, mode, /*with_gauge_row=*/true);
        std::vector<double> Rg = R;
        apply_gauge_row(mesh, u, Rg);

        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            out.message = "sparse LU factorization failed";
            out.converged = false;
            return out;
        }
        Eigen::VectorXd rhs(n + m);
        for (int k = 0; k < n + m; ++k) rhs[k] = -Rg[k];
        const Eigen::VectorXd dz = lu.solve(rhs);

        // Armijo backtracking on the (ungauged, projected) residual merit
        const double f0 = merit(R);
        double alpha = 1.0;
        std::vector<double> u_try(n), v_try(m), R_try, j_try;
        bool accepted = false;
        while (alpha >= opts.min_step) {
            for (int i = 0; i < n; ++i) u_try[i] = u[i] + alpha * dz[i];
            for (int e = 0; e < m; ++e) v_try[e] = v[e] + alpha * dz[n + e];
            project_gauge(mesh, u_try, v_try);
            bool finite = true;
            for (double x : u_try) finite = finite && std::isfinite(x);
            for (double x : v_try) finite = finite && std::isfinite(x);
            double f_try = std::numeric_limits<double>::infinity();
            if (finite) {
                residual_raw(mesh, cfg, slice, a, u_try, v_try, mode, R_try, j_try);
                f_try = merit(R_try);
            }
            if (std::isfinite(f_try) && f_try <= f0 * (1.0 - 1e-4 * alpha)) {
                accepted = true;
                break;
            }
            alpha *= opts.backtrack_factor;
        }
        if (!accepted) {
            std::ostringstream os;
            os << "line search failed at iteration " << iter << ", scaled residual " << scaled;
            out.message = os.str();
            out.converged = false;
            return out;
        }
        u.swap(u_try);
        v.swap(v_try);
    }

    PotentialSolution& sol = out.solution;
    sol.phie_li = std::move(u);
    sol.phis = std::move(v);
    sol.phie.resize(n);
    for (int i = 0; i < n; ++i) sol.phie[i] = sol.phie_li[i] + a.phie_of_u0[i];
    sol.j = std::move(j);
    sol.newton_iters = iter;
    sol.residual_norm = scaled;
    sol.compat_anode_gap = mesh.integrate_region(sol.j, Region::Anode) - a.IA;
    sol.compat_cathode_gap = mesh.integrate_region(sol.j, Region::Cathode) + a.IA;
    sol.j_total = mesh.integrate(sol.j);
    out.converged = true;
    return out;
}

}  // namespace p2d
