#include "p2dsim/electrolyte.hpp"

#include "tridiag.hpp"

namespace p2d {

std::vector<double> step_electrolyte(const Mesh& mesh, const CellConfig& cfg,
                                     std::span<const double> ce,
                                     std::span<const double> j_cells, double dt) {
    const int n = mesh.cells();
    // harmonic face averages of the cell-centered diffusivity; zero-flux ends
    std::vector<double> cond(n, 0.0);  // cond[i] couples cells i-1 and i
    std::vector<double> De(n);
    for (int i = 0; i < n; ++i) De[i] = cfg.transport.De.in(mesh.region[i])(mesh.centers[i]);
    for (int i = 1; i < n; ++i) {
        const double hm = 2.0 * De[i - 1] * De[i] / (De[i - 1] + De[i]);
        cond[i] = hm / (mesh.centers[i] - mesh.centers[i - 1]);
    }

    std::vector<double> lower(n, 0.0), diag(n, 0.0), upper(n, 0.0), rhs(n, 0.0);
    for (int i = 0; i < n; ++i) {
        diag[i] = mesh.widths[i];
        rhs[i] = mesh.widths[i] * (ce[i] + dt * cfg.transport.alpha_e * j_cells[i]);
        if (i > 0) {
            diag[i] += dt * cond[i];
            lower[i] = -dt * cond[i];
        }
        if (i < n - 1) {
            diag[i] += dt * cond[i + 1];
            upper[i] = -dt * cond[i + 1];
        }
    }

    detail::solve_tridiag(lower, diag, upper, rhs);

    // conservative flux-form reconstruction (see step_particle)
    std::vector<double> out(n);
    double flux_below = 0.0;
    for (int i = 0; i < n; ++i) {
        const double flux_above = i < n - 1 ? cond[i + 1] * (rhs[i + 1] - rhs[i]) : 0.0;
        out[i] = ce[i] + dt * (cfg.transport.alpha_e * j_cells[i] +
                               (flux_above - flux_below) / mesh.widths[i]);
        flux_below = flux_above;
    }
    return out;
}

}  // namespace p2d
