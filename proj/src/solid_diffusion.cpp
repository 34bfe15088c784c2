#include "p2dsim/solid_diffusion.hpp"

#include <thread>

#include "tridiag.hpp"

namespace p2d {

std::vector<double> step_particle(const ParticleGrid& grid, std::span<const double> c,
                                  double Ds, double g, double dt) {
    const int m = grid.shells();
    // interior face conductances r_f^2 Ds / (center spacing); face 0 (r = 0) carries
    // no flux through its zero area, face m carries the prescribed -Ds c_r = g
    std::vector<double> cond(m);  // cond[i] couples shells i-1 and i across face i
    for (int i = 1; i < m; ++i) {
        const double rf = grid.faces[i];
        cond[i] = rf * rf * Ds / (grid.centers[i] - grid.centers[i - 1]);
    }
    const double boundary_influx = -grid.radius * grid.radius * g;  // r^2 Ds c_r at r = Rs

    std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0), rhs(m, 0.0);
    for (int i = 0; i < m; ++i) {
        diag[i] = grid.shell_volumes[i];
        rhs[i] = grid.shell_volumes[i] * c[i];
        if (i > 0) {
            diag[i] += dt * cond[i];
            lower[i] = -dt * cond[i];
        }
        if (i < m - 1) {
            diag[i] += dt * cond[i + 1];
            upper[i] = -dt * cond[i + 1];
        }
    }
    rhs[m - 1] += dt * boundary_influx;

    detail::solve_tridiag(lower, diag, upper, rhs);  // rhs now holds the implicit solution

    // Conservative reconstruction: rebuild the update from the solved field's face
    // fluxes so the shell-mass identity telescopes exactly.
    std::vector<double> out(m);
    double flux_below = 0.0;  // r^2 Ds c_r at the lower face of shell i
    for (int i = 0; i < m; ++i) {
        const double flux_above =
            i < m - 1 ? cond[i + 1] * (rhs[i + 1] - rhs[i]) : boundary_influx;
        out[i] = c[i] + dt * (flux_above - flux_below) / grid.shell_volumes[i];
        flux_below = flux_above;
    }
    return out;
}

namespace {

void step_range(const Mesh& mesh, const CellConfig& cfg, std::span<const double> cs_in,
                std::span<const double> j_cells, double dt, int e_begin, int e_end,
                std::span<double> cs_out) {
    for (int e = e_begin; e < e_end; ++e) {
        const ParticleGrid& grid = mesh.particle_of_electrode(e);
        const int cell = mesh.cell_of_electrode(e);
        const Region r = mesh.region[cell];
        const double Ds = r == Region::Anode ? cfg.transport.Ds_neg : cfg.transport.Ds_pos;
        const double gval = cfg.transport.alpha_s(r) * j_cells[cell];
        const int off = mesh.solid_offset(e);
        const auto in = cs_in.subspan(off, grid.shells());
        const std::vector<double> next = step_particle(grid, in, Ds, gval, dt);
        for (int i = 0; i < grid.shells(); ++i) cs_out[off + i] = next[i];
    }
}

}  // namespace

void step_all_particles(const Mesh& mesh, const CellConfig& cfg, std::span<const double> cs_in,
                        std::span<const double> j_cells, double dt, int threads,
                        std::span<double> cs_out) {
    const int n = mesh.electrode_count();
    if (threads <= 1 || n < 2 * threads) {
        step_range(mesh, cfg, cs_in, j_cells, dt, 0, n, cs_out);
        return;
    }
    // contiguous chunks with disjoint output slices: the result is independent of
    // the thread count by construction
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int k = 0; k < threads; ++k) {
        const int b = n * k / threads;
        const int e = n * (k + 1) / threads;
        pool.emplace_back(step_range, std::cref(mesh), std::cref(cfg), cs_in, j_cells, dt, b, e,
                          cs_out);
    }
    for (auto& th : pool) th.join();
}

double solid_total(const Mesh& mesh, std::span<const double> cs_flat, Region r) {
    double total = 0;
    for (int e = 0; e < mesh.electrode_count(); ++e) {
        const int cell = mesh.cell_of_electrode(e);
        if (mesh.region[cell] != r) continue;
        const ParticleGrid& grid = mesh.particle_of_electrode(e);
        total += mesh.widths[cell] * grid.mass(cs_flat.subspan(mesh.solid_offset(e), grid.shells()));
    }
    return total;
}

}  // namespace p2d
