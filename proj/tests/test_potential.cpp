#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "p2dsim/io.hpp"
#include "p2dsim/mesh.hpp"
#include "p2dsim/potential.hpp"

using namespace p2d;

namespace {

CellConfig reference_config() { return load_config(std::string(TEST_CONFIG_DIR) + "/reference.json"); }

struct SliceData {
    std::vector<double> ce, csB;
    double T = 298.15;
    StateSlice slice() const { return StateSlice{ce, csB, T}; }
};

SliceData uniform_slice(const Mesh& mesh) {
    SliceData s;
    s.ce.assign(mesh.cells(), 1.2e-3);
    s.csB.assign(mesh.electrode_count(), 8e-3);
    return s;
}

Mesh coarse_mesh(const CellConfig& cfg) {
    MeshSpec spec;
    spec.n_anode = 4;
    spec.n_separator = 3;
    spec.n_cathode = 4;
    spec.n_radial_neg = spec.n_radial_pos = 3;
    return build_mesh(cfg.geometry, spec);
}

// smooth, nonconstant iterate for residual/Jacobian probing
void smooth_fields(const Mesh& mesh, std::vector<double>& u, std::vector<double>& v) {
    u.resize(mesh.cells());
    v.resize(mesh.electrode_count());
    for (int i = 0; i < mesh.cells(); ++i) u[i] = 0.05 * std::sin(2.1 * mesh.centers[i]);
    for (int e = 0; e < mesh.electrode_count(); ++e) {
        const double x = mesh.centers[mesh.cell_of_electrode(e)];
        v[e] = 0.2 + 0.1 * std::cos(1.7 * x);
    }
}

}  // namespace

TEST_CASE("applied current enters exactly through the collector rows") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = coarse_mesh(cfg);
    const SliceData sd = uniform_slice(mesh);
    const int n = mesh.cells(), m = mesh.electrode_count();
    const std::vector<double> u(n, 0.0), v(m, 0.0);

    // g0 = 0 turns the interfacial coupling off: only the boundary terms remain
    const std::vector<double> R = assemble_residual(mesh, cfg, sd.slice(), 3.0, u, v,
                                                    FluxMode::stub_linear(0.0), false);
    REQUIRE(static_cast<int>(R.size()) == n + m);
    for (int i = 0; i < n; ++i) CHECK(R[i] == 0.0);
    CHECK(R[n] == -3.0);
    CHECK(R[n + m - 1] == 3.0);
    for (int e = 1; e < m - 1; ++e) CHECK(R[n + e] == 0.0);
}

TEST_CASE("residual rows sum to zero for arbitrary fields") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = coarse_mesh(cfg);
    const SliceData sd = uniform_slice(mesh);
    std::vector<double> u, v;
    smooth_fields(mesh, u, v);

    const std::vector<double> R =
        assemble_residual(mesh, cfg, sd.slice(), 3.0, u, v, FluxMode::exponential(), false);
    double sum = 0, scale = 0;
    for (double r : R) {
        sum += r;
        scale += std::abs(r);
    }
    CHECK(std::abs(sum) <= 1e-13 * scale);
}

TEST_CASE("gauge row replaces the last electrolyte row only") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = coarse_mesh(cfg);
    const SliceData sd = uniform_slice(mesh);
    std::vector<double> u, v;
    smooth_fields(mesh, u, v);
    const int n = mesh.cells();

    const std::vector<double> raw =
        assemble_residual(mesh, cfg, sd.slice(), 3.0, u, v, FluxMode::exponential(), false);
    const std::vector<double> gauged =
        assemble_residual(mesh, cfg, sd.slice(), 3.0, u, v, FluxMode::exponential(), true);

    double wu = 0;
    for (int i = 0; i < n; ++i) wu += mesh.widths[i] * u[i];
    CHECK(gauged[n - 1] == wu);
    for (std::size_t k = 0; k < raw.size(); ++k)
        if (static_cast<int>(k) != n - 1) CHECK(gauged[k] == raw[k]);
}

TEST_CASE("analytic Jacobian matches centered differences") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = coarse_mesh(cfg);
    const SliceData sd = uniform_slice(mesh);
    std::vector<double> u, v;
    smooth_fields(mesh, u, v);
    const int n = mesh.cells(), m = mesh.electrode_count();
    const int N = n + m;

    for (const FluxMode& mode : {FluxMode::exponential(), FluxMode::stub_linear(0.1)}) {
        const Eigen::MatrixXd J =
            Eigen::MatrixXd(assemble_jacobian(mesh, cfg, sd.slice(), u, v, mode, false));
        REQUIRE(J.rows() == N);
        REQUIRE(J.cols() == N);

        Eigen::MatrixXd Jfd(N, N);
        std::vector<double> z(N);
        for (int i = 0; i < n; ++i) z[i] = u[i];
        for (int e = 0; e < m; ++e) z[n + e] = v[e];
        const double h = 1e-6;
        for (int c = 0; c < N; ++c) {
            std::vector<double> zp = z, zm = z;
            zp[c] += h;
            zm[c] -= h;
            const std::vector<double> Rp = assemble_residual(
                mesh, cfg, sd.slice(), 3.0, std::span<const double>(zp).first(n),
                std::span<const double>(zp).subspan(n), mode, false);
            const std::vector<double> Rm = assemble_residual(
                mesh, cfg, sd.slice(), 3.0, std::span<const double>(zm).first(n),
                std::span<const double>(zm).subspan(n), mode, false);
            for (int r = 0; r < N; ++r) Jfd(r, c) = (Rp[r] - Rm[r]) / (2.0 * h);
        }
        const double scale = J.cwiseAbs().maxCoeff();
        const double tol = (mode.kind == FluxMode::Kind::StubLinear ? 1e-9 : 1e-5) * scale;
        CHECK((J - Jfd).cwiseAbs().maxCoeff() <= tol);
    }
}

TEST_CASE("linear stub solve: immediate convergence, exact gauge, tiny gaps") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    const SliceData sd = uniform_slice(mesh);

    const PotentialSolveResult res = solve_potentials(mesh, cfg, sd.slice(), 3.0,
                                                      FluxMode::stub_linear(0.1), EllipticOptions{});
    REQUIRE(res.converged);
    CHECK(res.solution.newton_iters <= 2);

    double wu = 0, wabs = 0;
    for (int i = 0; i < mesh.cells(); ++i) {
        wu += mesh.widths[i] * res.solution.phie_li[i];
        wabs += mesh.widths[i] * std::abs(res.solution.phie_li[i]);
    }
    CHECK(std::abs(wu) <= 1e-12 * wabs);
    CHECK(std::abs(res.solution.compat_anode_gap) <= 1e-10);
    CHECK(std::abs(res.solution.compat_cathode_gap) <= 1e-10);

    // phie reconstruction: phie = phie_li + alpha_phie * T * f(ce)
    for (int i = 0; i < mesh.cells(); ++i) {
        const double expected = res.solution.phie_li[i] +
                                cfg.transport.alpha_phie * sd.T *
                                    cfg.transport.f_phie(sd.ce[i]);
        CHECK(res.solution.phie[i] == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("exponential solve: compatibility integrals and flux-field consistency") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    const SliceData sd = uniform_slice(mesh);
    EllipticOptions opts;
    opts.newton_tol = 1e-11;

    const PotentialSolveResult res =
        solve_potentials(mesh, cfg, sd.slice(), 3.0, FluxMode::exponential(), opts);
    REQUIRE(res.converged);
    CHECK(res.solution.newton_iters <= 15);

    const double IA = 3.0 / cfg.geometry.A;
    CHECK(std::abs(res.solution.compat_anode_gap) <= 1e-8 * IA);
    CHECK(std::abs(res.solution.compat_cathode_gap) <= 1e-8 * IA);
    CHECK(std::abs(res.solution.j_total) <= 1e-9 * IA);

    // reported gaps agree with direct quadrature of the reported flux field
    const double ja = mesh.integrate_region(res.solution.j, Region::Anode);
    const double jc = mesh.integrate_region(res.solution.j, Region::Cathode);
    CHECK(ja - IA == doctest::Approx(res.solution.compat_anode_gap).epsilon(1e-12));
    CHECK(jc + IA == doctest::Approx(res.solution.compat_cathode_gap).epsilon(1e-12));

    // flux_field at the converged potentials reproduces the solution's j
    const std::vector<double> jf = flux_field(mesh, cfg, sd.slice(), res.solution.phie_li,
                                              res.solution.phis, FluxMode::exponential());
    REQUIRE(jf.size() == res.solution.j.size());
    for (std::size_t i = 0; i < jf.size(); ++i)
        CHECK(jf[i] == doctest::Approx(res.solution.j[i]).epsilon(1e-12));
    for (int i = 0; i < mesh.cells(); ++i)
        if (!mesh.is_electrode(i)) CHECK(res.solution.j[i] == 0.0);
}

TEST_CASE("warm start resumes at the converged answer") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    const SliceData sd = uniform_slice(mesh);

    const PotentialSolveResult first =
        solve_potentials(mesh, cfg, sd.slice(), 3.0, FluxMode::exponential(), EllipticOptions{});
    REQUIRE(first.converged);
    const PotentialSolveResult again = solve_potentials(
        mesh, cfg, sd.slice(), 3.0, FluxMode::exponential(), EllipticOptions{}, &first.solution);
    REQUIRE(again.converged);
    CHECK(again.solution.newton_iters <= 1);
    for (int i = 0; i < mesh.cells(); ++i)
        CHECK(again.solution.phie_li[i] ==
              doctest::Approx(first.solution.phie_li[i]).epsilon(1e-9));
}
