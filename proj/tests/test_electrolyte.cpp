#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "p2dsim/electrolyte.hpp"
#include "p2dsim/io.hpp"
#include "p2dsim/mesh.hpp"

using namespace p2d;

namespace {

CellConfig reference_config() { return load_config(std::string(TEST_CONFIG_DIR) + "/reference.json"); }

}  // namespace

TEST_CASE("electrolyte content changes exactly by the integrated source") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    const double ae = cfg.transport.alpha_e;

    std::vector<double> ce(mesh.cells());
    for (int i = 0; i < mesh.cells(); ++i)
        ce[i] = 1.2e-3 * (1.0 + 0.1 * std::sin(std::numbers::pi * mesh.centers[i] / mesh.length()));

    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> jdist(-0.5, 0.5);
    std::uniform_real_distribution<double> dtdist(1e-2, 0.3);
    for (int step = 0; step < 30; ++step) {
        std::vector<double> j(mesh.cells(), 0.0);
        for (int i = 0; i < mesh.cells(); ++i)
            if (mesh.is_electrode(i)) j[i] = jdist(rng);
        const double dt = dtdist(rng);
        const double before = mesh.integrate(ce);
        ce = step_electrolyte(mesh, cfg, ce, j, dt);
        const double after = mesh.integrate(ce);
        CHECK(std::abs(after - before - dt * ae * mesh.integrate(j)) <= 1e-12 * before);
    }
}

TEST_CASE("lowest cosine mode decays at the discrete implicit-Euler rate") {
    const CellConfig cfg = reference_config();  // uniform De, uniform mesh widths
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    const int n = mesh.cells();
    const double L = mesh.length();
    const double h = mesh.widths[0];
    const double De = cfg.transport.De.anode(0.5);
    const double pi = std::numbers::pi;

    const double cbar = 1.2e-3, amp = 1e-4;
    std::vector<double> ce(n), mode(n);
    for (int i = 0; i < n; ++i) {
        mode[i] = std::cos(pi * mesh.centers[i] / L);
        ce[i] = cbar + amp * mode[i];
    }
    const std::vector<double> zero(n, 0.0);

    const double lambda_h = 4.0 * De / (h * h) * std::pow(std::sin(pi * h / (2.0 * L)), 2);
    const double dt = 0.5;
    const int N = 20;
    for (int s = 0; s < N; ++s) ce = step_electrolyte(mesh, cfg, ce, zero, dt);

    double num = 0, den = 0, total = 0;
    for (int i = 0; i < n; ++i) {
        num += mesh.widths[i] * ce[i] * mode[i];
        den += mesh.widths[i] * mode[i] * mode[i];
        total += mesh.widths[i] * ce[i];
    }
    const double observed_amp = num / den;
    const double expected_amp = amp / std::pow(1.0 + lambda_h * dt, N);
    CHECK(observed_amp == doctest::Approx(expected_amp).epsilon(1e-12));
    // the mean is untouched by pure diffusion
    CHECK(total == doctest::Approx(cbar * L).epsilon(1e-13));
}

TEST_CASE("uniform profiles are fixed points of the diffusion step") {
    const CellConfig cfg = reference_config();
    const Mesh mesh = build_mesh(cfg.geometry, cfg.mesh);
    const std::vector<double> ce(mesh.cells(), 1.2e-3);
    const std::vector<double> zero(mesh.cells(), 0.0);
    const std::vector<double> next = step_electrolyte(mesh, cfg, ce, zero, 0.25);
    for (int i = 0; i < mesh.cells(); ++i)
        CHECK(next[i] == doctest::Approx(1.2e-3).epsilon(1e-14));
}
