#pragma once

#include <array>
#include <string>
#include <vector>

namespace p2d {

/// One observed-order result from the built-in verification scenarios.
struct OrderCheck {
    std::string suite;   // "elliptic" | "electrolyte" | "solid-diffusion"
    std::string name;    // "spatial" | "temporal"
    double observed = 0;
    double expected = 0;
    double tol = 0;
    bool pass = false;
    std::array<double, 3> samples{};  // functional or error values, coarse to fine
    std::string label() const { return suite + "." + name; }
};

/// Runs the named verification suite ("all" for every one):
///  - elliptic: manufactured smooth potentials against the analytic divergence,
///    interfacial-flux contribution cancelled exactly; spatial order ~ 2.
///  - electrolyte: cosine eigenmode decay under mesh halving (spatial ~ 2) and
///    step halving (temporal ~ 1), Richardson ratios on the modal amplitude.
///  - solid-diffusion: smooth radial profile with constant surface flux;
///    Richardson ratios on the extrapolated surface trace, spatial ~ 2 and
///    temporal ~ 1.
std::vector<OrderCheck> run_verification(const std::string& suite);

bool all_pass(const std::vector<OrderCheck>& checks);

/// "verify[elliptic.spatial] observed=1.997 expected=2.0+-0.2 ... PASS" lines.
std::string format_order_checks(const std::vector<OrderCheck>& checks);

}  // namespace p2d
