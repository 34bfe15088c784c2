#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "p2dsim/config.hpp"
#include "p2dsim/mesh.hpp"

namespace p2d {

/// Halt diagnosis tags. Names are stable serialization identifiers.
enum class HaltTag {
    csB_min_zero,
    csB_max_saturation,
    ce_min_zero,
    ce_unbounded,
    T_min_zero,
    T_unbounded,
    potential_divergence,
    solver_failure,
};

const char* to_string(HaltTag tag);

struct HaltReason {
    HaltTag tag{};
    double time = 0;
    int cell = -1;        // macro cell index where the monitor fired, -1 if global
    double value = 0;     // offending value
    std::string detail;   // free-form context (e.g. last solver residual)
};

/// Full simulator state at one time level. Value semantics; stepping functions
/// take the previous state by const reference and return a new one.
struct CellState {
    double t = 0;
    double T = 0;
    std::vector<double> ce;       // per macro cell
    std::vector<double> cs;       // flat radial fields, layout per Mesh::solid_offset
    std::vector<double> phie;     // electrolyte potential, per macro cell
    std::vector<double> phie_li;  // gauge variable phi_e - alpha_phie*T*f(ce), per macro cell
    std::vector<double> phis;     // solid potential, per electrode cell (Mesh electrode index)

    std::span<const double> solid(const Mesh& mesh, int e) const;
    std::span<double> solid(const Mesh& mesh, int e);
};

/// Surface concentration per electrode node, reconstructed from the two outermost
/// shell averages by linear extrapolation to r = Rs (exact for linear-in-r fields).
std::vector<double> boundary_trace(const Mesh& mesh, const CellState& state);
std::vector<double> boundary_trace_field(const Mesh& mesh, std::span<const double> cs_flat);

/// Strict interior admissibility: ce > 0, 0 < csB < cs_max, 0 < T. Returns the
/// first violation as a HaltReason (tagged with the matching halt cause), or
/// nullopt when the state is admissible.
std::optional<HaltReason> check_admissible(const Mesh& mesh, const CellConfig& cfg,
                                           const CellState& state);

/// Builds the t = 0 state from the initial section (uniform-in-r particles) and
/// validates admissibility. Potentials are zero-initialized; the caller performs
/// the initial elliptic solve. Throws std::invalid_argument on inadmissible data.
CellState initial_state(const Mesh& mesh, const CellConfig& cfg);

}  // namespace p2d
