#pragma once

#include <string>
#include <vector>

#include "p2dsim/config.hpp"
#include "p2dsim/mesh.hpp"

namespace p2d {

/// Pointwise inputs of the interfacial flux at one electrode location.
struct FluxInput {
    Region region = Region::Anode;
    double ce = 0;    // electrolyte concentration (> 0)
    double csB = 0;   // particle surface concentration (in (0, cs_max))
    double phis = 0;  // solid potential
    double phie = 0;  // electrolyte potential
    double T = 0;     // temperature (> 0)
};

/// Flux evaluation mode.
///  - Exponential: Butler-Volmer with exact exponentials.
///  - Truncated:   exponent-absorbed form with the bounded C^1 continuation
///                 H(s) = e^s for s <= s_inf, e^{s_inf}(2 - e^{-(s-s_inf)}) above.
///                 Requires f_phie = ln.
///  - StubLinear:  j = g0 * eta (test hook; makes the potential system linear).
struct FluxMode {
    enum class Kind { Exponential, Truncated, StubLinear };
    Kind kind = Kind::Exponential;
    double s_inf = 0;
    double g0 = 0;

    static FluxMode exponential() { return {Kind::Exponential, 0, 0}; }
    static FluxMode truncated(double s_inf) { return {Kind::Truncated, s_inf, 0}; }
    static FluxMode stub_linear(double g0) { return {Kind::StubLinear, 0, g0}; }
};

/// Bounded exponential H and its derivative. H is C^1, strictly increasing,
/// H(s) <= 2*e^{s_inf}, and equals e^s exactly for s <= s_inf.
double H_cutoff(double s, double s_inf);
double dH_cutoff(double s, double s_inf);

/// Open-circuit potential and its analytic temperature derivative.
/// Throws std::domain_error (naming the offending log argument) outside
/// 0 < csB < cs_max, ce > 0.
double ocp(Region r, double ce, double csB, double T, const KineticParams& kp);
double docp_dT(Region r, double ce, double csB, double T, const KineticParams& kp);

/// eta = phis - phie - U. The potential difference is formed first, so shifting
/// phis and phie by the same constant cancels exactly.
double overpotential(const FluxInput& in, const KineticParams& kp);

/// Interfacial flux density. Separator inputs return exactly 0 in every mode.
/// alpha_phie and f_phie are needed by the truncated (gauge-variable) form.
double flux(const FluxInput& in, const KineticParams& kp, const TransportParams& tp,
            const FluxMode& mode);

/// Nonnegative split j = j_plus - j_minus in the exponent-absorbed variables.
/// Requires f_phie = ln. In exponential mode this is an algebraic identity with
/// flux(); in truncated mode it is the defining form.
struct FluxSplit {
    double plus = 0;
    double minus = 0;
    double value() const { return plus - minus; }
};
FluxSplit flux_decomposed(const FluxInput& in, const KineticParams& kp,
                          const TransportParams& tp, const FluxMode& mode);

/// Analytic d(flux)/d(eta) at fixed concentrations and temperature.
/// Strictly positive in the electrodes for every mode (H' > 0).
double flux_deta(const FluxInput& in, const KineticParams& kp, const TransportParams& tp,
                 const FluxMode& mode);

/// One exponent condition of the blow-up-exclusion parameter check.
struct ExponentCondition {
    std::string name;     // e.g. "lambda_min_ge_(1-alpha_s)/gamma1"
    Region region{};
    double T_at = 0;      // temperature extreme where the margin is worst
    double margin = 0;    // reported margin; snapped to 0 inside the boundary band
    double raw_margin = 0;
    bool satisfied = false;
    bool boundary = false;  // true when |raw_margin| <= tolerance
};

struct ConditionReport {
    std::vector<ExponentCondition> conditions;
    double tolerance = 0;
    bool all_satisfied = true;
    std::string summary() const;
};

/// Evaluates the four exponent inequalities (in the normalized lambda/T and
/// alpha_phie + mu/T form) over both electrodes at the extremes of [T_lo, T_hi].
/// Margins within `tolerance` of zero count as boundary-satisfied and are
/// reported as exactly zero; the raw margin is kept alongside.
ConditionReport check_exponent_conditions(const KineticParams& kp, double alpha_phie,
                                          double T_lo, double T_hi,
                                          double tolerance = 1e-7);

}  // namespace p2d
