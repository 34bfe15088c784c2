#pragma once

#include <optional>
#include <string>
#include <vector>

#include "p2dsim/mesh.hpp"
#include "p2dsim/profile.hpp"

namespace p2d {

/// Dense polynomial sum_k c[k] * x^k. An empty coefficient list evaluates to 0.
struct Polynomial {
    std::vector<double> c;

    double operator()(double x) const;
    double derivative_at(double x) const;
    int degree() const { return c.empty() ? 0 : static_cast<int>(c.size()) - 1; }
    bool is_constant() const;

    static Polynomial constant(double v) { return Polynomial{{v}}; }
};

/// Per-region polynomial in the global coordinate x (used for De).
struct RegionPoly {
    Polynomial anode, separator, cathode;
    const Polynomial& in(Region r) const;
    static RegionPoly constant(double v);
};

/// Coefficient table in normalized monomials:
///   f(ce, cs, T) = sum_terms c * (ce/ce_ref)^i * (cs/cs_ref)^j * (T/T_ref)^k.
/// Integer exponents, so evaluation needs no domain restriction.
struct CoeffTable {
    struct Term {
        int i = 0, j = 0, k = 0;
        double c = 0;
    };
    std::vector<Term> terms;
    double ce_ref = 1.0;
    double cs_ref = 1.0;
    double T_ref = 1.0;

    double value(double ce, double cs, double T) const;
    double dT(double ce, double cs, double T) const;  // analytic temperature derivative
    bool empty() const { return terms.empty(); }
};

/// Electrolyte conductivity model kappa(ce, T), with the declared admissible
/// bounds [kappa0, kappa1] that validation enforces by sampling.
struct KappaModel {
    CoeffTable table;
    double kappa0 = 0;  // declared lower bound, must be > 0
    double kappa1 = 0;  // declared upper bound

    double operator()(double ce, double T) const { return table.value(ce, 0.0, T); }
};

/// The concentration map f in phi_e,Li = phi_e - alpha_phie * T * f(ce).
/// Natural log by default; a polynomial alternative is accepted where the
/// decomposed flux forms are not required.
struct FPhie {
    enum class Kind { NaturalLog, Poly };
    Kind kind = Kind::NaturalLog;
    Polynomial poly;

    double operator()(double ce) const;
    double derivative_at(double ce) const;
    bool is_log() const { return kind == Kind::NaturalLog; }
};

struct TransportParams {
    RegionPoly De;        // electrolyte diffusivity vs x
    double De0 = 0;       // declared positive lower bound for De
    double Ds_neg = 0;    // solid diffusivity, negative particles
    double Ds_pos = 0;    // solid diffusivity, positive particles
    double sigma_anode = 0;
    double sigma_cathode = 0;
    double sigma0 = 0;    // declared positive lower bound for sigma
    KappaModel kappa;
    double alpha_e = 0;      // electrolyte source coefficient
    double alpha_s_neg = 0;  // particle-surface flux coefficient, negative
    double alpha_s_pos = 0;  // particle-surface flux coefficient, positive
    double alpha_phie = 0;   // reference-electrode coefficient (>= 0)
    FPhie f_phie;

    double sigma(Region r) const { return r == Region::Anode ? sigma_anode : sigma_cathode; }
    double alpha_s(Region r) const { return r == Region::Anode ? alpha_s_neg : alpha_s_pos; }
};

/// Open-circuit potential
///   U = -lambda_min(x,T) ln cs + lambda_max(x,T) ln(cs_max - cs) + mu(x,T) ln ce + p(ce,cs,T)
/// with lambda_min, lambda_max, mu >= 0 given as polynomials in T per electrode and
/// p a bounded remainder (|p| <= p_bound on the admissible box).
struct OCPParams {
    Polynomial lambda_min_neg, lambda_min_pos;
    Polynomial lambda_max_neg, lambda_max_pos;
    Polynomial mu_neg, mu_pos;
    CoeffTable p_neg, p_pos;
    double p_bound = 0;

    const Polynomial& lambda_min(Region r) const;
    const Polynomial& lambda_max(Region r) const;
    const Polynomial& mu(Region r) const;
    const CoeffTable& p(Region r) const;
};

struct KineticParams {
    double delta1_neg = 0, delta1_pos = 0;  // anodic rate prefactors
    double delta2_neg = 0, delta2_pos = 0;  // cathodic rate prefactors
    double gamma1 = 0, gamma2 = 0;          // inverse thermal-voltage slopes [K/V]
    double alpha_a = 0.5;                   // electrolyte concentration exponent
    double alpha_s_exp = 0.5;               // surface concentration exponent
    double beta_a = 0.5;                    // vacancy concentration exponent
    double cs_max = 0;                      // must be < 1 after unit normalization
    OCPParams ocp;

    double delta1(Region r) const { return r == Region::Anode ? delta1_neg : delta1_pos; }
    double delta2(Region r) const { return r == Region::Anode ? delta2_neg : delta2_pos; }
};

struct ThermalParams {
    enum class Mode { Full, LinearTruncated, Zero };
    Mode mode = Mode::Full;
    double alpha_T = 0;  // Newton cooling rate (>= 0)
    double T_amb = 0;    // ambient temperature (> 0)

    // Linear-truncated source F_T = B_T + T * A_T; coefficients are clamped to the
    // declared boxes before every use.
    double B_T = 0, B_T_max = 0;
    double A_T = 0, A_T_min = 0, A_T_max = 0;
};

struct MonitorThresholds {
    double ce_floor_rel = 1e-8;    // halt when min ce < ce_floor_rel * ce_ref
    double ce_cap_rel = 1e8;       // halt when max ce > ce_cap_rel * ce_ref
    double csB_margin_rel = 1e-6;  // halt when csB leaves [m, cs_max - m], m = rel * cs_max
    double T_min = 1.0;
    double T_max = 5000.0;
    double potential_cap = 100.0;  // halt when max |phis - phie_li| exceeds this
};

/// Declared admissible box used by the sampled bound checks (kappa, p) and as the
/// default temperature range for the exponent-condition report.
struct AdmissibleRanges {
    double ce_lo = 0, ce_hi = 0;
    double T_lo = 0, T_hi = 0;
};

struct SolverOptions {
    double dt0 = 1.0;
    double dt_min = 1e-6;
    double dt_max = 1e9;
    double growth = 1.2;     // dt growth factor after easy steps
    int grow_after = 5;      // consecutive easy steps before growing dt
    double picard_tol = 1e-9;
    int max_picard = 25;
    double newton_tol = 1e-10;
    int max_newton = 50;
    int record_every = 1;    // time-series cadence in accepted steps
    int snapshot_every = 0;  // 0 = none, 1 = all, N = every N records
    int threads = 1;
};

struct InitialSpec {
    Polynomial ce0;       // initial electrolyte concentration vs x (> 0)
    double cs0_neg = 0;   // uniform initial particle concentration, negative
    double cs0_pos = 0;   // uniform initial particle concentration, positive
    double T0 = 0;
};

enum class ConcentrationUnit { Internal, MolPerM3, MolPerCm3 };

enum class RunMode { Exponential, Truncated, TruncatedLinearFT };

struct CellConfig {
    CellGeometry geometry;
    TransportParams transport;
    KineticParams kinetics;
    ThermalParams thermal;
    MeshSpec mesh;
    InitialSpec initial;
    MonitorThresholds monitors;
    AdmissibleRanges admissible;
    SolverOptions solver;
    CurrentProfile profile;
    RunMode run_mode = RunMode::Exponential;
    std::optional<double> s_inf;  // truncation cutoff, required by truncated modes
    ConcentrationUnit input_unit = ConcentrationUnit::Internal;
};

/// Converts every concentration-carrying input to the internal unit system
/// (mol/cm^3 scale, in which a physical cs_max sits below 1). Idempotent: the
/// returned config is tagged Internal, so a second call is the identity.
CellConfig normalize_units(CellConfig cfg);

struct ValidationIssue {
    std::string check;    // stable identifier, e.g. "kinetics.alpha_a"
    std::string message;  // human-readable, includes offending values
};

struct ValidationReport {
    std::vector<ValidationIssue> errors;
    std::vector<ValidationIssue> warnings;
    bool ok() const { return errors.empty(); }
    std::string summary() const;
};

/// Structural and physical admissibility checks on a unit-normalized config.
/// Runs every check (never aborts mid-way) and reports all failures.
ValidationReport validate_config(const CellConfig& cfg);

}  // namespace p2d
