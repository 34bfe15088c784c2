#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "p2dsim/config.hpp"
#include "p2dsim/io.hpp"

using namespace p2d;

namespace {

CellConfig reference_config() { return load_config(std::string(TEST_CONFIG_DIR) + "/reference.json"); }

bool has_error(const ValidationReport& rep, const std::string& check) {
    return std::any_of(rep.errors.begin(), rep.errors.end(),
                       [&](const ValidationIssue& e) { return e.check == check; });
}

bool has_warning(const ValidationReport& rep, const std::string& check) {
    return std::any_of(rep.warnings.begin(), rep.warnings.end(),
                       [&](const ValidationIssue& e) { return e.check == check; });
}

}  // namespace

TEST_CASE("polynomial evaluation, derivative, constancy") {
    const Polynomial p{{1.0, 2.0, 3.0}};  // 1 + 2x + 3x^2
    CHECK(p(0.0) == 1.0);
    CHECK(p(0.5) == doctest::Approx(2.75).epsilon(1e-15));
    CHECK(p.derivative_at(0.5) == doctest::Approx(5.0).epsilon(1e-15));

    const Polynomial empty{};
    CHECK(empty(3.0) == 0.0);
    CHECK(empty.derivative_at(3.0) == 0.0);

    CHECK(Polynomial::constant(4.0)(123.0) == 4.0);
    CHECK(Polynomial{{5.0}}.is_constant());
    CHECK(Polynomial{{5.0, 0.0}}.is_constant());
    CHECK_FALSE(p.is_constant());

    const RegionPoly rp = RegionPoly::constant(2.0);
    CHECK(rp.in(Region::Anode)(9.0) == 2.0);
    CHECK(rp.in(Region::Separator)(9.0) == 2.0);
    CHECK(rp.in(Region::Cathode)(9.0) == 2.0);
}

TEST_CASE("coefficient table value and analytic temperature derivative") {
    CoeffTable t;
    t.ce_ref = 2.0;
    t.cs_ref = 1.0;
    t.T_ref = 300.0;
    t.terms = {{0, 0, 0, 2.0}, {1, 0, 0, 3.0}, {0, 0, 2, 0.5}};
    // value = 2 + 3*(ce/2) + 0.5*(T/300)^2
    CHECK(t.value(4.0, 1.0, 600.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(t.dT(4.0, 1.0, 600.0) == doctest::Approx(2.0 / 300.0).epsilon(1e-14));
    CHECK_FALSE(t.empty());
    CHECK(CoeffTable{}.empty());

    // negative powers are supported (1/x shapes)
    CoeffTable inv;
    inv.terms = {{-1, 0, 0, 6.0}};
    CHECK(inv.value(2.0, 1.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("f_phie: natural log and polynomial kinds") {
    FPhie ln_kind;
    ln_kind.kind = FPhie::Kind::NaturalLog;
    CHECK(ln_kind.is_log());
    CHECK(ln_kind(std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ln_kind.derivative_at(0.5) == doctest::Approx(2.0).epsilon(1e-15));

    FPhie poly_kind;
    poly_kind.kind = FPhie::Kind::Poly;
    poly_kind.poly = Polynomial{{0.0, 2.0}};
    CHECK_FALSE(poly_kind.is_log());
    CHECK(poly_kind(3.0) == 6.0);
    CHECK(poly_kind.derivative_at(3.0) == 2.0);
}

TEST_CASE("unit normalization rescales every concentration-dimensioned field") {
    const CellConfig base = reference_config();
    REQUIRE(base.input_unit == ConcentrationUnit::Internal);

    CellConfig si = base;
    si.input_unit = ConcentrationUnit::MolPerM3;
    si.kinetics.cs_max *= 1e6;
    for (double& c : si.initial.ce0.c) c *= 1e6;
    si.initial.cs0_neg *= 1e6;
    si.initial.cs0_pos *= 1e6;
    si.admissible.ce_lo *= 1e6;
    si.admissible.ce_hi *= 1e6;
    si.transport.kappa.table.ce_ref *= 1e6;
    si.kinetics.ocp.p_neg.ce_ref *= 1e6;
    si.kinetics.ocp.p_neg.cs_ref *= 1e6;
    si.kinetics.ocp.p_pos.ce_ref *= 1e6;
    si.kinetics.ocp.p_pos.cs_ref *= 1e6;

    const CellConfig norm = normalize_units(si);
    CHECK(norm.input_unit == ConcentrationUnit::Internal);
    CHECK(norm.kinetics.cs_max == doctest::Approx(base.kinetics.cs_max).epsilon(1e-14));
    CHECK(norm.initial.cs0_neg == doctest::Approx(base.initial.cs0_neg).epsilon(1e-14));
    CHECK(norm.initial.ce0(1.5) == doctest::Approx(base.initial.ce0(1.5)).epsilon(1e-14));
    CHECK(norm.admissible.ce_hi == doctest::Approx(base.admissible.ce_hi).epsilon(1e-14));
    CHECK(norm.transport.kappa.table.ce_ref ==
          doctest::Approx(base.transport.kappa.table.ce_ref).epsilon(1e-14));
    CHECK(norm.kinetics.ocp.p_pos.cs_ref ==
          doctest::Approx(base.kinetics.ocp.p_pos.cs_ref).epsilon(1e-14));
    // dimensionless fields pass through untouched
    CHECK(norm.kinetics.gamma1 == base.kinetics.gamma1);
    CHECK(norm.transport.alpha_e == base.transport.alpha_e);

    // a second call is the identity
    const CellConfig twice = normalize_units(norm);
    CHECK(twice.kinetics.cs_max == norm.kinetics.cs_max);
    CHECK(twice.initial.cs0_pos == norm.initial.cs0_pos);
}

TEST_CASE("reference config validates cleanly") {
    const ValidationReport rep = validate_config(reference_config());
    CHECK(rep.ok());
    CHECK(rep.errors.empty());
    CHECK(rep.summary().find("config valid") != std::string::npos);
}

TEST_CASE("validator flags each broken section by name") {
    const CellConfig base = reference_config();

    CellConfig c = base;
    c.geometry.L = 1.5;  // leaves no cathode
    CHECK(has_error(validate_config(c), "geometry.L"));

    c = base;
    c.mesh.n_anode = 2;
    CHECK(has_error(validate_config(c), "mesh.macro"));

    c = base;
    c.kinetics.alpha_a = 1.2;
    CHECK(has_error(validate_config(c), "kinetics.alpha_a"));

    c = base;
    c.kinetics.cs_max = 20.0;  // forgot unit conversion
    CHECK(has_error(validate_config(c), "kinetics.cs_max"));

    c = base;
    c.run_mode = RunMode::Truncated;
    c.s_inf.reset();
    CHECK(has_error(validate_config(c), "kinetics.s_inf"));

    c = base;
    c.transport.sigma_anode = 0.5 * c.transport.sigma0;
    CHECK(has_error(validate_config(c), "transport.sigma"));

    c = base;
    c.transport.kappa.kappa1 = 1e-9;  // declared band excludes the actual values
    CHECK(has_error(validate_config(c), "transport.kappa_bounds"));

    c = base;
    c.transport.De0 = 1.0;  // declared lower bound above the actual De
    CHECK(has_error(validate_config(c), "transport.De"));

    c = base;
    c.kinetics.ocp.lambda_min_pos = Polynomial{{-1e-3}};
    CHECK(has_error(validate_config(c), "ocp.lambda_min"));

    c = base;
    c.kinetics.ocp.p_bound = 1e-6;  // |p| exceeds the declared bound
    CHECK(has_error(validate_config(c), "ocp.p"));

    c = base;
    c.initial.cs0_neg = 2.0 * c.kinetics.cs_max;
    CHECK(has_error(validate_config(c), "initial.cs0_neg"));

    c = base;
    c.solver.dt_min = 2.0 * c.solver.dt0;
    CHECK(has_error(validate_config(c), "solver.dt"));

    c = base;
    c.profile.pieces.clear();
    CHECK(has_error(validate_config(c), "profile"));

    c = base;
    c.profile.pieces[1].t = {100.0, 256.0};  // gap after piece 0
    CHECK(has_error(validate_config(c), "profile.contiguity"));

    c = base;
    c.input_unit = ConcentrationUnit::MolPerM3;
    CHECK(has_error(validate_config(c), "units"));
}

TEST_CASE("out-of-box linear thermal coefficients warn about clamping") {
    CellConfig c = reference_config();
    c.thermal.mode = ThermalParams::Mode::LinearTruncated;
    c.thermal.B_T = 2.0 * c.thermal.B_T_max;
    const ValidationReport rep = validate_config(c);
    CHECK(rep.ok());
    CHECK(has_warning(rep, "thermal.B_T"));
}
