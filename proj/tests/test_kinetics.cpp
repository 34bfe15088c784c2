#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "p2dsim/kinetics.hpp"

using namespace p2d;

namespace {

// Shared evaluation point; expected values below were frozen from a 50-digit
// evaluation of the closed-form expressions, independent of this codebase.
KineticParams oracle_kinetics() {
    KineticParams kp;
    kp.delta1_neg = kp.delta1_pos = 1200.0;
    kp.delta2_neg = kp.delta2_pos = 1200.0;
    kp.gamma1 = kp.gamma2 = 5805.5;
    kp.alpha_a = kp.alpha_s_exp = kp.beta_a = 0.5;
    kp.cs_max = 0.016;
    kp.ocp.lambda_min_neg = kp.ocp.lambda_min_pos = Polynomial{{0.0, 8.7e-5}};
    kp.ocp.lambda_max_neg = kp.ocp.lambda_max_pos = Polynomial{{0.0, 9.0e-5}};
    kp.ocp.mu_neg = kp.ocp.mu_pos = Polynomial{{0.0, 5e-5}};
    kp.ocp.p_neg.terms = {{0, 0, 0, 0.2}};
    kp.ocp.p_pos.terms = {{0, 0, 0, 0.2}};
    kp.ocp.p_bound = 0.5;
    return kp;
}

TransportParams oracle_transport() {
    TransportParams tp;
    tp.alpha_phie = 4e-5;
    tp.f_phie.kind = FPhie::Kind::NaturalLog;
    return tp;
}

FluxInput oracle_point() {
    FluxInput in;
    in.region = Region::Anode;
    in.ce = 1.1e-3;
    in.csB = 7e-3;
    in.phis = 0.25;
    in.phie = 0.05;
    in.T = 300.0;
    return in;
}

}  // namespace

TEST_CASE("open-circuit potential and entropic coefficient at the frozen point") {
    const KineticParams kp = oracle_kinetics();
    const FluxInput in = oracle_point();
    CHECK(ocp(in.region, in.ce, in.csB, in.T, kp) ==
          doctest::Approx(0.10013315245898314).epsilon(1e-13));
    CHECK(docp_dT(in.region, in.ce, in.csB, in.T, kp) ==
          doctest::Approx(-0.00033288949180338953).epsilon(1e-13));
    CHECK(overpotential(in, kp) == doctest::Approx(0.09986684754101686).epsilon(1e-13));
}

TEST_CASE("interfacial flux and its slope at the frozen point") {
    const KineticParams kp = oracle_kinetics();
    const TransportParams tp = oracle_transport();
    const FluxInput in = oracle_point();
    const FluxMode mode = FluxMode::exponential();
    CHECK(flux(in, kp, tp, mode) == doctest::Approx(2.1362979523839669).epsilon(1e-12));
    CHECK(flux_deta(in, kp, tp, mode) == doctest::Approx(43.110965892044125).epsilon(1e-12));
}

TEST_CASE("shifting both potentials by the same constant leaves the flux bit-identical") {
    const KineticParams kp = oracle_kinetics();
    const TransportParams tp = oracle_transport();
    const FluxInput in = oracle_point();
    // a power of two >= ulp keeps both shifted potentials exactly representable
    const double C = std::ldexp(1.0, -30);
    FluxInput shifted = in;
    shifted.phis += C;
    shifted.phie += C;
    for (const FluxMode& mode :
         {FluxMode::exponential(), FluxMode::truncated(1.0), FluxMode::stub_linear(0.7)}) {
        CHECK(flux(shifted, kp, tp, mode) == flux(in, kp, tp, mode));
        CHECK(flux_deta(shifted, kp, tp, mode) == flux_deta(in, kp, tp, mode));
    }
}

TEST_CASE("nonnegative split reproduces the exponential flux") {
    const KineticParams kp = oracle_kinetics();
    const TransportParams tp = oracle_transport();
    const FluxInput in = oracle_point();
    const FluxSplit fs = flux_decomposed(in, kp, tp, FluxMode::exponential());
    CHECK(fs.plus > 0.0);
    CHECK(fs.minus > 0.0);
    CHECK(fs.value() ==
          doctest::Approx(flux(in, kp, tp, FluxMode::exponential())).epsilon(1e-12));
}

TEST_CASE("truncation is inert below the cutoff and caps the loaded branch above it") {
    const KineticParams kp = oracle_kinetics();
    const TransportParams tp = oracle_transport();
    const FluxInput in = oracle_point();
    const double j_exp = flux(in, kp, tp, FluxMode::exponential());

    // loaded exponent at the frozen point is ~2.29: a cutoff at 50 binds nothing
    CHECK(flux(in, kp, tp, FluxMode::truncated(50.0)) == doctest::Approx(j_exp).epsilon(1e-12));

    const double j_tr = flux(in, kp, tp, FluxMode::truncated(1.0));
    CHECK(j_tr > 0.0);
    CHECK(j_tr < j_exp);
    const FluxSplit fe = flux_decomposed(in, kp, tp, FluxMode::exponential());
    const FluxSplit ft = flux_decomposed(in, kp, tp, FluxMode::truncated(1.0));
    CHECK(ft.plus < fe.plus);
    CHECK(ft.minus == doctest::Approx(fe.minus).epsilon(1e-13));  // unloaded branch untouched
}

TEST_CASE("bounded exponential: exact below the cutoff, C1 and bounded above") {
    CHECK(H_cutoff(0.5, 1.0) == std::exp(0.5));
    CHECK(H_cutoff(1.0, 1.0) == std::exp(1.0));
    CHECK(H_cutoff(2.0, 1.0) == doctest::Approx(4.4365636569180905).epsilon(1e-14));
    CHECK(H_cutoff(-3.0, 1.0) == std::exp(-3.0));

    const double bound = 2.0 * std::exp(1.0);
    for (double s : {1.5, 3.0, 10.0}) {
        CHECK(H_cutoff(s, 1.0) < bound);
        CHECK(H_cutoff(s, 1.0) > 0.0);
    }
    // far above the cutoff the continuation saturates at the bound itself
    CHECK(H_cutoff(700.0, 1.0) <= bound);

    // strictly increasing across the kink
    double prev = H_cutoff(0.0, 1.0);
    for (double s = 0.1; s < 4.0; s += 0.1) {
        const double v = H_cutoff(s, 1.0);
        CHECK(v > prev);
        prev = v;
    }

    // derivative: e^s below, e^{2 s_inf - s} above, continuous at the cutoff
    CHECK(dH_cutoff(0.5, 1.0) == std::exp(0.5));
    CHECK(dH_cutoff(2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dH_cutoff(1.0 - 1e-9, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-8));
    CHECK(dH_cutoff(1.0 + 1e-9, 1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-8));
    const double h = 1e-6;
    const double fd = (H_cutoff(1.0 + h, 1.0) - H_cutoff(1.0 - h, 1.0)) / (2.0 * h);
    CHECK(fd == doctest::Approx(dH_cutoff(1.0, 1.0)).epsilon(1e-5));
}

TEST_CASE("log-domain violations throw with the offending argument named") {
    const KineticParams kp = oracle_kinetics();
    const TransportParams tp = oracle_transport();
    FluxInput in = oracle_point();

    in.ce = 0.0;
    CHECK_THROWS_AS(ocp(in.region, in.ce, in.csB, in.T, kp), std::domain_error);
    CHECK_THROWS_AS(flux(in, kp, tp, FluxMode::exponential()), std::domain_error);

    in = oracle_point();
    in.csB = 0.0;
    CHECK_THROWS_AS(ocp(in.region, in.ce, in.csB, in.T, kp), std::domain_error);

    in = oracle_point();
    in.csB = kp.cs_max;  // saturation boundary is outside the domain
    CHECK_THROWS_AS(flux(in, kp, tp, FluxMode::truncated(2.0)), std::domain_error);

    in = oracle_point();
    in.ce = -1e-6;
    CHECK_THROWS_AS(flux(in, kp, tp, FluxMode::exponential()), std::domain_error);
}

TEST_CASE("separator points carry no interfacial flux") {
    const KineticParams kp = oracle_kinetics();
    const TransportParams tp = oracle_transport();
    FluxInput in = oracle_point();
    in.region = Region::Separator;
    for (const FluxMode& mode :
         {FluxMode::exponential(), FluxMode::truncated(2.0), FluxMode::stub_linear(0.3)}) {
        CHECK(flux(in, kp, tp, mode) == 0.0);
        CHECK(flux_deta(in, kp, tp, mode) == 0.0);
    }
}

TEST_CASE("linear stub: j = g0 * eta") {
    const KineticParams kp = oracle_kinetics();
    const TransportParams tp = oracle_transport();
    const FluxInput in = oracle_point();
    const FluxMode mode = FluxMode::stub_linear(0.7);
    const double eta = overpotential(in, kp);
    CHECK(flux(in, kp, tp, mode) == doctest::Approx(0.7 * eta).epsilon(1e-15));
    CHECK(flux_deta(in, kp, tp, mode) == 0.7);
}

TEST_CASE("flux slope is strictly positive over random admissible samples") {
    const KineticParams kp = oracle_kinetics();
    const TransportParams tp = oracle_transport();
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int k = 0; k < 2000; ++k) {
        FluxInput in;
        in.region = (k % 2 == 0) ? Region::Anode : Region::Cathode;
        in.ce = std::exp(std::log(1e-5) + (std::log(0.1) - std::log(1e-5)) * u01(rng));
        in.csB = kp.cs_max * (0.01 + 0.98 * u01(rng));
        in.phis = -1.5 + 3.0 * u01(rng);
        in.phie = 0.0;
        in.T = 280.0 + 40.0 * u01(rng);
        CHECK(flux_deta(in, kp, tp, FluxMode::exponential()) > 0.0);
        CHECK(flux_deta(in, kp, tp, FluxMode::truncated(2.0)) > 0.0);
        CHECK(flux_deta(in, kp, tp, FluxMode::stub_linear(0.3)) > 0.0);
    }
}

TEST_CASE("analytic flux slope matches a centered difference") {
    const KineticParams kp = oracle_kinetics();
    const TransportParams tp = oracle_transport();
    const FluxInput in = oracle_point();
    const double h = 1e-7;
    for (const FluxMode& mode :
         {FluxMode::exponential(), FluxMode::truncated(1.0), FluxMode::stub_linear(0.7)}) {
        FluxInput up = in, dn = in;
        up.phis += h;
        dn.phis -= h;
        const double fd = (flux(up, kp, tp, mode) - flux(dn, kp, tp, mode)) / (2.0 * h);
        CHECK(fd == doctest::Approx(flux_deta(in, kp, tp, mode)).epsilon(1e-5));
    }
}

TEST_CASE("exponent conditions: boundary coefficient snaps to zero margin") {
    KineticParams kp = oracle_kinetics();
    kp.ocp.lambda_min_neg = kp.ocp.lambda_min_pos = Polynomial{{0.0, 8.61e-5}};
    const ConditionReport rep = check_exponent_conditions(kp, 4e-5, 280.0, 320.0);
    CHECK(rep.tolerance == 1e-7);
    REQUIRE(rep.conditions.size() == 8);  // four inequalities, both electrodes
    CHECK(rep.all_satisfied);

    int seen = 0;
    for (const ExponentCondition& c : rep.conditions) {
        CHECK(c.satisfied);
        if (c.name.find("lambda_min") != std::string::npos) {
            ++seen;
            CHECK(c.boundary);
            CHECK(c.margin == 0.0);
            CHECK(c.raw_margin == doctest::Approx(-2.52260787184501e-08).epsilon(1e-9));
            CHECK(c.T_at == 280.0);
        }
    }
    CHECK(seen == 2);
    CHECK(rep.summary().find("exponent conditions satisfied") != std::string::npos);
}

TEST_CASE("exponent conditions: an undersized coefficient is a hard violation") {
    KineticParams kp = oracle_kinetics();
    kp.ocp.lambda_min_neg = kp.ocp.lambda_min_pos = Polynomial{{0.0, 8.0e-5}};
    const ConditionReport rep = check_exponent_conditions(kp, 4e-5, 280.0, 320.0);
    CHECK_FALSE(rep.all_satisfied);

    int violated = 0;
    for (const ExponentCondition& c : rep.conditions) {
        if (c.name == "lambda_min >= (1-alpha_s)*T/gamma1") {
            ++violated;
            CHECK_FALSE(c.satisfied);
            CHECK_FALSE(c.boundary);
            CHECK(c.margin == doctest::Approx(-6.125226078718449e-06).epsilon(1e-12));
        } else {
            CHECK(c.satisfied);
        }
    }
    CHECK(violated == 2);
    CHECK(rep.summary().find("VIOLATED") != std::string::npos);
}
