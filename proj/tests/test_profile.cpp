#include <doctest.h>

#include <vector>

#include "p2dsim/profile.hpp"

using namespace p2d;

TEST_CASE("constant profile") {
    const CurrentProfile p = CurrentProfile::constant(2.5, 10.0);
    REQUIRE(p.piece_count() == 1);
    CHECK(p.t_end() == 10.0);
    CHECK(p.value(0, 0.0) == 2.5);
    CHECK(p.value(0, 7.3) == 2.5);
    CHECK(p.value(0, 10.0) == 2.5);
    const std::vector<double> bp = p.breakpoints();
    REQUIRE(bp.size() == 2);
    CHECK(bp[0] == 0.0);
    CHECK(bp[1] == 10.0);
}

TEST_CASE("square cycle: two pieces with a sign jump at the half time") {
    const CurrentProfile p = CurrentProfile::square_cycle(3.0, 128.0);
    REQUIRE(p.piece_count() == 2);
    CHECK(p.t_end() == 256.0);
    CHECK(p.value(0, 64.0) == 3.0);
    CHECK(p.value(1, 200.0) == -3.0);
    CHECK(p.pieces[0].t1() == 128.0);
    CHECK(p.pieces[1].t0() == 128.0);
    const std::vector<double> bp = p.breakpoints();
    REQUIRE(bp.size() == 3);
    CHECK(bp[0] == 0.0);
    CHECK(bp[1] == 128.0);
    CHECK(bp[2] == 256.0);
}

TEST_CASE("piecewise-linear interpolation with clamped ends") {
    ProfilePiece piece;
    piece.t = {0.0, 2.0, 4.0};
    piece.I = {0.0, 4.0, 0.0};
    CHECK(piece.t0() == 0.0);
    CHECK(piece.t1() == 4.0);
    CHECK(piece.value(1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(piece.value(2.0) == 4.0);
    CHECK(piece.value(3.0) == doctest::Approx(2.0).epsilon(1e-15));
    // out-of-range queries clamp to the endpoint values
    CHECK(piece.value(-1.0) == 0.0);
    CHECK(piece.value(5.0) == 0.0);
}
