#pragma once

#include <cstddef>
#include <vector>

namespace p2d {

/// One continuous piece of the applied-current program: piecewise-linear
/// interpolation through (t[k], I[k]) nodes, t strictly increasing, >= 2 nodes.
struct ProfilePiece {
    std::vector<double> t;
    std::vector<double> I;

    double t0() const { return t.front(); }
    double t1() const { return t.back(); }
    double value(double time) const;  // clamped linear interpolation inside [t0, t1]
};

/// Applied current I(t) on [0, t_end], continuous inside each piece; jumps are
/// allowed only at piece boundaries (the breakpoints). Time stepping lands on
/// every breakpoint exactly and re-solves the potentials there.
struct CurrentProfile {
    std::vector<ProfilePiece> pieces;

    double t_end() const { return pieces.empty() ? 0.0 : pieces.back().t1(); }
    std::size_t piece_count() const { return pieces.size(); }

    // Piece lookup for a step that ends at `time` inside piece `k`.
    double value(std::size_t k, double time) const { return pieces[k].value(time); }

    std::vector<double> breakpoints() const;

    static CurrentProfile constant(double I, double t_end);
    // Symmetric charge/discharge square cycle: +I on [0, half), -I on [half, 2*half).
    static CurrentProfile square_cycle(double I, double half);
};

}  // namespace p2d
