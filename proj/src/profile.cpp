#include "p2dsim/profile.hpp"

#include <algorithm>

namespace p2d {

double ProfilePiece::value(double time) const {
    if (time <= t.front()) return I.front();
    if (time >= t.back()) return I.back();
    // nodes are few; linear scan keeps this branch-predictable and exact at nodes
    std::size_t k = 1;
    while (t[k] < time) ++k;
    const double w = (time - t[k - 1]) / (t[k] - t[k - 1]);
    return I[k - 1] + w * (I[k] - I[k - 1]);
}

std::vector<double> CurrentProfile::breakpoints() const {
    std::vector<double> b;
    b.reserve(pieces.size() + 1);
    if (pieces.empty()) return b;
    b.push_back(pieces.front().t0());
    for (const auto& p : pieces) b.push_back(p.t1());
    return b;
}

CurrentProfile CurrentProfile::constant(double I, double t_end) {
    CurrentProfile p;
    p.pieces.push_back(ProfilePiece{{0.0, t_end}, {I, I}});
    return p;
}

CurrentProfile CurrentProfile::square_cycle(double I, double half) {
    CurrentProfile p;
    p.pieces.push_back(ProfilePiece{{0.0, half}, {I, I}});
    p.pieces.push_back(ProfilePiece{{half, 2.0 * half}, {-I, -I}});
    return p;
}

}  // namespace p2d
