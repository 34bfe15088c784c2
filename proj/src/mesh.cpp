#include "p2dsim/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace p2d {

namespace {

// Appends the faces of one region partitioned into n cells with width ratio q
// between neighbors. The region endpoints are set exactly (no accumulation of
// the running sum into the material interfaces).
void append_region_faces(std::vector<double>& faces, double x0, double x1, int n, double q) {
    const double len = x1 - x0;
    if (q == 1.0) {
        for (int i = 1; i < n; ++i) faces.push_back(x0 + len * (static_cast<double>(i) / n));
    } else {
        // widths w0 * q^i with w0 = len * (1-q) / (1-q^n)
        const double w0 = len * (1.0 - q) / (1.0 - std::pow(q, n));
        double acc = 0.0;
        for (int i = 1; i < n; ++i) {
            acc += w0 * std::pow(q, i - 1);
            faces.push_back(x0 + acc);
        }
    }
    faces.push_back(x1);
}

ParticleGrid build_particle(double radius, int n) {
    ParticleGrid g;
    g.radius = radius;
    g.faces.resize(n + 1);
    g.centers.resize(n);
    g.shell_volumes.resize(n);
    for (int i = 0; i <= n; ++i) g.faces[i] = radius * (static_cast<double>(i) / n);
    g.faces[n] = radius;
    for (int i = 0; i < n; ++i) {
        g.centers[i] = 0.5 * (g.faces[i] + g.faces[i + 1]);
        const double r0 = g.faces[i], r1 = g.faces[i + 1];
        g.shell_volumes[i] = (r1 * r1 * r1 - r0 * r0 * r0) / 3.0;
    }
    return g;
}

}  // namespace

double ParticleGrid::total_volume() const {
    double s = 0;
    for (double v : shell_volumes) s += v;
    return s;
}

double ParticleGrid::mass(std::span<const double> c) const {
    double s = 0;
    for (int i = 0; i < shells(); ++i) s += shell_volumes[i] * c[i];
    return s;
}

int Mesh::electrode_of_cell(int cell) const {
    if (cell < n_anode) return cell;
    if (cell < n_anode + n_separator) return -1;
    return cell - n_separator;
}

int Mesh::cell_of_electrode(int e) const {
    return e < n_anode ? e : e + n_separator;
}

const ParticleGrid& Mesh::particle(Region r) const {
    return r == Region::Anode ? particle_neg : particle_pos;
}

int Mesh::solid_offset(int e) const {
    const int m_neg = particle_neg.shells();
    if (e <= n_anode) return e * m_neg;
    return n_anode * m_neg + (e - n_anode) * particle_pos.shells();
}

int Mesh::solid_size() const { return solid_offset(electrode_count()); }

double Mesh::integrate(std::span<const double> f) const {
    double s = 0;
    for (int i = 0; i < cells(); ++i) s += widths[i] * f[i];
    return s;
}

double Mesh::integrate_region(std::span<const double> f, Region r) const {
    double s = 0;
    for (int i = 0; i < cells(); ++i)
        if (region[i] == r) s += widths[i] * f[i];
    return s;
}

Mesh build_mesh(const CellGeometry& geom, const MeshSpec& spec) {
    if (!(geom.L1 > 0) || !(geom.delta > 0) || !(geom.L > geom.L1 + geom.delta))
        throw std::invalid_argument("build_mesh: need 0 < L1, 0 < delta, L1 + delta < L");
    if (!(geom.Rs_neg > 0) || !(geom.Rs_pos > 0))
        throw std::invalid_argument("build_mesh: particle radii must be positive");
    if (spec.n_anode < 3 || spec.n_separator < 3 || spec.n_cathode < 3)
        throw std::invalid_argument("build_mesh: need at least 3 cells per region");
    if (spec.n_radial_neg < 3 || spec.n_radial_pos < 3)
        throw std::invalid_argument("build_mesh: need at least 3 radial shells");
    if (!(spec.grading_anode > 0) || !(spec.grading_separator > 0) || !(spec.grading_cathode > 0))
        throw std::invalid_argument("build_mesh: grading ratios must be positive");

    Mesh m;
    m.n_anode = spec.n_anode;
    m.n_separator = spec.n_separator;
    m.n_cathode = spec.n_cathode;

    m.faces.reserve(spec.n_anode + spec.n_separator + spec.n_cathode + 1);
    m.faces.push_back(0.0);
    append_region_faces(m.faces, 0.0, geom.L1, spec.n_anode, spec.grading_anode);
    append_region_faces(m.faces, geom.L1, geom.L1 + geom.delta, spec.n_separator,
                        spec.grading_separator);
    append_region_faces(m.faces, geom.L1 + geom.delta, geom.L, spec.n_cathode,
                        spec.grading_cathode);

    const int n = static_cast<int>(m.faces.size()) - 1;
    m.centers.resize(n);
    m.widths.resize(n);
    m.region.resize(n);
    for (int i = 0; i < n; ++i) {
        m.centers[i] = 0.5 * (m.faces[i] + m.faces[i + 1]);
        m.widths[i] = m.faces[i + 1] - m.faces[i];
        if (i < spec.n_anode)
            m.region[i] = Region::Anode;
        else if (i < spec.n_anode + spec.n_separator)
            m.region[i] = Region::Separator;
        else
            m.region[i] = Region::Cathode;
    }

    m.particle_neg = build_particle(geom.Rs_neg, spec.n_radial_neg);
    m.particle_pos = build_particle(geom.Rs_pos, spec.n_radial_pos);
    return m;
}

}  // namespace p2d
