#pragma once

#include <span>
#include <vector>

namespace p2d {

enum class Region { Anode, Separator, Cathode };

struct CellGeometry {
    double L = 0;       // total cell thickness, anode|separator|cathode
    double L1 = 0;      // anode thickness
    double delta = 0;   // separator thickness
    double Rs_neg = 0;  // particle radius, negative electrode
    double Rs_pos = 0;  // particle radius, positive electrode
    double A = 0;       // plate area
    double Rf = 0;      // film resistance (enters voltage and contact heat only)
};

/// Radial finite-volume grid for one spherical particle family.
/// Shell i spans [faces[i], faces[i+1]]; shell_volumes[i] = (r_{i+1}^3 - r_i^3)/3
/// so that sum(shell_volumes) == radius^3/3 exactly up to summation roundoff.
struct ParticleGrid {
    double radius = 0;
    std::vector<double> faces;          // size shells()+1, faces[0] == 0, faces.back() == radius
    std::vector<double> centers;        // shell centers, size shells()
    std::vector<double> shell_volumes;  // r^2 dr measure per shell

    int shells() const { return static_cast<int>(centers.size()); }
    double total_volume() const;  // sum of shell volumes

    // volume-weighted content of a radial field: sum_i vol_i * c_i
    double mass(std::span<const double> c) const;
};

/// Macroscale cell-centered finite-volume mesh on [0, L].
/// The region interfaces x = L1 and x = L1 + delta lie exactly on faces, so every
/// cell belongs to exactly one region. widths[] doubles as the quadrature weights:
/// sum(widths) == L up to roundoff.
struct Mesh {
    std::vector<double> faces;    // size cells()+1
    std::vector<double> centers;  // size cells()
    std::vector<double> widths;   // size cells()
    std::vector<Region> region;   // size cells()
    int n_anode = 0;
    int n_separator = 0;
    int n_cathode = 0;

    ParticleGrid particle_neg;
    ParticleGrid particle_pos;

    int cells() const { return static_cast<int>(centers.size()); }
    double length() const { return faces.back(); }

    bool is_electrode(int cell) const { return region[cell] != Region::Separator; }
    int electrode_count() const { return n_anode + n_cathode; }

    // Electrode-local index: anode cells map to [0, n_anode), cathode cells to
    // [n_anode, n_anode + n_cathode), in x order. Separator cells map to -1.
    int electrode_of_cell(int cell) const;
    int cell_of_electrode(int e) const;

    const ParticleGrid& particle(Region r) const;
    const ParticleGrid& particle_of_electrode(int e) const {
        return e < n_anode ? particle_neg : particle_pos;
    }

    // Flat storage layout for the per-node radial fields: node e occupies
    // [solid_offset(e), solid_offset(e) + particle_of_electrode(e).shells()).
    int solid_offset(int e) const;
    int solid_size() const;

    // midpoint quadrature over all cells / over one region
    double integrate(std::span<const double> f) const;
    double integrate_region(std::span<const double> f, Region r) const;
};

struct MeshSpec {
    int n_anode = 15;
    int n_separator = 15;
    int n_cathode = 15;
    int n_radial_neg = 25;
    int n_radial_pos = 25;
    // Width ratio between consecutive cells inside a region (1 = uniform).
    double grading_anode = 1.0;
    double grading_separator = 1.0;
    double grading_cathode = 1.0;
};

/// Builds the macro mesh and both particle grids. Throws std::invalid_argument on
/// degenerate geometry (non-positive thicknesses/radii or counts < 3).
Mesh build_mesh(const CellGeometry& geom, const MeshSpec& spec);

}  // namespace p2d
