#pragma once

#include <iosfwd>
#include <vector>

#include "core/units.hpp"

namespace pmflow {

/// Plane of a structured 2D grid. Vertical grids span x-z (gravity acts along
/// the second axis); horizontal grids span x-y and may be tilted.
enum class Orientation { Vertical, Horizontal };

/// Interior face between cells k and l (k < l), with the geometric part of the
/// two half-transmissibilities (face area / center-to-face distance, in m).
struct Interface {
  int k = 0;
  int l = 0;
  double geo_half_trans_k = 0.0;
  double geo_half_trans_l = 0.0;
};

/// Structured 2D cell-centered grid with no-flow outer boundaries.
/// Cells are indexed row-major: cell = i + nx * j, 0 <= i < nx, 0 <= j < nz.
struct Grid {
  int nx = 0;
  int nz = 0;
  double dx = 0.0;
  double dz = 0.0;
  double thickness = 0.0;   // out-of-plane extent
  double cell_volume = 0.0; // identical for all cells
  Orientation orientation = Orientation::Vertical;
  double tilt_deg = 0.0;

  std::vector<double> depth;          // m per cell, positive downward
  std::vector<Interface> interfaces;  // every interior face exactly once

  // cell -> incident interfaces (CSR layout)
  std::vector<int> cell_iface_offsets;
  std::vector<int> cell_iface_index;

  int num_cells() const { return nx * nz; }
  int cell(int i, int j) const { return i + nx * j; }
};

/// Per-cell rock properties (isotropic scalar permeability).
struct RockProps {
  std::vector<double> porosity;     // (0, 1]
  std::vector<double> permeability; // m^2, > 0
};

/// Builds a uniform Cartesian grid. A vertical grid lies in the x-z plane with
/// depth equal to the cell-center z coordinate (tilt must be zero). A
/// horizontal grid lies in the x-y plane with depth = y * sin(tilt_deg).
/// The out-of-plane thickness defaults to dz for vertical grids and 1 m for
/// horizontal grids; pass a positive value to override.
Grid build_cartesian_grid(int nx, int nz, double dx, double dz,
                          Orientation orientation, double tilt_deg,
                          double thickness = -1.0);

/// TPFA interface transmissibilities (m^3): harmonic combination of the two
/// permeability-weighted half-transmissibilities. Symmetric in (k, l).
std::vector<double> tpfa_transmissibility(const Grid& grid, const RockProps& rock);

/// Validates sizes and physical ranges of a rock description.
void validate_rock(const Grid& grid, const RockProps& rock);

/// Reads a plain-text cell field: header line "nx nz", then nx*nz row-major
/// whitespace-separated values.
std::vector<double> load_cell_field(std::istream& in, int expected_nx, int expected_nz);
std::vector<double> load_cell_field_file(const std::string& path, int expected_nx, int expected_nz);

} // namespace pmflow
