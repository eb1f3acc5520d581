#include "core/grid.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace pmflow {

Grid build_cartesian_grid(int nx, int nz, double dx, double dz,
                          Orientation orientation, double tilt_deg,
                          double thickness) {
  if (nx < 1 || nz < 1)
    throw ConfigError("grid dimensions must be at least 1x1");
  if (dx <= 0.0 || dz <= 0.0)
    throw ConfigError("cell dimensions must be positive");
  if (tilt_deg < 0.0 || tilt_deg > 90.0)
    throw ConfigError("tilt angle must lie in [0, 90] degrees");
  if (orientation == Orientation::Vertical && tilt_deg != 0.0)
    throw ConfigError("tilt is only supported for horizontal grids");

  Grid g;
  g.nx = nx;
  g.nz = nz;
  g.dx = dx;
  g.dz = dz;
  g.orientation = orientation;
  g.tilt_deg = tilt_deg;
  g.thickness = thickness > 0.0
                    ? thickness
                    : (orientation == Orientation::Vertical ? dz : 1.0);
  g.cell_volume = dx * dz * g.thickness;

  const int m = nx * nz;
  g.depth.resize(m);
  const double sin_tilt = std::sin(tilt_deg * M_PI / 180.0);
  for (int j = 0; j < nz; ++j) {
    const double second_coord = (j + 0.5) * dz;
    const double d = orientation == Orientation::Vertical ? second_coord
                                                          : second_coord * sin_tilt;
    for (int i = 0; i < nx; ++i) g.depth[g.cell(i, j)] = d;
  }

  // x-direction faces: area dz*t at distance dx/2; second-axis faces: dx*t at dz/2
  const double ght_x = dz * g.thickness / (0.5 * dx);
  const double ght_z = dx * g.thickness / (0.5 * dz);
  g.interfaces.reserve(static_cast<size_t>(nz) * (nx - 1) +
                       static_cast<size_t>(nx) * (nz - 1));
  for (int j = 0; j < nz; ++j)
    for (int i = 0; i < nx; ++i) {
      if (i + 1 < nx)
        g.interfaces.push_back({g.cell(i, j), g.cell(i + 1, j), ght_x, ght_x});
      if (j + 1 < nz)
        g.interfaces.push_back({g.cell(i, j), g.cell(i, j + 1), ght_z, ght_z});
    }

  g.cell_iface_offsets.assign(m + 1, 0);
  for (const Interface& f : g.interfaces) {
    ++g.cell_iface_offsets[f.k + 1];
    ++g.cell_iface_offsets[f.l + 1];
  }
  for (int c = 0; c < m; ++c) g.cell_iface_offsets[c + 1] += g.cell_iface_offsets[c];
  g.cell_iface_index.resize(g.cell_iface_offsets[m]);
  std::vector<int> cursor(g.cell_iface_offsets.begin(), g.cell_iface_offsets.end() - 1);
  for (size_t f = 0; f < g.interfaces.size(); ++f) {
    g.cell_iface_index[cursor[g.interfaces[f].k]++] = static_cast<int>(f);
    g.cell_iface_index[cursor[g.interfaces[f].l]++] = static_cast<int>(f);
  }
  return g;
}

void validate_rock(const Grid& grid, const RockProps& rock) {
  const size_t m = static_cast<size_t>(grid.num_cells());
  if (rock.porosity.size() != m || rock.permeability.size() != m)
    throw ConfigError("rock property sizes do not match the grid");
  for (double phi : rock.porosity)
    if (!(phi > 0.0) || phi > 1.0)
      throw ConfigError("porosity must lie in (0, 1]");
  for (double k : rock.permeability)
    if (!(k > 0.0))
      throw ConfigError("permeability must be positive");
}

std::vector<double> tpfa_transmissibility(const Grid& grid, const RockProps& rock) {
  validate_rock(grid, rock);
  std::vector<double> trans(grid.interfaces.size());
  for (size_t f = 0; f < grid.interfaces.size(); ++f) {
    const Interface& iface = grid.interfaces[f];
    const double tk = rock.permeability[iface.k] * iface.geo_half_trans_k;
    const double tl = rock.permeability[iface.l] * iface.geo_half_trans_l;
    trans[f] = tk * tl / (tk + tl);
  }
  return trans;
}

std::vector<double> load_cell_field(std::istream& in, int expected_nx, int expected_nz) {
  int nx = 0, nz = 0;
  if (!(in >> nx >> nz))
    throw ConfigError("cell field: missing 'nx nz' header");
  if (nx != expected_nx || nz != expected_nz) {
    std::ostringstream msg;
    msg << "cell field: header " << nx << " " << nz << " does not match grid "
        << expected_nx << " " << expected_nz;
    throw ConfigError(msg.str());
  }
  std::vector<double> values(static_cast<size_t>(nx) * nz);
  for (double& v : values)
    if (!(in >> v))
      throw ConfigError("cell field: fewer values than nx*nz");
  return values;
}

std::vector<double> load_cell_field_file(const std::string& path, int expected_nx,
                                         int expected_nz) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open cell field file: " + path);
  return load_cell_field(in, expected_nx, expected_nz);
}

} // namespace pmflow
