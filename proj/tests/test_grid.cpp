#include <cmath>
#include <sstream>

#include "core/grid.hpp"
#include "doctest.h"

using namespace pmflow;

TEST_CASE("two-cell vertical row: one interface, cell-center depths") {
  const Grid g = build_cartesian_grid(2, 1, 1.0, 1.0, Orientation::Vertical, 0.0);
  CHECK(g.interfaces.size() == 1);
  CHECK(g.depth[0] == doctest::Approx(0.5));
  CHECK(g.depth[1] == doctest::Approx(0.5));
  CHECK(g.cell_volume == doctest::Approx(1.0));
}

TEST_CASE("vertical column: depth increases downward") {
  const Grid g = build_cartesian_grid(1, 2, 1.0, 1.0, Orientation::Vertical, 0.0);
  CHECK(g.depth[0] == doctest::Approx(0.5));
  CHECK(g.depth[1] == doctest::Approx(1.5));

  const Grid big = build_cartesian_grid(3, 7, 0.4, 0.9, Orientation::Vertical, 0.0);
  for (int j = 1; j < big.nz; ++j)
    CHECK(big.depth[big.cell(0, j)] > big.depth[big.cell(0, j - 1)]);
}

TEST_CASE("100x100 grid: interface count and volume") {
  const Grid g =
      build_cartesian_grid(100, 100, 0.3048, 0.3048, Orientation::Vertical, 0.0);
  CHECK(g.interfaces.size() == 2 * 100 * 99);
  CHECK(g.thickness == doctest::Approx(0.3048));
  CHECK(g.cell_volume == doctest::Approx(0.3048 * 0.3048 * 0.3048));

  double total = 0.0;
  for (int c = 0; c < g.num_cells(); ++c) total += g.cell_volume;
  const double domain = 30.48 * 30.48 * 0.3048;
  CHECK(std::abs(total - domain) / domain < 1e-12);
}

TEST_CASE("tilted horizontal grid: depth follows the tilted axis") {
  const Grid g = build_cartesian_grid(2, 3, 1.0, 2.0, Orientation::Horizontal, 60.0);
  const double s60 = std::sin(60.0 * M_PI / 180.0);
  CHECK(g.depth[g.cell(0, 0)] == doctest::Approx(1.0 * s60));
  CHECK(g.depth[g.cell(1, 2)] == doctest::Approx(5.0 * s60));

  const Grid flat = build_cartesian_grid(2, 3, 1.0, 2.0, Orientation::Horizontal, 0.0);
  for (double d : flat.depth) CHECK(d == doctest::Approx(0.0));
}

TEST_CASE("invalid grid arguments are rejected") {
  CHECK_THROWS_AS(build_cartesian_grid(0, 1, 1.0, 1.0, Orientation::Vertical, 0.0),
                  ConfigError);
  CHECK_THROWS_AS(build_cartesian_grid(2, 2, -1.0, 1.0, Orientation::Vertical, 0.0),
                  ConfigError);
  CHECK_THROWS_AS(build_cartesian_grid(2, 2, 1.0, 1.0, Orientation::Vertical, 95.0),
                  ConfigError);
  CHECK_THROWS_AS(build_cartesian_grid(2, 2, 1.0, 1.0, Orientation::Vertical, 30.0),
                  ConfigError);
}

TEST_CASE("TPFA transmissibility: equal cells give k A / dx") {
  // Two unit cells, face area 1, k = 2e-13 each.
  const Grid g = build_cartesian_grid(2, 1, 1.0, 1.0, Orientation::Horizontal, 0.0, 1.0);
  RockProps rock;
  rock.porosity.assign(2, 0.2);
  rock.permeability.assign(2, 2e-13);
  const auto t = tpfa_transmissibility(g, rock);
  CHECK(t[0] == doctest::Approx(2e-13).epsilon(1e-14));
}

TEST_CASE("TPFA transmissibility: harmonic combination, hand computed") {
  const Grid g = build_cartesian_grid(2, 1, 1.0, 1.0, Orientation::Horizontal, 0.0, 1.0);
  RockProps rock;
  rock.porosity.assign(2, 0.2);
  rock.permeability = {1e-13, 3e-13};
  const auto t = tpfa_transmissibility(g, rock);
  // half-trans: 2e-13 and 6e-13 -> harmonic 1.5e-13
  CHECK(t[0] == doctest::Approx(1.5e-13).epsilon(1e-14));

  // symmetry: swapping the cells gives the same value
  rock.permeability = {3e-13, 1e-13};
  CHECK(tpfa_transmissibility(g, rock)[0] == doctest::Approx(t[0]).epsilon(1e-15));
}

TEST_CASE("zero permeability is a configuration error") {
  const Grid g = build_cartesian_grid(2, 1, 1.0, 1.0, Orientation::Vertical, 0.0);
  RockProps rock;
  rock.porosity.assign(2, 0.2);
  rock.permeability = {0.0, 1e-13};
  CHECK_THROWS_AS(tpfa_transmissibility(g, rock), ConfigError);
}

TEST_CASE("cell field loader: round trip and header validation") {
  std::istringstream ok("2 2\n1.0 2.0\n3.0 4.0\n");
  const auto v = load_cell_field(ok, 2, 2);
  REQUIRE(v.size() == 4);
  CHECK(v[0] == 1.0);
  CHECK(v[3] == 4.0);

  std::istringstream bad_header("3 2\n1 2 3 4 5 6\n");
  CHECK_THROWS_AS(load_cell_field(bad_header, 2, 2), ConfigError);
  std::istringstream short_data("2 2\n1 2 3\n");
  CHECK_THROWS_AS(load_cell_field(short_data, 2, 2), ConfigError);
}
