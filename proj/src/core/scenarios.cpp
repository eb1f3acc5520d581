#include "core/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace pmflow {

namespace {

FluidProps segregation_fluids() { return {1025.0, 785.0, 3.0e-4, 3.0e-3}; }
FluidProps five_spot_fluids() { return {1025.0, 849.0, 3.0e-4, 3.0e-3}; }

double pore_volume_of(const Grid& grid, const RockProps& rock) {
  double pv = 0.0;
  for (int c = 0; c < grid.num_cells(); ++c)
    pv += grid.cell_volume * rock.porosity[c];
  return pv;
}

// Consumes string overrides into option structs; unknown keys are rejected.
class OptionReader {
public:
  explicit OptionReader(const std::map<std::string, std::string>& kv) : kv_(kv) {}

  void number(const std::string& key, double& target) {
    const auto it = kv_.find(key);
    if (it == kv_.end()) return;
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(it->second, &used);
    } catch (const std::exception&) {
      throw ConfigError("scenario override '" + key + "': invalid number '" +
                        it->second + "'");
    }
    if (used != it->second.size())
      throw ConfigError("scenario override '" + key + "': invalid number '" +
                        it->second + "'");
    target = v;
    consumed_.insert(key);
  }

  void integer(const std::string& key, int& target) {
    double v = static_cast<double>(target);
    number(key, v);
    target = static_cast<int>(std::llround(v));
  }

  void seed(const std::string& key, std::uint64_t& target) {
    double v = static_cast<double>(target);
    number(key, v);
    target = static_cast<std::uint64_t>(std::llround(v));
  }

  void finish() const {
    for (const auto& [key, value] : kv_)
      if (!consumed_.count(key))
        throw ConfigError("unknown scenario override '" + key + "'");
  }

private:
  const std::map<std::string, std::string>& kv_;
  std::set<std::string> consumed_;
};

} // namespace

void audit_scenario(const Scenario& sc) {
  const size_t m = static_cast<size_t>(sc.grid.num_cells());
  if (sc.rock.porosity.size() != m || sc.rock.permeability.size() != m)
    throw ConfigError("scenario: rock fields do not match the grid");
  if (sc.initial.p.size() != m || sc.initial.s.size() != m)
    throw ConfigError("scenario: initial state does not match the grid");
  validate_rock(sc.grid, sc.rock);
  validate_fluid(sc.fluid);
  validate_wells(sc.wells, static_cast<int>(m));
  validate_schedule(sc.schedule);
  for (double s : sc.initial.s)
    if (s < 0.0 || s > 1.0)
      throw ConfigError("scenario: initial saturation outside [0, 1]");
  double in = 0.0, out = 0.0;
  for (const Injector& w : sc.wells.injectors) in += w.rate;
  for (const Producer& w : sc.wells.producers) out += w.rate;
  if (std::abs(in - out) > 1e-12 * std::max(in, out))
    throw ConfigError("scenario: injection and production rates must balance "
                      "(incompressible closed domain)");
}

std::vector<double> correlated_gaussian_field(int nx, int nz, double corr_cells,
                                              std::uint64_t seed) {
  const int m = nx * nz;
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  };
  std::vector<double> z(m);
  for (int i = 0; i < m; i += 2) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    z[i] = r * std::cos(2.0 * M_PI * u2);
    if (i + 1 < m) z[i + 1] = r * std::sin(2.0 * M_PI * u2);
  }

  // Separable box blur, repeated; mirror boundary.
  const int radius = std::max(0, static_cast<int>(std::lround(corr_cells)));
  if (radius > 0) {
    std::vector<double> tmp(m);
    auto at = [&](int i, int j) -> double {
      i = std::clamp(i, 0, nx - 1);
      j = std::clamp(j, 0, nz - 1);
      return z[i + nx * j];
    };
    for (int pass = 0; pass < 3; ++pass) {
      for (int j = 0; j < nz; ++j)
        for (int i = 0; i < nx; ++i) {
          double sum = 0.0;
          for (int o = -radius; o <= radius; ++o) sum += at(i + o, j);
          tmp[i + nx * j] = sum / (2 * radius + 1);
        }
      z.swap(tmp);
      for (int j = 0; j < nz; ++j)
        for (int i = 0; i < nx; ++i) {
          double sum = 0.0;
          for (int o = -radius; o <= radius; ++o) sum += at(i, j + o);
          tmp[i + nx * j] = sum / (2 * radius + 1);
        }
      z.swap(tmp);
    }
  }

  // Standardize to zero mean, unit variance.
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= m;
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= m;
  const double scale = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
  for (double& v : z) v = (v - mean) * scale;
  return z;
}

Scenario gravity_segregation(const GravitySegregationOptions& opt) {
  Scenario sc;
  sc.name = "gravity_segregation";
  sc.grid = build_cartesian_grid(opt.nx, opt.nz, opt.dx, opt.dz,
                                 Orientation::Vertical, 0.0);
  const int m = sc.grid.num_cells();
  sc.rock.porosity.assign(m, opt.porosity);
  sc.rock.permeability.assign(m, opt.perm_md * units::milli_darcy);
  sc.fluid = segregation_fluids();
  sc.initial.p.assign(m, opt.p_init);
  sc.initial.s.assign(m, 0.0);
  for (int j = 0; j < opt.nz; ++j)
    for (int i = 0; i < opt.nx / 2; ++i) sc.initial.s[sc.grid.cell(i, j)] = 1.0;
  sc.schedule = {opt.t_max_days * units::day, opt.dt_days * units::day, 4};
  return sc;
}

namespace {

Scenario build_five_spot_like(const FiveSpotOptions& opt, double tilt_deg,
                              double rate_m3_per_day, double pvi_target,
                              int num_steps, const char* name) {
  Scenario sc;
  sc.name = name;
  sc.seed = opt.seed;
  sc.grid = build_cartesian_grid(opt.nx, opt.nz, opt.dx, opt.dz,
                                 Orientation::Horizontal, tilt_deg, opt.thickness);
  const int m = sc.grid.num_cells();
  sc.rock.porosity.assign(m, opt.porosity);
  const double sigma = std::sqrt(std::max(0.0, opt.variance));
  const std::vector<double> z =
      correlated_gaussian_field(opt.nx, opt.nz, opt.corr_cells, opt.seed);
  sc.rock.permeability.resize(m);
  for (int c = 0; c < m; ++c)
    sc.rock.permeability[c] =
        opt.mean_perm_md * units::milli_darcy * std::exp(sigma * z[c]);
  sc.fluid = five_spot_fluids();
  sc.initial.p.assign(m, opt.p_init);
  sc.initial.s.assign(m, 0.0);

  const double pv = pore_volume_of(sc.grid, sc.rock);
  double t_max, rate;
  if (rate_m3_per_day > 0.0) {
    rate = rate_m3_per_day / units::day;
    t_max = pvi_target * pv / rate;
  } else {
    t_max = opt.t_max_days * units::day;
    rate = pvi_target * pv / t_max;
  }
  const int center = sc.grid.cell(opt.nx / 2, opt.nz / 2);
  sc.wells.injectors.push_back({center, rate});
  const int corners[4] = {sc.grid.cell(0, 0), sc.grid.cell(opt.nx - 1, 0),
                          sc.grid.cell(0, opt.nz - 1),
                          sc.grid.cell(opt.nx - 1, opt.nz - 1)};
  for (int c : corners) sc.wells.producers.push_back({c, rate / 4.0});
  sc.schedule = {t_max, t_max / num_steps, 4};
  return sc;
}

} // namespace

Scenario heterogeneous_five_spot(const FiveSpotOptions& opt) {
  return build_five_spot_like(opt, 0.0, 0.0, opt.pvi_target, opt.num_steps,
                              "five_spot");
}

Scenario heterogeneous_five_spot(std::uint64_t seed, double variance) {
  FiveSpotOptions opt;
  opt.seed = seed;
  opt.variance = variance;
  return heterogeneous_five_spot(opt);
}

Scenario tilted_buoyancy(const TiltedBuoyancyOptions& opt) {
  if (!(opt.rate_m3_per_day > 0.0))
    throw ConfigError("tilted_buoyancy: rate must be positive");
  return build_five_spot_like(opt.base, opt.tilt_deg, opt.rate_m3_per_day,
                              opt.pvi_target, opt.num_steps, "tilted_buoyancy");
}

Scenario tilted_buoyancy(std::uint64_t seed, double rate_m3_per_day) {
  TiltedBuoyancyOptions opt;
  opt.base.seed = seed;
  opt.rate_m3_per_day = rate_m3_per_day;
  return tilted_buoyancy(opt);
}

Scenario fractured_channels(const FracturedChannelOptions& opt) {
  Scenario sc;
  sc.name = "fractured_channels";
  sc.seed = opt.seed;
  sc.grid = build_cartesian_grid(opt.nx, opt.nz, opt.dx, opt.dz,
                                 Orientation::Vertical, 0.0);
  const int m = sc.grid.num_cells();
  sc.rock.porosity.assign(m, opt.porosity);
  sc.rock.permeability.assign(m, opt.background_md * units::milli_darcy);

  // Straight and L-shaped high-permeability paths on a seeded random walk.
  std::mt19937_64 rng(opt.seed);
  auto pick = [&rng](int lo, int hi) { // inclusive bounds
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  std::vector<char> mask(m, 0);
  for (int ch = 0; ch < opt.num_channels; ++ch) {
    int i = pick(0, opt.nx - 1);
    int j = pick(0, opt.nz - 1);
    bool along_x = (rng() % 2) == 0;
    const int span = along_x ? opt.nx : opt.nz;
    int length = pick(span * 2 / 5, span * 4 / 5);
    const int dir = (rng() % 2) == 0 ? 1 : -1;
    const bool l_shape = (rng() % 2) == 0;
    for (int leg = 0; leg < (l_shape ? 2 : 1); ++leg) {
      for (int step = 0; step < length; ++step) {
        if (i < 0 || i >= opt.nx || j < 0 || j >= opt.nz) break;
        mask[sc.grid.cell(i, j)] = 1;
        (along_x ? i : j) += dir;
      }
      along_x = !along_x;
      length /= 2;
    }
  }
  for (int c = 0; c < m; ++c)
    if (mask[c]) sc.rock.permeability[c] *= opt.contrast;

  sc.fluid = segregation_fluids();
  sc.initial.p.assign(m, opt.p_init);
  sc.initial.s.assign(m, 0.0);

  const double pv = pore_volume_of(sc.grid, sc.rock);
  const double t_max = opt.t_max_days * units::day;
  const double rate = opt.pvi_target * pv / t_max;
  const int nperf = 20;
  for (int j = 0; j < nperf; ++j)
    sc.wells.injectors.push_back({sc.grid.cell(opt.nx - 1, j), rate / nperf});
  for (int j = opt.nz - nperf; j < opt.nz; ++j)
    sc.wells.producers.push_back({sc.grid.cell(0, j), rate / nperf});
  sc.schedule = {t_max, t_max / opt.num_steps, 4};
  return sc;
}

Scenario fractured_channels(std::uint64_t seed) {
  FracturedChannelOptions opt;
  opt.seed = seed;
  return fractured_channels(opt);
}

Scenario two_cell_case(const TwoCellOptions& opt) {
  Scenario sc;
  sc.name = "two_cell";
  sc.grid = opt.vertical
                ? build_cartesian_grid(1, 2, opt.dx, opt.dz, Orientation::Vertical, 0.0)
                : build_cartesian_grid(2, 1, opt.dx, opt.dz, Orientation::Horizontal,
                                       0.0, 1.0);
  sc.rock.porosity.assign(2, opt.porosity);
  sc.rock.permeability = {opt.perm_md_k * units::milli_darcy,
                          opt.perm_md_l * units::milli_darcy};
  sc.fluid = opt.segregation_fluids ? segregation_fluids() : five_spot_fluids();
  sc.initial.p = {opt.p_k, opt.p_l};
  sc.initial.s = {opt.s_k, opt.s_l};
  if (opt.with_wells) {
    const double rate = opt.rate_m3_per_day / units::day;
    sc.wells.injectors.push_back({0, rate});
    sc.wells.producers.push_back({1, rate});
  }
  sc.schedule = {opt.t_max_days * units::day, opt.dt_days * units::day, 4};
  return sc;
}

Scenario bl_1d_case(const Bl1dOptions& opt) {
  if (opt.n < 2) throw ConfigError("bl_1d: need at least two cells");
  Scenario sc;
  sc.name = "bl_1d";
  sc.grid = build_cartesian_grid(opt.n, 1, opt.dx, opt.dx, Orientation::Horizontal,
                                 0.0, 1.0);
  const int m = opt.n;
  sc.rock.porosity.assign(m, opt.porosity);
  sc.rock.permeability.assign(m, opt.perm_md * units::milli_darcy);
  sc.fluid = five_spot_fluids();
  sc.initial.p.assign(m, opt.p_init);
  sc.initial.s.assign(m, 0.0);
  const double pv = pore_volume_of(sc.grid, sc.rock);
  const double t_max = opt.t_max_days * units::day;
  const double rate = opt.pvi_target * pv / t_max;
  sc.wells.injectors.push_back({0, rate});
  sc.wells.producers.push_back({m - 1, rate});
  sc.schedule = {t_max, t_max / opt.num_steps, 4};
  return sc;
}

Scenario bl_1d_case(int n) {
  Bl1dOptions opt;
  opt.n = n;
  return bl_1d_case(opt);
}

std::vector<std::string> scenario_names() {
  return {"gravity_segregation", "five_spot", "tilted_buoyancy",
          "fractured_channels", "two_cell", "bl_1d"};
}

Scenario build_scenario(const std::string& name,
                        const std::map<std::string, std::string>& overrides) {
  OptionReader reader(overrides);
  Scenario sc;
  if (name == "gravity_segregation") {
    GravitySegregationOptions opt;
    reader.integer("nx", opt.nx);
    reader.integer("nz", opt.nz);
    reader.number("dx", opt.dx);
    reader.number("dz", opt.dz);
    reader.number("perm_md", opt.perm_md);
    reader.number("porosity", opt.porosity);
    reader.number("dt_days", opt.dt_days);
    reader.number("t_max_days", opt.t_max_days);
    reader.finish();
    sc = gravity_segregation(opt);
  } else if (name == "five_spot" || name == "tilted_buoyancy") {
    FiveSpotOptions opt;
    reader.integer("nx", opt.nx);
    reader.integer("nz", opt.nz);
    reader.number("dx", opt.dx);
    reader.number("dz", opt.dz);
    reader.number("thickness", opt.thickness);
    reader.number("mean_perm_md", opt.mean_perm_md);
    reader.number("variance", opt.variance);
    reader.number("porosity", opt.porosity);
    reader.number("corr_cells", opt.corr_cells);
    reader.seed("seed", opt.seed);
    if (name == "five_spot") {
      reader.number("pvi_target", opt.pvi_target);
      reader.number("t_max_days", opt.t_max_days);
      reader.integer("num_steps", opt.num_steps);
      reader.finish();
      sc = heterogeneous_five_spot(opt);
    } else {
      TiltedBuoyancyOptions topt;
      topt.base = opt;
      reader.number("tilt_deg", topt.tilt_deg);
      reader.number("rate_m3_per_day", topt.rate_m3_per_day);
      reader.number("pvi_target", topt.pvi_target);
      reader.integer("num_steps", topt.num_steps);
      reader.finish();
      sc = tilted_buoyancy(topt);
    }
  } else if (name == "fractured_channels") {
    FracturedChannelOptions opt;
    reader.integer("nx", opt.nx);
    reader.integer("nz", opt.nz);
    reader.number("dx", opt.dx);
    reader.number("dz", opt.dz);
    reader.number("background_md", opt.background_md);
    reader.number("contrast", opt.contrast);
    reader.integer("num_channels", opt.num_channels);
    reader.number("porosity", opt.porosity);
    reader.number("pvi_target", opt.pvi_target);
    reader.number("t_max_days", opt.t_max_days);
    reader.integer("num_steps", opt.num_steps);
    reader.seed("seed", opt.seed);
    reader.finish();
    sc = fractured_channels(opt);
  } else if (name == "two_cell") {
    TwoCellOptions opt;
    double vertical = 0.0, with_wells = 0.0;
    reader.number("vertical", vertical);
    reader.number("with_wells", with_wells);
    reader.number("dx", opt.dx);
    reader.number("dz", opt.dz);
    reader.number("perm_md_k", opt.perm_md_k);
    reader.number("perm_md_l", opt.perm_md_l);
    reader.number("porosity", opt.porosity);
    reader.number("s_k", opt.s_k);
    reader.number("s_l", opt.s_l);
    reader.number("rate_m3_per_day", opt.rate_m3_per_day);
    reader.number("dt_days", opt.dt_days);
    reader.number("t_max_days", opt.t_max_days);
    reader.finish();
    opt.vertical = vertical != 0.0;
    opt.with_wells = with_wells != 0.0;
    sc = two_cell_case(opt);
  } else if (name == "bl_1d") {
    Bl1dOptions opt;
    reader.integer("n", opt.n);
    reader.number("dx", opt.dx);
    reader.number("perm_md", opt.perm_md);
    reader.number("porosity", opt.porosity);
    reader.number("pvi_target", opt.pvi_target);
    reader.number("t_max_days", opt.t_max_days);
    reader.integer("num_steps", opt.num_steps);
    reader.finish();
    sc = bl_1d_case(opt);
  } else {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  audit_scenario(sc);
  return sc;
}

} // namespace pmflow
