#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace stride::sim {

enum class TerrainKind
{
  flat,
  wave,
  random_uniform,
};

std::string_view to_string(TerrainKind kind);
TerrainKind terrain_kind_from_string(std::string_view s);

struct TerrainParams
{
  double amplitude = 0.1;     // wave peak height (m)
  double wavelength = 2.0;    // wave period along x (m)
  double cell_width = 0.5;    // random_uniform step width (m)
  double height_range = 0.05; // random_uniform heights drawn from [-range, +range] (m)
  double x_min = -10.0;       // random_uniform extent; heights are held constant beyond it
  double x_max = 60.0;
};

/// Height field over the x axis.
///
///   flat            h(x) = 0
///   wave            h(x) = amplitude * sin(2 pi x / wavelength)
///   random_uniform  piecewise constant per cell [k w, (k+1) w), each cell
///                   height drawn once from U[-height_range, +height_range]
///                   by a generator seeded with `seed`
class Terrain
{
public:
  Terrain() = default;

  /// Throws std::invalid_argument on amplitude < 0, wavelength <= 0,
  /// cell_width <= 0, height_range < 0 or an empty extent.
  static Terrain make(TerrainKind kind, const TerrainParams& params, std::uint64_t seed);

  TerrainKind kind() const { return kind_; }
  const TerrainParams& params() const { return params_; }
  std::uint64_t seed() const { return seed_; }

  double height_at(double x) const;

  /// Per-cell heights of a random_uniform terrain, cell k covering
  /// [first_cell() + k, first_cell() + k + 1) * cell_width. Empty otherwise.
  const std::vector<double>& cell_heights() const { return cells_; }
  long first_cell() const { return first_cell_; }

  nlohmann::json summary() const;

private:
  TerrainKind kind_ = TerrainKind::flat;
  TerrainParams params_;
  std::uint64_t seed_ = 0;
  std::vector<double> cells_;
  long first_cell_ = 0;
};

}  // namespace stride::sim
