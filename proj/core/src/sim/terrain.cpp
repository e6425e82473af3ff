#include "stride/sim/terrain.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace stride::sim {

std::string_view to_string(TerrainKind kind)
{
  switch (kind) {
    case TerrainKind::flat:
      return "flat";
    case TerrainKind::wave:
      return "wave";
    case TerrainKind::random_uniform:
      return "random_uniform";
  }
  return "flat";
}

TerrainKind terrain_kind_from_string(std::string_view s)
{
  if (s == "flat") return TerrainKind::flat;
  if (s == "wave") return TerrainKind::wave;
  if (s == "random_uniform") return TerrainKind::random_uniform;
  throw std::invalid_argument("unknown terrain kind '" + std::string(s) + "' (expected flat, wave or random_uniform)");
}

Terrain Terrain::make(TerrainKind kind, const TerrainParams& params, std::uint64_t seed)
{
  if (!(params.amplitude >= 0.0)) throw std::invalid_argument("terrain amplitude must be >= 0");
  if (!(params.wavelength > 0.0)) throw std::invalid_argument("terrain wavelength must be > 0");
  if (!(params.cell_width > 0.0)) throw std::invalid_argument("terrain cell_width must be > 0");
  if (!(params.height_range >= 0.0)) throw std::invalid_argument("terrain height_range must be >= 0");
  if (!(params.x_max > params.x_min)) throw std::invalid_argument("terrain extent must satisfy x_min < x_max");

  Terrain t;
  t.kind_ = kind;
  t.params_ = params;
  t.seed_ = seed;

  if (kind == TerrainKind::random_uniform) {
    t.first_cell_ = static_cast<long>(std::floor(params.x_min / params.cell_width));
    const long last_cell = static_cast<long>(std::floor(params.x_max / params.cell_width));
    const auto count = static_cast<std::size_t>(last_cell - t.first_cell_ + 1);
    if (count > 10'000'000) throw std::invalid_argument("terrain extent too large for the cell width");

    // Raw 53-bit draws keep the sequence identical across standard libraries.
    std::mt19937_64 gen(seed);
    t.cells_.resize(count);
    for (auto& h : t.cells_) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      h = params.height_range * (2.0 * u - 1.0);
    }
  }
  return t;
}

double Terrain::height_at(double x) const
{
  switch (kind_) {
    case TerrainKind::flat:
      return 0.0;
    case TerrainKind::wave:
      return params_.amplitude * std::sin(2.0 * std::numbers::pi * x / params_.wavelength);
    case TerrainKind::random_uniform: {
      long cell = static_cast<long>(std::floor(x / params_.cell_width)) - first_cell_;
      if (cell < 0) cell = 0;
      if (cell >= static_cast<long>(cells_.size())) cell = static_cast<long>(cells_.size()) - 1;
      return cells_[static_cast<std::size_t>(cell)];
    }
  }
  return 0.0;
}

nlohmann::json Terrain::summary() const
{
  nlohmann::json j;
  j["kind"] = std::string(to_string(kind_));
  switch (kind_) {
    case TerrainKind::flat:
      j["description"] = "level ground, height 0 everywhere";
      break;
    case TerrainKind::wave:
      j["amplitude_m"] = params_.amplitude;
      j["wavelength_m"] = params_.wavelength;
      j["description"] = "sinusoidal ground, height = amplitude * sin(2 pi x / wavelength)";
      break;
    case TerrainKind::random_uniform:
      j["cell_width_m"] = params_.cell_width;
      j["height_range_m"] = params_.height_range;
      j["seed"] = seed_;
      j["description"] = "piecewise-constant steps with random heights in [-height_range, +height_range]";
      break;
  }
  return j;
}

}  // namespace stride::sim
