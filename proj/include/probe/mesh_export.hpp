#pragma once

#include <optional>
#include <string>

#include "probe/feasibility.hpp"

namespace probe {

struct MeshStats {
  int vertices = 0;
  int faces = 0;
  int sector_wedges = 0;
};

/// Wavefront OBJ text with groups "obstacles", "insertion" (a thin
/// triangular prism along a -> c_int) and "sector" (a fan of `wedges`
/// triangles, omitted for rho = 0). Visualization only; the prism and fan
/// are not collision geometry. Coordinates are in scene coordinates.
std::string mesh_obj(const Scene& scene, const std::optional<Trajectory>& t, int wedges = 64,
                     MeshStats* stats = nullptr);

}  // namespace probe
