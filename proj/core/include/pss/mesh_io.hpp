#pragma once

#include <Eigen/Dense>
#include <array>
#include <filesystem>
#include <vector>

#include "pss/curvature.hpp"
#include "pss/frame.hpp"

namespace pss {

/// Vertices and quad faces read back from a mesh file.
struct MeshData {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 4>> quads;  // 0-based
};

/// OBJ-style text mesh ("v x y z" + quad "f" lines, 17 significant digits).
/// Masked nodes are omitted; faces are emitted only when all four corners
/// are unmasked.
void export_mesh(const ImmersedSurface& surf,
                 const std::filesystem::path& path);

MeshData import_mesh(const std::filesystem::path& path);

/// Sidecar audit table: node indices, coordinates, position, compatibility
/// residual and (when provided) Gaussian curvature, comma-separated.
void write_audit_csv(const ImmersedSurface& surf, const CurvatureStats* stats,
                     const std::filesystem::path& path);

}  // namespace pss
