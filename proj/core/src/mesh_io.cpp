#include "pss/mesh_io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pss/errors.hpp"

namespace pss {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void export_mesh(const ImmersedSurface& surf,
                 const std::filesystem::path& path) {
  for (std::size_t n = 0; n < surf.position.size(); ++n)
    if (!surf.mask[n] && !surf.position[n].allFinite())
      throw IoError("cannot export a surface with non-finite positions");

  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "# pss mesh v1\n";
  out << "# grid " << surf.spec.nx << " " << surf.spec.nt << "\n";

  // vertex numbering skips masked nodes (OBJ indices are 1-based)
  std::vector<int> vertex_id(surf.spec.size(), 0);
  int next = 1;
  for (int j = 0; j < surf.spec.nt; ++j) {
    for (int i = 0; i < surf.spec.nx; ++i) {
      std::size_t n = surf.spec.idx(i, j);
      if (surf.mask[n]) continue;
      vertex_id[n] = next++;
      const auto& p = surf.position[n];
      out << "v " << fmt17(p.x()) << " " << fmt17(p.y()) << " "
          << fmt17(p.z()) << "\n";
    }
  }
  for (int j = 0; j + 1 < surf.spec.nt; ++j) {
    for (int i = 0; i + 1 < surf.spec.nx; ++i) {
      int a = vertex_id[surf.spec.idx(i, j)];
      int b = vertex_id[surf.spec.idx(i + 1, j)];
      int c = vertex_id[surf.spec.idx(i + 1, j + 1)];
      int d = vertex_id[surf.spec.idx(i, j + 1)];
      if (a && b && c && d)
        out << "f " << a << " " << b << " " << c << " " << d << "\n";
    }
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

MeshData import_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  MeshData mesh;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Eigen::Vector3d p;
      ss >> p.x() >> p.y() >> p.z();
      if (!ss) throw IoError("malformed vertex line: " + line);
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      std::array<int, 4> q{};
      ss >> q[0] >> q[1] >> q[2] >> q[3];
      if (!ss) throw IoError("malformed face line: " + line);
      for (int& v : q) --v;
      mesh.quads.push_back(q);
    }
  }
  return mesh;
}

void write_audit_csv(const ImmersedSurface& surf, const CurvatureStats* stats,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "i,j,x,t,px,py,pz,compat,K\n";
  for (int j = 0; j < surf.spec.nt; ++j) {
    for (int i = 0; i < surf.spec.nx; ++i) {
      std::size_t n = surf.spec.idx(i, j);
      if (surf.mask[n]) continue;
      out << i << "," << j << "," << fmt17(surf.spec.x_at(i)) << ","
          << fmt17(surf.spec.t_at(j)) << "," << fmt17(surf.position[n].x())
          << "," << fmt17(surf.position[n].y()) << ","
          << fmt17(surf.position[n].z()) << "," << fmt17(surf.compat[n])
          << ",";
      if (stats && std::isfinite(stats->k[n])) out << fmt17(stats->k[n]);
      out << "\n";
    }
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace pss
