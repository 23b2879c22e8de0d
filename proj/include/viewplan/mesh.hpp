#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace viewplan {

struct TriangleMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<uint8_t, 3>> colors;  // per vertex

    bool empty() const { return vertices.empty(); }
};

struct PointCloud {
    std::vector<Eigen::Vector3d> points;
    std::vector<std::array<uint8_t, 3>> colors;

    bool empty() const { return points.empty(); }
};

// ASCII PLY with per-vertex colors; float32 coordinates, deterministic
// formatting. Readers throw std::runtime_error naming the file on
// parse failure.
void write_ply(const std::string& path, const TriangleMesh& mesh);
void write_ply(const std::string& path, const PointCloud& cloud);
PointCloud read_ply_points(const std::string& path);  // vertices of a mesh or cloud
TriangleMesh read_ply_mesh(const std::string& path);

}  // namespace viewplan
