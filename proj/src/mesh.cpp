#include "viewplan/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace viewplan {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

void write_header(FILE* f, size_t vertices, size_t faces, bool with_faces) {
    std::fprintf(f, "ply\nformat ascii 1.0\nelement vertex %zu\n", vertices);
    std::fprintf(f, "property float x\nproperty float y\nproperty float z\n");
    std::fprintf(f, "property uchar red\nproperty uchar green\nproperty uchar blue\n");
    if (with_faces) {
        std::fprintf(f, "element face %zu\nproperty list uchar int vertex_indices\n", faces);
    }
    std::fprintf(f, "end_header\n");
}

void write_vertex(FILE* f, const Eigen::Vector3d& p, const std::array<uint8_t, 3>& c) {
    // %.9g round-trips float32 exactly.
    std::fprintf(f, "%.9g %.9g %.9g %d %d %d\n", double(float(p.x())), double(float(p.y())),
                 double(float(p.z())), c[0], c[1], c[2]);
}

struct PlyHeader {
    size_t vertex_count = 0;
    size_t face_count = 0;
    int vertex_props = 0;
    bool has_color = false;
    int color_offset = -1;
};

PlyHeader parse_header(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line) || line != "ply") {
        throw std::runtime_error("ply: " + path + ": missing magic line");
    }
    PlyHeader h;
    std::string element;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "end_header") return h;
        if (tok == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt != "ascii") throw std::runtime_error("ply: " + path + ": not ASCII format");
        } else if (tok == "element") {
            ls >> element;
            size_t n = 0;
            ls >> n;
            if (element == "vertex") h.vertex_count = n;
            if (element == "face") h.face_count = n;
        } else if (tok == "property" && element == "vertex") {
            std::string type, name;
            ls >> type >> name;
            if (name == "red") {
                h.has_color = true;
                h.color_offset = h.vertex_props;
            }
            ++h.vertex_props;
        }
    }
    throw std::runtime_error("ply: " + path + ": truncated header");
}

}  // namespace

void write_ply(const std::string& path, const TriangleMesh& mesh) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("ply: cannot write " + path);
    write_header(f.get(), mesh.vertices.size(), mesh.triangles.size(), true);
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        const auto color = i < mesh.colors.size() ? mesh.colors[i]
                                                  : std::array<uint8_t, 3>{200, 200, 200};
        write_vertex(f.get(), mesh.vertices[i], color);
    }
    for (const auto& t : mesh.triangles) {
        std::fprintf(f.get(), "3 %d %d %d\n", t[0], t[1], t[2]);
    }
}

void write_ply(const std::string& path, const PointCloud& cloud) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw std::runtime_error("ply: cannot write " + path);
    write_header(f.get(), cloud.points.size(), 0, false);
    for (size_t i = 0; i < cloud.points.size(); ++i) {
        const auto color = i < cloud.colors.size() ? cloud.colors[i]
                                                   : std::array<uint8_t, 3>{200, 200, 200};
        write_vertex(f.get(), cloud.points[i], color);
    }
}

namespace {

void read_vertices(std::istream& in, const PlyHeader& h, const std::string& path,
                   std::vector<Eigen::Vector3d>& points,
                   std::vector<std::array<uint8_t, 3>>& colors) {
    points.reserve(h.vertex_count);
    std::string line;
    for (size_t i = 0; i < h.vertex_count; ++i) {
        if (!std::getline(in, line)) {
            throw std::runtime_error("ply: " + path + ": truncated vertex data");
        }
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z)) {
            throw std::runtime_error("ply: " + path + ": bad vertex line " + std::to_string(i));
        }
        std::array<uint8_t, 3> c{200, 200, 200};
        if (h.has_color) {
            for (int skip = 3; skip < h.color_offset; ++skip) {
                double dummy;
                ls >> dummy;
            }
            int r, g, b;
            if (ls >> r >> g >> b) c = {uint8_t(r), uint8_t(g), uint8_t(b)};
        }
        points.emplace_back(x, y, z);
        colors.push_back(c);
    }
}

}  // namespace

PointCloud read_ply_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ply: cannot open " + path);
    const PlyHeader h = parse_header(in, path);
    PointCloud cloud;
    read_vertices(in, h, path, cloud.points, cloud.colors);
    return cloud;
}

TriangleMesh read_ply_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ply: cannot open " + path);
    const PlyHeader h = parse_header(in, path);
    TriangleMesh mesh;
    read_vertices(in, h, path, mesh.vertices, mesh.colors);
    std::string line;
    for (size_t i = 0; i < h.face_count; ++i) {
        if (!std::getline(in, line)) {
            throw std::runtime_error("ply: " + path + ": truncated face data");
        }
        std::istringstream ls(line);
        int n, a, b, c;
        if (!(ls >> n >> a >> b >> c) || n != 3) {
            throw std::runtime_error("ply: " + path + ": bad face line " + std::to_string(i));
        }
        mesh.triangles.push_back({a, b, c});
    }
    return mesh;
}

}  // namespace viewplan
