#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace viewplan {

/// Procedural high-frequency albedo: checker with per-cell brightness
/// jitter blended with two octaves of value noise, then a tint.
struct Material {
    Eigen::Vector3f tint{1.0f, 1.0f, 1.0f};
    float checker_scale = 24.0f;  // cells per UV unit
    float noise_scale = 64.0f;
    uint32_t seed = 0;
};

struct SceneTriangle {
    Eigen::Vector3d v0, v1, v2;
    Eigen::Vector2d uv0, uv1, uv2;
    int material = 0;
};

/// Triangle-soup scene, centered about the z-axis, resting on the
/// XY-plane, normalized so the largest extent is 1.
struct Scene {
    std::vector<SceneTriangle> triangles;
    std::vector<Material> materials;
    double bounding_radius = 0.0;  // max vertex distance from the origin
};

struct SceneSpec {
    std::string generator = "tower";  // tower | textured-box-town | ruin-cluster
    int size = 0;                     // generator-specific knob, 0 = default
};

Scene make_procedural_scene(const SceneSpec& spec, uint64_t seed);

/// Albedo lookup shared by the renderer and tests; deterministic in
/// (material, uv).
Eigen::Vector3f sample_albedo(const Material& m, double u, double v);

}  // namespace viewplan
