#include "viewplan/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "viewplan/geometry.hpp"

namespace viewplan {

namespace {

// Integer hash (splitmix-style finalizer) for texture noise.
inline uint32_t hash_u32(uint32_t x) {
    x ^= x >> 16;
    x *= 0x7feb352dU;
    x ^= x >> 15;
    x *= 0x846ca68bU;
    x ^= x >> 16;
    return x;
}

inline float lattice(int ix, int iy, uint32_t seed) {
    const uint32_t h = hash_u32(uint32_t(ix) * 0x9E3779B9U ^ uint32_t(iy) * 0x85EBCA6BU ^ seed);
    return float(h) * (1.0f / 4294967295.0f);
}

float value_noise(double u, double v, uint32_t seed) {
    const double fu = std::floor(u), fv = std::floor(v);
    const int ix = int(fu), iy = int(fv);
    const float tx = float(u - fu), ty = float(v - fv);
    const float sx = tx * tx * (3.0f - 2.0f * tx);
    const float sy = ty * ty * (3.0f - 2.0f * ty);
    const float a = lattice(ix, iy, seed), b = lattice(ix + 1, iy, seed);
    const float c = lattice(ix, iy + 1, seed), d = lattice(ix + 1, iy + 1, seed);
    return (a + (b - a) * sx) + ((c + (d - c) * sx) - (a + (b - a) * sx)) * sy;
}

struct SceneRng {
    std::mt19937_64 gen;
    explicit SceneRng(uint64_t seed) : gen(seed) {}
    double uniform() { return double(gen() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int index(int n) { return int(gen() % uint64_t(n)); }
};

void add_box(std::vector<SceneTriangle>& tris, const Eigen::Vector3d& center,
             const Eigen::Vector3d& size, double yaw, int material) {
    const double c = std::cos(yaw), s = std::sin(yaw);
    auto corner = [&](int i) {
        Eigen::Vector3d p(((i & 1) ? 0.5 : -0.5) * size.x(), ((i & 2) ? 0.5 : -0.5) * size.y(),
                          ((i & 4) ? 0.5 : -0.5) * size.z());
        return Eigen::Vector3d(c * p.x() - s * p.y() + center.x(),
                               s * p.x() + c * p.y() + center.y(), p.z() + center.z());
    };
    // Quads as corner indices, outward winding.
    static const int faces[6][4] = {
        {1, 3, 7, 5},  // +x
        {2, 0, 4, 6},  // -x
        {3, 2, 6, 7},  // +y
        {0, 1, 5, 4},  // -y
        {4, 5, 7, 6},  // +z
        {2, 3, 1, 0},  // -z
    };
    for (const auto& f : faces) {
        const Eigen::Vector3d p0 = corner(f[0]), p1 = corner(f[1]), p2 = corner(f[2]),
                              p3 = corner(f[3]);
        SceneTriangle a{p0, p1, p2, {}, {}, {}, material};
        SceneTriangle b{p0, p2, p3, {}, {}, {}, material};
        tris.push_back(a);
        tris.push_back(b);
    }
}

void generate_tower(std::vector<SceneTriangle>& tris, SceneRng& rng, int size) {
    const int tiers = size > 0 ? size : 4;
    double base = 3.2;
    double z = 0.0;
    for (int t = 0; t < tiers; ++t) {
        const double h = rng.range(1.6, 2.4);
        const double yaw = rng.range(-0.25, 0.25);
        add_box(tris, {0, 0, z + h / 2}, {base, base, h}, yaw, t % 4);
        // Ledge between tiers.
        const double ledge = base * rng.range(1.12, 1.25);
        add_box(tris, {0, 0, z + h + 0.1}, {ledge, ledge, 0.2}, yaw, (t + 1) % 4);
        z += h + 0.2;
        base *= rng.range(0.78, 0.9);
    }
    // Crenellations on the top ledge.
    const double top = z;
    for (int i = 0; i < 4; ++i) {
        const double a = i * (0.5 * kPi);
        add_box(tris, {1.05 * base * std::cos(a), 1.05 * base * std::sin(a), top + 0.35},
                {0.5, 0.5, 0.7}, a, i % 4);
    }
    // Buttresses at the base.
    for (int i = 0; i < 4; ++i) {
        const double a = (i + 0.5) * (0.5 * kPi);
        add_box(tris, {2.1 * std::cos(a), 2.1 * std::sin(a), 0.9}, {1.0, 1.0, 1.8},
                rng.range(-0.3, 0.3), (i + 2) % 4);
    }
}

void generate_box_town(std::vector<SceneTriangle>& tris, SceneRng& rng, int size) {
    const int grid = size > 0 ? size : 5;
    const double pitch = 2.2;
    for (int gy = 0; gy < grid; ++gy) {
        for (int gx = 0; gx < grid; ++gx) {
            if (rng.uniform() < 0.15) continue;  // empty lot
            const double w = rng.range(1.1, 1.9);
            const double d = rng.range(1.1, 1.9);
            const double h = rng.range(1.0, 5.0);
            const double cx = (gx - 0.5 * (grid - 1)) * pitch + rng.range(-0.2, 0.2);
            const double cy = (gy - 0.5 * (grid - 1)) * pitch + rng.range(-0.2, 0.2);
            add_box(tris, {cx, cy, h / 2}, {w, d, h}, rng.range(-0.2, 0.2), rng.index(4));
        }
    }
}

void generate_ruin_cluster(std::vector<SceneTriangle>& tris, SceneRng& rng, int size) {
    const int walls = size > 0 ? size : 10;
    for (int i = 0; i < walls; ++i) {
        const double a = rng.range(0.0, kTwoPi);
        const double r = rng.range(0.5, 3.0);
        const double len = rng.range(1.5, 4.0);
        const double h = rng.range(1.0, 3.5);
        add_box(tris, {r * std::cos(a), r * std::sin(a), h / 2}, {len, 0.35, h},
                rng.range(0.0, kPi), rng.index(4));
    }
    // Collapsed slabs leaning about.
    for (int i = 0; i < walls / 2; ++i) {
        const double a = rng.range(0.0, kTwoPi);
        const double r = rng.range(0.0, 2.5);
        add_box(tris, {r * std::cos(a), r * std::sin(a), 0.2}, {rng.range(0.8, 1.6),
                rng.range(0.8, 1.6), 0.4}, rng.range(0.0, kPi), rng.index(4));
    }
}

void normalize_scene(Scene& scene) {
    Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::max());
    Eigen::Vector3d hi = -lo;
    for (const auto& t : scene.triangles) {
        for (const auto* v : {&t.v0, &t.v1, &t.v2}) {
            lo = lo.cwiseMin(*v);
            hi = hi.cwiseMax(*v);
        }
    }
    const Eigen::Vector3d extent = hi - lo;
    const double max_dim = extent.maxCoeff();
    if (!(max_dim > 0.0)) {
        throw std::runtime_error("normalize_scene: degenerate geometry");
    }
    const Eigen::Vector3d shift(0.5 * (lo.x() + hi.x()), 0.5 * (lo.y() + hi.y()), lo.z());
    const double scale = 1.0 / max_dim;
    double max_norm = 0.0;
    for (auto& t : scene.triangles) {
        for (auto* v : {&t.v0, &t.v1, &t.v2}) {
            *v = (*v - shift) * scale;
            max_norm = std::max(max_norm, v->norm());
        }
    }
    scene.bounding_radius = max_norm;
}

// Planar UVs from the dominant normal axis, in normalized world units.
void assign_uvs(Scene& scene) {
    for (auto& t : scene.triangles) {
        const Eigen::Vector3d n = (t.v1 - t.v0).cross(t.v2 - t.v0).cwiseAbs();
        int axis = 0;
        if (n.y() > n.x()) axis = 1;
        if (n.z() > n[axis]) axis = 2;
        const int ua = axis == 0 ? 1 : 0;
        const int va = axis == 2 ? 1 : 2;
        t.uv0 = {t.v0[ua], t.v0[va]};
        t.uv1 = {t.v1[ua], t.v1[va]};
        t.uv2 = {t.v2[ua], t.v2[va]};
    }
}

std::vector<Material> make_materials(SceneRng& rng) {
    const Eigen::Vector3f palette[4] = {
        {0.92f, 0.87f, 0.78f}, {0.80f, 0.72f, 0.65f}, {0.75f, 0.80f, 0.85f}, {0.85f, 0.78f, 0.88f}};
    std::vector<Material> mats(4);
    for (int i = 0; i < 4; ++i) {
        mats[i].tint = palette[i];
        mats[i].checker_scale = float(rng.range(20.0, 30.0));
        mats[i].noise_scale = float(rng.range(50.0, 90.0));
        mats[i].seed = uint32_t(rng.gen());
    }
    return mats;
}

}  // namespace

Eigen::Vector3f sample_albedo(const Material& m, double u, double v) {
    const double cu = u * m.checker_scale, cv = v * m.checker_scale;
    const int iu = int(std::floor(cu)), iv = int(std::floor(cv));
    const float checker = ((iu + iv) & 1) ? 0.85f : 0.35f;
    // Per-cell brightness jitter keeps neighbouring cells distinct.
    const float cell = 0.30f * (lattice(iu, iv, m.seed ^ 0xA5A5A5A5U) - 0.5f);
    const float coarse = value_noise(u * m.noise_scale * 0.25, v * m.noise_scale * 0.25, m.seed);
    const float fine = value_noise(u * m.noise_scale, v * m.noise_scale, m.seed ^ 0x5bd1e995U);
    float lum = 0.55f * checker + 0.55f * cell + 0.30f * (coarse - 0.5f) + 0.25f * (fine - 0.5f) + 0.25f;
    lum = std::clamp(lum, 0.05f, 1.0f);
    return m.tint * lum;
}

Scene make_procedural_scene(const SceneSpec& spec, uint64_t seed) {
    SceneRng rng(seed * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL);
    Scene scene;
    scene.materials = make_materials(rng);
    if (spec.generator == "tower") {
        generate_tower(scene.triangles, rng, spec.size);
    } else if (spec.generator == "textured-box-town") {
        generate_box_town(scene.triangles, rng, spec.size);
    } else if (spec.generator == "ruin-cluster") {
        generate_ruin_cluster(scene.triangles, rng, spec.size);
    } else {
        throw std::invalid_argument("make_procedural_scene: unknown generator '" +
                                    spec.generator + "'");
    }
    normalize_scene(scene);
    assign_uvs(scene);
    return scene;
}

}  // namespace viewplan
