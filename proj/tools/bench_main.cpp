// Compares the OpenMP kernels against their serial references and
// verifies they agree bit-for-bit while timing both.

#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "viewplan/kmeans.hpp"
#include "viewplan/metrics.hpp"
#include "viewplan/reference.hpp"
#include "viewplan/render.hpp"
#include "viewplan/scene.hpp"
#include "viewplan/sift.hpp"
#include "viewplan/tsdf.hpp"

using namespace viewplan;

namespace {

template <typename F>
double time_best_of(int repeats, F&& fn) {
    double best = 1e300;
    for (int i = 0; i < repeats; ++i) {
        const double t0 = omp_get_wtime();
        fn();
        best = std::min(best, omp_get_wtime() - t0);
    }
    return best * 1000.0;
}

void report(const char* kernel, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-22s %10.2f ms %10.2f ms %8.2fx   %s\n", kernel, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "bit-identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    const Scene scene = make_procedural_scene({"tower", 0}, 1);
    const Raycaster caster(scene);
    const CameraIntrinsics intrinsics;
    const SphericalPose pose(2.0, 0.7, 0.5);

    RenderOutput parallel_render, serial_render;
    const double render_par =
        time_best_of(3, [&] { parallel_render = render(caster, pose, intrinsics); });
    const double render_ser =
        time_best_of(3, [&] { serial_render = ref::render_serial(caster, pose, intrinsics); });
    report("render 512x512", render_ser, render_par,
           parallel_render.rgb.data == serial_render.rgb.data &&
               parallel_render.depth.data == serial_render.depth.data);

    const detail::FloatImage gray = detail::to_float(to_grayscale(parallel_render.rgb));
    detail::FloatImage blur_par, blur_ser;
    const double blur_p = time_best_of(5, [&] { blur_par = detail::gaussian_blur(gray, 2.0f, true); });
    const double blur_s = time_best_of(5, [&] { blur_ser = ref::gaussian_blur_serial(gray, 2.0f); });
    report("gaussian blur 512x512", blur_s, blur_p, blur_par.data == blur_ser.data);

    {
        TsdfVolume vol_par = TsdfVolume::for_scene(scene.bounding_radius, 128);
        TsdfVolume vol_ser = TsdfVolume::for_scene(scene.bounding_radius, 128);
        const RigidTransform c2w = look_at_transform(pose);
        const double tsdf_p = time_best_of(3, [&] {
            vol_par.integrate(parallel_render.rgb, parallel_render.depth, intrinsics, c2w);
        });
        const double tsdf_s = time_best_of(3, [&] {
            ref::integrate_serial(vol_ser, parallel_render.rgb, parallel_render.depth, intrinsics,
                                  c2w);
        });
        bool same = true;
        for (int z = 0; z < 128 && same; ++z) {
            for (int y = 0; y < 128 && same; ++y) {
                for (int x = 0; x < 128; ++x) {
                    if (vol_par.tsdf_at(x, y, z) != vol_ser.tsdf_at(x, y, z) ||
                        vol_par.weight_at(x, y, z) != vol_ser.weight_at(x, y, z)) {
                        same = false;
                        break;
                    }
                }
            }
        }
        report("tsdf integrate 128^3", tsdf_s, tsdf_p, same);
    }

    {
        std::mt19937_64 gen(7);
        const int count = 4000, dim = 128;
        std::vector<float> points(size_t(count) * dim);
        for (auto& v : points) v = float(gen() >> 40) / float(1 << 24);
        KmeansResult km_par, km_ser;
        const double km_p =
            time_best_of(3, [&] { km_par = kmeans(points, count, dim, 30, 1, 25); });
        const int saved = omp_get_max_threads();
        omp_set_num_threads(1);
        const double km_s =
            time_best_of(3, [&] { km_ser = kmeans(points, count, dim, 30, 1, 25); });
        omp_set_num_threads(saved);
        report("kmeans 4000x128 k=30", km_s, km_p,
               km_par.centers == km_ser.centers && km_par.assignment == km_ser.assignment);
    }

    {
        std::mt19937_64 gen(11);
        auto uniform = [&] { return double(gen() >> 11) * 0x1.0p-53; };
        PointCloud a, b;
        for (int i = 0; i < 20000; ++i) {
            a.points.emplace_back(uniform(), uniform(), uniform());
            b.points.emplace_back(uniform(), uniform(), uniform());
        }
        double grid_value = 0.0, brute_value = 0.0;
        const double nn_p = time_best_of(3, [&] { grid_value = chamfer(a, b); });
        // The O(n^2) oracle is the serial reference here.
        PointCloud a_small{{a.points.begin(), a.points.begin() + 2000}, {}};
        PointCloud b_small{{b.points.begin(), b.points.begin() + 2000}, {}};
        double grid_small = 0.0;
        const double nn_small_p = time_best_of(3, [&] { grid_small = chamfer(a_small, b_small); });
        const double nn_s =
            time_best_of(1, [&] { brute_value = ref::chamfer_bruteforce(a_small, b_small); });
        (void)nn_p;
        (void)grid_value;
        report("chamfer 2000 pts", nn_s, nn_small_p, grid_small == brute_value);
    }

    return 0;
}
