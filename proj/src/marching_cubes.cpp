#include <algorithm>
#include <cmath>

#include "viewplan/tsdf.hpp"

namespace viewplan::detail {

namespace {

// Corner i sits at ((i&1), (i>>1)&1, (i>>2)&1).
constexpr int kEdgeCorners[12][2] = {
    {0, 1}, {1, 3}, {3, 2}, {2, 0},  // z = 0 ring
    {4, 5}, {5, 7}, {7, 6}, {6, 4},  // z = 1 ring
    {0, 4}, {1, 5}, {3, 7}, {2, 6},  // verticals
};

// Faces as corner quads in cyclic order.
constexpr int kFaceCorners[6][4] = {
    {0, 1, 3, 2},  // z = 0
    {4, 5, 7, 6},  // z = 1
    {0, 1, 5, 4},  // y = 0
    {2, 3, 7, 6},  // y = 1
    {0, 2, 6, 4},  // x = 0
    {1, 3, 7, 5},  // x = 1
};

int edge_between(int a, int b) {
    for (int e = 0; e < 12; ++e) {
        if ((kEdgeCorners[e][0] == a && kEdgeCorners[e][1] == b) ||
            (kEdgeCorners[e][0] == b && kEdgeCorners[e][1] == a)) {
            return e;
        }
    }
    return -1;
}

Eigen::Vector3d corner_pos(int c) {
    return {double(c & 1), double((c >> 1) & 1), double((c >> 2) & 1)};
}

McCase build_case(int config) {
    const auto inside = [&](int corner) { return (config >> corner & 1) != 0; };

    // Cut edges and their two adjacent faces.
    int edge_faces[12][2];
    for (int e = 0; e < 12; ++e) edge_faces[e][0] = edge_faces[e][1] = -1;
    for (int f = 0; f < 6; ++f) {
        for (int i = 0; i < 4; ++i) {
            const int e = edge_between(kFaceCorners[f][i], kFaceCorners[f][(i + 1) % 4]);
            if (edge_faces[e][0] < 0) {
                edge_faces[e][0] = f;
            } else {
                edge_faces[e][1] = f;
            }
        }
    }
    const auto is_cut = [&](int e) {
        return inside(kEdgeCorners[e][0]) != inside(kEdgeCorners[e][1]);
    };

    // Pair cut edges within a face. Two cut edges pair directly; with
    // four (the ambiguous diagonal case) each pairs across its inside
    // corner so the surface separates the inside corners. The rule
    // only depends on the face's corner signs, so neighbouring cells
    // agree and meshes stay crack-free.
    const auto partner_on_face = [&](int f, int e) {
        int cut[4], n = 0;
        for (int i = 0; i < 4; ++i) {
            const int fe = edge_between(kFaceCorners[f][i], kFaceCorners[f][(i + 1) % 4]);
            if (is_cut(fe)) cut[n++] = fe;
        }
        if (n == 2) return cut[0] == e ? cut[1] : cut[0];
        // n == 4: partner shares this edge's inside corner.
        const int inside_corner =
            inside(kEdgeCorners[e][0]) ? kEdgeCorners[e][0] : kEdgeCorners[e][1];
        for (int i = 0; i < n; ++i) {
            if (cut[i] == e) continue;
            if (kEdgeCorners[cut[i]][0] == inside_corner ||
                kEdgeCorners[cut[i]][1] == inside_corner) {
                return cut[i];
            }
        }
        return -1;
    };

    McCase result;
    bool used[12] = {};
    for (int start = 0; start < 12; ++start) {
        if (!is_cut(start) || used[start]) continue;

        // Walk the loop: pair inside the current face, hop to the
        // partner's other face.
        std::vector<int> loop;
        int edge = start;
        int face = edge_faces[start][0];
        do {
            used[edge] = true;
            loop.push_back(edge);
            const int next = partner_on_face(face, edge);
            face = edge_faces[next][0] == face ? edge_faces[next][1] : edge_faces[next][0];
            edge = next;
        } while (edge != start);

        // Orient the loop so its normal points toward the outside
        // (positive tsdf) region around the loop's inside corners.
        std::vector<Eigen::Vector3d> mid(loop.size());
        Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
        for (size_t i = 0; i < loop.size(); ++i) {
            mid[i] = 0.5 * (corner_pos(kEdgeCorners[loop[i]][0]) +
                            corner_pos(kEdgeCorners[loop[i]][1]));
            centroid += mid[i];
        }
        centroid /= double(loop.size());

        Eigen::Vector3d inside_centroid = Eigen::Vector3d::Zero();
        int inside_n = 0;
        for (const int e : loop) {
            const int c = inside(kEdgeCorners[e][0]) ? kEdgeCorners[e][0] : kEdgeCorners[e][1];
            inside_centroid += corner_pos(c);
            ++inside_n;
        }
        inside_centroid /= double(inside_n);

        Eigen::Vector3d normal = Eigen::Vector3d::Zero();  // Newell
        for (size_t i = 0; i < loop.size(); ++i) {
            const Eigen::Vector3d& a = mid[i];
            const Eigen::Vector3d& b = mid[(i + 1) % loop.size()];
            normal += a.cross(b);
        }
        if (normal.dot(centroid - inside_centroid) < 0.0) {
            std::reverse(loop.begin(), loop.end());
        }

        for (size_t i = 1; i + 1 < loop.size(); ++i) {
            result.triangles.push_back({loop[0], loop[i], loop[i + 1]});
        }
    }
    return result;
}

}  // namespace

const std::array<McCase, 256>& marching_cubes_table() {
    static const std::array<McCase, 256> table = [] {
        std::array<McCase, 256> t;
        for (int config = 0; config < 256; ++config) t[config] = build_case(config);
        return t;
    }();
    return table;
}

}  // namespace viewplan::detail
