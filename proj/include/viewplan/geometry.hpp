#pragma once

#include <Eigen/Dense>

namespace viewplan {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Camera location on the view hemisphere around the scene origin.
/// Azimuth is wrapped into [0, 2*pi) and elevation (angle above the
/// XY-plane) clamped to [0, pi/2] at construction; radius must be > 0.
struct SphericalPose {
    double radius = 1.0;     // meters
    double azimuth = 0.0;    // radians, [0, 2*pi)
    double elevation = 0.0;  // radians, [0, pi/2]

    SphericalPose() = default;
    SphericalPose(double radius_m, double azimuth_rad, double elevation_rad);
};

struct CameraIntrinsics {
    int width = 512;    // pixels
    int height = 512;   // pixels
    double focal_length_mm = 35.0;
    double sensor_width_mm = 32.0;
    double depth_min_m = 0.05;
    double depth_max_m = 100.0;

    void validate() const;  // throws std::invalid_argument on bad values

    // Square pixels: fx == fy under the width-referenced sensor model.
    double fx() const { return focal_length_mm / sensor_width_mm * width; }
    double fy() const { return fx(); }
    double cx() const { return 0.5 * width; }
    double cy() const { return 0.5 * height; }
    double sensor_height_mm() const { return sensor_width_mm * height / width; }
    double fov_horizontal() const;  // radians
    double fov_vertical() const;    // radians
};

/// 4x4 homogeneous transform with an orthonormal rotation block and
/// (0,0,0,1) last row. Convention: maps camera-frame points to world
/// frame, camera looks along +z with +x right and +y down in the image.
struct RigidTransform {
    Eigen::Matrix4d mat = Eigen::Matrix4d::Identity();

    static RigidTransform from_rt(const Eigen::Matrix3d& rotation,
                                  const Eigen::Vector3d& translation);

    Eigen::Matrix3d rotation() const { return mat.block<3, 3>(0, 0); }
    Eigen::Vector3d translation() const { return mat.block<3, 1>(0, 3); }
    RigidTransform inverse() const;
    Eigen::Vector3d transform_point(const Eigen::Vector3d& p) const;
    Eigen::Vector3d rotate_vector(const Eigen::Vector3d& v) const;
    bool is_rigid(double tol = 1e-6) const;
};

/// x = R cos(el) cos(az), y = R cos(el) sin(az), z = R sin(el).
Eigen::Vector3d to_cartesian(const SphericalPose& pose);

/// Inverse of to_cartesian; azimuth is degenerate at the zenith and
/// comes back as 0 there.
SphericalPose from_cartesian(const Eigen::Vector3d& p);

/// Camera-to-world transform placing the camera at to_cartesian(pose)
/// with the optical axis through the origin. Image up follows world +z
/// projected into the image plane; on the +z axis the projection
/// degenerates and the up reference falls back to world +x.
RigidTransform look_at_transform(const SphericalPose& pose);

/// Equal-width azimuth bin of the pose: floor(azimuth / (2*pi/N)),
/// clamped to N-1 against floating-point spill at the wrap point.
int region_id(const SphericalPose& pose, int region_count);

}  // namespace viewplan
