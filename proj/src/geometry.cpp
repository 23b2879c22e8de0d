#include "viewplan/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace viewplan {

namespace {

double wrap_azimuth(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

}  // namespace

SphericalPose::SphericalPose(double radius_m, double azimuth_rad, double elevation_rad)
    : radius(radius_m),
      azimuth(wrap_azimuth(azimuth_rad)),
      elevation(std::clamp(elevation_rad, 0.0, 0.5 * kPi)) {
    if (!(radius_m > 0.0)) {
        throw std::invalid_argument("SphericalPose: radius must be > 0");
    }
}

void CameraIntrinsics::validate() const {
    if (width < 16 || height < 16) {
        throw std::invalid_argument("CameraIntrinsics: width and height must be >= 16");
    }
    if (!(focal_length_mm > 0.0) || !(sensor_width_mm > 0.0)) {
        throw std::invalid_argument("CameraIntrinsics: focal length and sensor width must be > 0");
    }
    if (!(depth_min_m > 0.0) || !(depth_min_m < depth_max_m)) {
        throw std::invalid_argument("CameraIntrinsics: need 0 < depth_min < depth_max");
    }
}

double CameraIntrinsics::fov_horizontal() const {
    return 2.0 * std::atan(sensor_width_mm / (2.0 * focal_length_mm));
}

double CameraIntrinsics::fov_vertical() const {
    return 2.0 * std::atan(sensor_height_mm() / (2.0 * focal_length_mm));
}

RigidTransform RigidTransform::from_rt(const Eigen::Matrix3d& rotation,
                                       const Eigen::Vector3d& translation) {
    RigidTransform t;
    t.mat.setIdentity();
    t.mat.block<3, 3>(0, 0) = rotation;
    t.mat.block<3, 1>(0, 3) = translation;
    return t;
}

RigidTransform RigidTransform::inverse() const {
    const Eigen::Matrix3d rt = rotation().transpose();
    return from_rt(rt, -rt * translation());
}

Eigen::Vector3d RigidTransform::transform_point(const Eigen::Vector3d& p) const {
    return rotation() * p + translation();
}

Eigen::Vector3d RigidTransform::rotate_vector(const Eigen::Vector3d& v) const {
    return rotation() * v;
}

bool RigidTransform::is_rigid(double tol) const {
    const Eigen::Matrix3d r = rotation();
    if (std::abs(r.determinant() - 1.0) > tol) return false;
    if (((r * r.transpose()) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) {
        return false;
    }
    const Eigen::RowVector4d last = mat.row(3);
    return last == Eigen::RowVector4d(0, 0, 0, 1);
}

Eigen::Vector3d to_cartesian(const SphericalPose& pose) {
    const double ce = std::cos(pose.elevation);
    return {pose.radius * ce * std::cos(pose.azimuth),
            pose.radius * ce * std::sin(pose.azimuth),
            pose.radius * std::sin(pose.elevation)};
}

SphericalPose from_cartesian(const Eigen::Vector3d& p) {
    const double r = p.norm();
    if (!(r > 0.0)) {
        throw std::invalid_argument("from_cartesian: zero-length position");
    }
    const double elevation = std::asin(std::clamp(p.z() / r, -1.0, 1.0));
    double azimuth = std::atan2(p.y(), p.x());
    if (std::hypot(p.x(), p.y()) == 0.0) azimuth = 0.0;
    return SphericalPose(r, azimuth, elevation);
}

RigidTransform look_at_transform(const SphericalPose& pose) {
    const Eigen::Vector3d center = to_cartesian(pose);
    const Eigen::Vector3d forward = (-center).normalized();

    Eigen::Vector3d up(0.0, 0.0, 1.0);
    Eigen::Vector3d up_proj = up - forward * up.dot(forward);
    if (up_proj.norm() < 1e-9) {
        // Camera on the +z axis: world up is parallel to the optical
        // axis, fall back to world +x as the up reference.
        up = Eigen::Vector3d(1.0, 0.0, 0.0);
        up_proj = up - forward * up.dot(forward);
    }
    const Eigen::Vector3d down = -up_proj.normalized();
    const Eigen::Vector3d right = down.cross(forward);

    Eigen::Matrix3d rotation;
    rotation.col(0) = right;
    rotation.col(1) = down;
    rotation.col(2) = forward;
    return RigidTransform::from_rt(rotation, center);
}

int region_id(const SphericalPose& pose, int region_count) {
    if (region_count < 1) {
        throw std::invalid_argument("region_id: region count must be >= 1");
    }
    const double bin_width = kTwoPi / region_count;
    int id = static_cast<int>(std::floor(pose.azimuth / bin_width));
    if (id >= region_count) id = region_count - 1;
    if (id < 0) id = 0;
    return id;
}

}  // namespace viewplan
