#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <vector>

namespace targetsearch {

using Vec3 = Eigen::Vector3d;

/// Axis-aligned box world. In 2D mode the third axis is degenerate
/// (lower.z == upper.z) and containment checks ignore it.
struct Environment {
    Vec3 lower{0.0, 0.0, 0.0};
    Vec3 upper{1.0, 1.0, 1.0};
    int dimensionality = 3;

    static Environment box3(const Vec3& lower, const Vec3& upper);
    static Environment box2(const Eigen::Vector2d& lower, const Eigen::Vector2d& upper,
                            double plane_z = 0.0);

    [[nodiscard]] bool contains(const Vec3& p) const;
    [[nodiscard]] Vec3 clamp(const Vec3& p) const;
    [[nodiscard]] Vec3 extent() const { return upper - lower; }
    [[nodiscard]] Vec3 center() const { return 0.5 * (lower + upper); }
};

/// Regular grid of scalars with multilinear (bilinear in 2D) interpolation.
/// Node (i,j,l) sits at origin + (i,j,l) * spacing. Queries outside the grid
/// extent are clamped to the boundary.
class ScalarGrid {
public:
    ScalarGrid(const Vec3& origin, const Vec3& spacing, std::array<int, 3> dims,
               double initial_value = 0.0);

    /// Grid whose nodes exactly cover the environment box with spacing no
    /// coarser than max_spacing per active axis.
    static ScalarGrid cover(const Environment& env, double max_spacing,
                            double initial_value = 0.0);

    [[nodiscard]] double sample(const Vec3& p) const;

    double& at(int i, int j, int l) { return values_[index(i, j, l)]; }
    [[nodiscard]] double at(int i, int j, int l) const { return values_[index(i, j, l)]; }

    [[nodiscard]] Vec3 node_position(int i, int j, int l) const;
    [[nodiscard]] const std::array<int, 3>& dims() const { return dims_; }
    [[nodiscard]] std::size_t node_count() const { return values_.size(); }
    [[nodiscard]] const Vec3& origin() const { return origin_; }
    [[nodiscard]] const Vec3& spacing() const { return spacing_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

private:
    [[nodiscard]] std::size_t index(int i, int j, int l) const;

    Vec3 origin_;
    Vec3 spacing_;
    std::array<int, 3> dims_;
    std::vector<double> values_;
};

}  // namespace targetsearch
