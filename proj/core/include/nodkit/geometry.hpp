#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "nodkit/error.hpp"

namespace nodkit {

using Vec3i = std::array<int, 3>;
using Vec3d = std::array<double, 3>;

/// Grid geometry of a volume: dims in voxels, spacing in mm/voxel, origin =
/// world position (mm) of the center of voxel (0,0,0). Axes are axis-aligned.
struct VolumeMeta {
    Vec3i dims{0, 0, 0};
    Vec3d spacing{1.0, 1.0, 1.0};
    Vec3d origin{0.0, 0.0, 0.0};

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
               static_cast<std::size_t>(dims[2]);
    }

    bool valid() const {
        return dims[0] >= 1 && dims[1] >= 1 && dims[2] >= 1 && spacing[0] > 0.0 &&
               spacing[1] > 0.0 && spacing[2] > 0.0;
    }

    /// Linear index with x fastest, then y, then z.
    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(z));
    }

    bool in_bounds(int x, int y, int z) const {
        return x >= 0 && x < dims[0] && y >= 0 && y < dims[1] && z >= 0 && z < dims[2];
    }
    bool in_bounds(const Vec3i& v) const { return in_bounds(v[0], v[1], v[2]); }

    Vec3i unravel(std::size_t idx) const {
        const auto nx = static_cast<std::size_t>(dims[0]);
        const auto ny = static_cast<std::size_t>(dims[1]);
        return {static_cast<int>(idx % nx), static_cast<int>((idx / nx) % ny),
                static_cast<int>(idx / (nx * ny))};
    }

    bool same_grid(const VolumeMeta& o) const {
        return dims == o.dims && spacing == o.spacing && origin == o.origin;
    }
};

inline void require_same_grid(const VolumeMeta& a, const VolumeMeta& b, const char* what) {
    if (!a.same_grid(b)) throw DomainError(std::string(what) + ": geometry mismatch");
}

/// World (mm) -> voxel index, rounding half away from zero per axis.
/// Results are unclamped; callers clip to bounds where needed.
inline Vec3i world_to_voxel(const VolumeMeta& meta, const Vec3d& point_mm) {
    Vec3i out{};
    for (int i = 0; i < 3; ++i) {
        out[i] = static_cast<int>(std::llround((point_mm[i] - meta.origin[i]) / meta.spacing[i]));
    }
    return out;
}

/// Voxel index -> world position (mm) of the voxel center.
inline Vec3d voxel_to_world(const VolumeMeta& meta, const Vec3i& idx) {
    Vec3d out{};
    for (int i = 0; i < 3; ++i) {
        out[i] = meta.origin[i] + static_cast<double>(idx[i]) * meta.spacing[i];
    }
    return out;
}

}  // namespace nodkit
