#pragma once

#include <cstdint>
#include <vector>

#include "nodkit/geometry.hpp"

namespace nodkit {

/// Storage datatypes supported by the file formats.
enum class VoxelType : std::uint8_t { i16, f32, u8 };

inline const char* voxel_type_name(VoxelType t) {
    switch (t) {
        case VoxelType::i16: return "i16";
        case VoxelType::f32: return "f32";
        case VoxelType::u8: return "u8";
    }
    return "?";
}

/// Reserved label codes. VISTA-style organ maps use 1..132 with lung lobes at
/// 28..32; BODY/NODULE sit above that range.
namespace labels {
inline constexpr std::uint32_t BACKGROUND = 0;
inline constexpr std::uint32_t LOBE_MIN = 28;
inline constexpr std::uint32_t LOBE_MAX = 32;
inline constexpr std::uint32_t BODY = 200;
inline constexpr std::uint32_t NODULE = 201;
}  // namespace labels

/// Dense scalar volume (HU or unitless). Values live in float storage; the
/// source datatype is kept so writes round-trip bit-exactly.
struct Volume {
    VolumeMeta meta;
    std::vector<float> data;
    VoxelType stored_type = VoxelType::f32;

    Volume() = default;
    Volume(VolumeMeta m, float fill, VoxelType t = VoxelType::f32)
        : meta(m), data(m.voxel_count(), fill), stored_type(t) {}

    float at(int x, int y, int z) const { return data[meta.index(x, y, z)]; }
    float& at(int x, int y, int z) { return data[meta.index(x, y, z)]; }
};

/// Dense integer label grid sharing Volume geometry.
struct LabelMap {
    VolumeMeta meta;
    std::vector<std::uint32_t> labels;

    LabelMap() = default;
    LabelMap(VolumeMeta m, std::uint32_t fill = 0) : meta(m), labels(m.voxel_count(), fill) {}

    std::uint32_t at(int x, int y, int z) const { return labels[meta.index(x, y, z)]; }
    std::uint32_t& at(int x, int y, int z) { return labels[meta.index(x, y, z)]; }
};

/// Dense binary mask sharing Volume geometry. uint8_t storage, 0 or 1.
struct BinaryMask {
    VolumeMeta meta;
    std::vector<std::uint8_t> bits;

    BinaryMask() = default;
    explicit BinaryMask(VolumeMeta m, bool fill = false)
        : meta(m), bits(m.voxel_count(), fill ? 1 : 0) {}

    bool at(int x, int y, int z) const { return bits[meta.index(x, y, z)] != 0; }
    void set(int x, int y, int z, bool v) { bits[meta.index(x, y, z)] = v ? 1 : 0; }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto b : bits) n += b != 0;
        return n;
    }
    bool empty_mask() const { return count() == 0; }
};

inline BinaryMask mask_from_labels(const LabelMap& lm, std::uint32_t label) {
    BinaryMask m(lm.meta);
    for (std::size_t i = 0; i < lm.labels.size(); ++i) m.bits[i] = lm.labels[i] == label;
    return m;
}

inline LabelMap labels_from_mask(const BinaryMask& m, std::uint32_t label = 1) {
    LabelMap lm(m.meta);
    for (std::size_t i = 0; i < m.bits.size(); ++i) lm.labels[i] = m.bits[i] ? label : 0;
    return lm;
}

}  // namespace nodkit
