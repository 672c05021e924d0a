#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

#include "nodkit/error.hpp"
#include "nodkit/volio.hpp"

namespace nodkit::io {

namespace detail {

struct Nifti1Header {
    std::int32_t sizeof_hdr;
    char data_type[10];
    char db_name[18];
    std::int32_t extents;
    std::int16_t session_error;
    char regular;
    char dim_info;
    std::int16_t dim[8];
    float intent_p1, intent_p2, intent_p3;
    std::int16_t intent_code;
    std::int16_t datatype;
    std::int16_t bitpix;
    std::int16_t slice_start;
    float pixdim[8];
    float vox_offset;
    float scl_slope;
    float scl_inter;
    std::int16_t slice_end;
    char slice_code;
    char xyzt_units;
    float cal_max, cal_min;
    float slice_duration;
    float toffset;
    std::int32_t glmax, glmin;
    char descrip[80];
    char aux_file[24];
    std::int16_t qform_code;
    std::int16_t sform_code;
    float quatern_b, quatern_c, quatern_d;
    float qoffset_x, qoffset_y, qoffset_z;
    float srow_x[4];
    float srow_y[4];
    float srow_z[4];
    char intent_name[16];
    char magic[4];
};
static_assert(sizeof(Nifti1Header) == 348, "NIfTI-1 header must pack to 348 bytes");

constexpr std::int16_t kDtUint8 = 2;
constexpr std::int16_t kDtInt16 = 4;
constexpr std::int16_t kDtFloat32 = 16;

std::int16_t datatype_code(VoxelType t) {
    switch (t) {
        case VoxelType::u8: return kDtUint8;
        case VoxelType::i16: return kDtInt16;
        case VoxelType::f32: return kDtFloat32;
    }
    return 0;
}

int bytes_per_voxel(VoxelType t) { return t == VoxelType::f32 ? 4 : t == VoxelType::i16 ? 2 : 1; }

VoxelType voxel_type_from_code(std::int16_t code, const std::filesystem::path& path) {
    switch (code) {
        case kDtUint8: return VoxelType::u8;
        case kDtInt16: return VoxelType::i16;
        case kDtFloat32: return VoxelType::f32;
        default:
            throw FormatError(path.string() + ": unsupported NIfTI datatype " +
                              std::to_string(code));
    }
}

void encode_payload(const Volume& v, std::vector<char>& out, const std::filesystem::path& path) {
    const std::size_t n = v.data.size();
    switch (v.stored_type) {
        case VoxelType::f32: {
            out.resize(n * 4);
            std::memcpy(out.data(), v.data.data(), out.size());
            break;
        }
        case VoxelType::i16: {
            out.resize(n * 2);
            auto* p = reinterpret_cast<std::int16_t*>(out.data());
            for (std::size_t i = 0; i < n; ++i) {
                const float x = v.data[i];
                if (x != std::floor(x) || x < -32768.0f || x > 32767.0f) {
                    throw FormatError(path.string() + ": value " + std::to_string(x) +
                                      " not representable as i16");
                }
                p[i] = static_cast<std::int16_t>(x);
            }
            break;
        }
        case VoxelType::u8: {
            out.resize(n);
            auto* p = reinterpret_cast<std::uint8_t*>(out.data());
            for (std::size_t i = 0; i < n; ++i) {
                const float x = v.data[i];
                if (x != std::floor(x) || x < 0.0f || x > 255.0f) {
                    throw FormatError(path.string() + ": value " + std::to_string(x) +
                                      " not representable as u8");
                }
                p[i] = static_cast<std::uint8_t>(x);
            }
            break;
        }
    }
}

void decode_payload(const std::vector<char>& raw, VoxelType t, std::vector<float>& out) {
    const int bpv = bytes_per_voxel(t);
    const std::size_t n = raw.size() / static_cast<std::size_t>(bpv);
    out.resize(n);
    switch (t) {
        case VoxelType::f32: std::memcpy(out.data(), raw.data(), raw.size()); break;
        case VoxelType::i16: {
            const auto* p = reinterpret_cast<const std::int16_t*>(raw.data());
            for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<float>(p[i]);
            break;
        }
        case VoxelType::u8: {
            const auto* p = reinterpret_cast<const std::uint8_t*>(raw.data());
            for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<float>(p[i]);
            break;
        }
    }
}

Volume read_nifti(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open for reading");

    Nifti1Header hdr{};
    if (!in.read(reinterpret_cast<char*>(&hdr), sizeof(hdr))) {
        throw IoError(path.string() + ": truncated NIfTI header");
    }
    if (hdr.sizeof_hdr != 348) {
        throw FormatError(path.string() + ": sizeof_hdr != 348 (byte-swapped or not NIfTI-1)");
    }
    if (std::memcmp(hdr.magic, "n+1\0", 4) != 0) {
        throw FormatError(path.string() + ": bad magic, expected \"n+1\"");
    }
    if (hdr.dim[0] < 1 || hdr.dim[0] > 3) {
        throw FormatError(path.string() + ": only 1-3 dimensional volumes supported, dim[0]=" +
                          std::to_string(hdr.dim[0]));
    }

    Volume v;
    v.stored_type = voxel_type_from_code(hdr.datatype, path);
    for (int i = 0; i < 3; ++i) {
        const std::int16_t d = i < hdr.dim[0] ? hdr.dim[i + 1] : 1;
        if (d < 1) throw FormatError(path.string() + ": nonpositive dim");
        v.meta.dims[i] = d;
        const float s = i < hdr.dim[0] ? hdr.pixdim[i + 1] : 1.0f;
        if (!(s > 0.0f)) throw FormatError(path.string() + ": nonpositive pixdim");
        v.meta.spacing[i] = s;
    }

    if (hdr.sform_code > 0) {
        const float* rows[3] = {hdr.srow_x, hdr.srow_y, hdr.srow_z};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                if (r != c && rows[r][c] != 0.0f) {
                    throw FormatError(path.string() +
                                      ": sform has rotation components (axis-aligned only)");
                }
            }
            if (!(rows[r][r] > 0.0f)) {
                throw FormatError(path.string() + ": sform diagonal must be positive");
            }
            v.meta.origin[r] = rows[r][3];
        }
    } else {
        if (hdr.qform_code > 0 &&
            (hdr.quatern_b != 0.0f || hdr.quatern_c != 0.0f || hdr.quatern_d != 0.0f)) {
            throw FormatError(path.string() +
                              ": qform has rotation components (axis-aligned only)");
        }
        v.meta.origin = {hdr.qoffset_x, hdr.qoffset_y, hdr.qoffset_z};
    }

    if (hdr.vox_offset < 352.0f || hdr.vox_offset != std::floor(hdr.vox_offset)) {
        throw FormatError(path.string() + ": invalid vox_offset");
    }

    const std::size_t n = v.meta.voxel_count();
    const std::size_t payload = n * static_cast<std::size_t>(bytes_per_voxel(v.stored_type));
    std::vector<char> raw(payload);
    in.seekg(static_cast<std::streamoff>(hdr.vox_offset), std::ios::beg);
    if (!in.read(raw.data(), static_cast<std::streamsize>(payload))) {
        throw IoError(path.string() + ": truncated NIfTI payload");
    }
    decode_payload(raw, v.stored_type, v.data);

    if (hdr.scl_slope != 0.0f && !(hdr.scl_slope == 1.0f && hdr.scl_inter == 0.0f)) {
        for (auto& x : v.data) x = hdr.scl_slope * x + hdr.scl_inter;
        v.stored_type = VoxelType::f32;
    }
    return v;
}

void write_nifti(const Volume& v, const std::filesystem::path& path) {
    if (!v.meta.valid() || v.data.size() != v.meta.voxel_count()) {
        throw DomainError(path.string() + ": invalid volume geometry");
    }
    Nifti1Header hdr{};
    hdr.sizeof_hdr = 348;
    hdr.regular = 'r';
    hdr.dim[0] = 3;
    for (int i = 0; i < 3; ++i) hdr.dim[i + 1] = static_cast<std::int16_t>(v.meta.dims[i]);
    for (int i = 4; i < 8; ++i) hdr.dim[i] = 1;
    hdr.datatype = datatype_code(v.stored_type);
    hdr.bitpix = static_cast<std::int16_t>(8 * bytes_per_voxel(v.stored_type));
    hdr.pixdim[0] = 1.0f;
    for (int i = 0; i < 3; ++i) hdr.pixdim[i + 1] = static_cast<float>(v.meta.spacing[i]);
    hdr.vox_offset = 352.0f;
    hdr.scl_slope = 0.0f;
    hdr.scl_inter = 0.0f;
    hdr.qform_code = 0;
    hdr.sform_code = 1;
    hdr.qoffset_x = static_cast<float>(v.meta.origin[0]);
    hdr.qoffset_y = static_cast<float>(v.meta.origin[1]);
    hdr.qoffset_z = static_cast<float>(v.meta.origin[2]);
    hdr.srow_x[0] = static_cast<float>(v.meta.spacing[0]);
    hdr.srow_y[1] = static_cast<float>(v.meta.spacing[1]);
    hdr.srow_z[2] = static_cast<float>(v.meta.spacing[2]);
    hdr.srow_x[3] = static_cast<float>(v.meta.origin[0]);
    hdr.srow_y[3] = static_cast<float>(v.meta.origin[1]);
    hdr.srow_z[3] = static_cast<float>(v.meta.origin[2]);
    std::memcpy(hdr.magic, "n+1\0", 4);

    std::vector<char> payload;
    encode_payload(v, payload, path);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    const char pad[4] = {0, 0, 0, 0};
    out.write(reinterpret_cast<const char*>(&hdr), sizeof(hdr));
    out.write(pad, 4);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace detail

}  // namespace nodkit::io
