#include "nodkit/volio.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nodkit/error.hpp"

namespace nodkit::io {

namespace detail {
Volume read_nifti(const std::filesystem::path& path);
void write_nifti(const Volume& v, const std::filesystem::path& path);
}  // namespace detail

namespace {

bool has_extension(const std::filesystem::path& p, const char* ext) {
    auto e = p.extension().string();
    std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
    return e == ext;
}

std::filesystem::path sidecar_path(const std::filesystem::path& raw) {
    std::filesystem::path p = raw;
    p.replace_extension(".meta.json");
    return p;
}

VoxelType parse_dtype(const std::string& s, const std::filesystem::path& path) {
    if (s == "i16") return VoxelType::i16;
    if (s == "f32") return VoxelType::f32;
    if (s == "u8") return VoxelType::u8;
    throw FormatError(path.string() + ": unknown dtype \"" + s + "\"");
}

int bytes_per_voxel(VoxelType t) { return t == VoxelType::f32 ? 4 : t == VoxelType::i16 ? 2 : 1; }

Volume read_raw_sidecar(const std::filesystem::path& path) {
    const auto meta_path = sidecar_path(path);
    std::ifstream meta_in(meta_path);
    if (!meta_in) throw IoError(meta_path.string() + ": cannot open sidecar");
    nlohmann::json j;
    try {
        meta_in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(meta_path.string() + ": invalid JSON: " + e.what());
    }

    Volume v;
    try {
        for (int i = 0; i < 3; ++i) {
            v.meta.dims[i] = j.at("dims").at(i).get<int>();
            v.meta.spacing[i] = j.at("spacing").at(i).get<double>();
            v.meta.origin[i] = j.at("origin").at(i).get<double>();
        }
        v.stored_type = parse_dtype(j.at("dtype").get<std::string>(), meta_path);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(meta_path.string() + ": missing or malformed field: " + e.what());
    }
    if (!v.meta.valid()) throw FormatError(meta_path.string() + ": invalid dims/spacing");

    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string() + ": cannot open for reading");
    const std::size_t n = v.meta.voxel_count();
    const std::size_t payload = n * static_cast<std::size_t>(bytes_per_voxel(v.stored_type));
    std::vector<char> raw(payload);
    if (!in.read(raw.data(), static_cast<std::streamsize>(payload))) {
        throw IoError(path.string() + ": truncated payload");
    }

    v.data.resize(n);
    switch (v.stored_type) {
        case VoxelType::f32: std::memcpy(v.data.data(), raw.data(), raw.size()); break;
        case VoxelType::i16: {
            const auto* p = reinterpret_cast<const std::int16_t*>(raw.data());
            for (std::size_t i = 0; i < n; ++i) v.data[i] = static_cast<float>(p[i]);
            break;
        }
        case VoxelType::u8: {
            const auto* p = reinterpret_cast<const std::uint8_t*>(raw.data());
            for (std::size_t i = 0; i < n; ++i) v.data[i] = static_cast<float>(p[i]);
            break;
        }
    }
    return v;
}

void write_raw_sidecar(const Volume& v, const std::filesystem::path& path) {
    nlohmann::json j;
    j["dims"] = v.meta.dims;
    j["spacing"] = v.meta.spacing;
    j["origin"] = v.meta.origin;
    j["dtype"] = voxel_type_name(v.stored_type);

    const auto meta_path = sidecar_path(path);
    std::ofstream meta_out(meta_path, std::ios::trunc);
    if (!meta_out) throw IoError(meta_path.string() + ": cannot open for writing");
    meta_out << j.dump(2) << "\n";
    if (!meta_out) throw IoError(meta_path.string() + ": write failed");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string() + ": cannot open for writing");
    const std::size_t n = v.data.size();
    switch (v.stored_type) {
        case VoxelType::f32:
            out.write(reinterpret_cast<const char*>(v.data.data()),
                      static_cast<std::streamsize>(n * 4));
            break;
        case VoxelType::i16: {
            std::vector<std::int16_t> buf(n);
            for (std::size_t i = 0; i < n; ++i) {
                const float x = v.data[i];
                if (x != std::floor(x) || x < -32768.0f || x > 32767.0f) {
                    throw FormatError(path.string() + ": value not representable as i16");
                }
                buf[i] = static_cast<std::int16_t>(x);
            }
            out.write(reinterpret_cast<const char*>(buf.data()),
                      static_cast<std::streamsize>(n * 2));
            break;
        }
        case VoxelType::u8: {
            std::vector<std::uint8_t> buf(n);
            for (std::size_t i = 0; i < n; ++i) {
                const float x = v.data[i];
                if (x != std::floor(x) || x < 0.0f || x > 255.0f) {
                    throw FormatError(path.string() + ": value not representable as u8");
                }
                buf[i] = static_cast<std::uint8_t>(x);
            }
            out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(n));
            break;
        }
    }
    if (!out) throw IoError(path.string() + ": write failed");
}

}  // namespace

Volume read_volume(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError(path.string() + ": no such file");
    if (has_extension(path, ".nii")) return detail::read_nifti(path);
    if (has_extension(path, ".raw")) return read_raw_sidecar(path);
    throw FormatError(path.string() + ": unknown volume extension (.nii or .raw expected)");
}

void write_volume(const Volume& v, const std::filesystem::path& path) {
    if (has_extension(path, ".nii")) return detail::write_nifti(v, path);
    if (has_extension(path, ".raw")) return write_raw_sidecar(v, path);
    throw FormatError(path.string() + ": unknown volume extension (.nii or .raw expected)");
}

LabelMap read_labelmap(const std::filesystem::path& path) {
    const Volume v = read_volume(path);
    if (v.stored_type == VoxelType::f32) {
        throw FormatError(path.string() + ": float payload is not a label map");
    }
    LabelMap lm;
    lm.meta = v.meta;
    lm.labels.resize(v.data.size());
    for (std::size_t i = 0; i < v.data.size(); ++i) {
        const float x = v.data[i];
        if (x < 0.0f) throw FormatError(path.string() + ": negative label value");
        lm.labels[i] = static_cast<std::uint32_t>(x);
    }
    return lm;
}

void write_labelmap(const LabelMap& lm, const std::filesystem::path& path) {
    std::uint32_t max_label = 0;
    for (auto l : lm.labels) max_label = std::max(max_label, l);

    Volume v;
    v.meta = lm.meta;
    if (max_label <= 255) {
        v.stored_type = VoxelType::u8;
    } else if (max_label <= 32767) {
        v.stored_type = VoxelType::i16;
    } else {
        throw FormatError(path.string() + ": label " + std::to_string(max_label) +
                          " exceeds supported integer datatypes");
    }
    v.data.resize(lm.labels.size());
    for (std::size_t i = 0; i < lm.labels.size(); ++i) {
        v.data[i] = static_cast<float>(lm.labels[i]);
    }
    write_volume(v, path);
}

namespace {

std::string trim(std::string s) {
    const auto is_space = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && is_space(s.back())) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && is_space(s[start])) ++start;
    return s.substr(start);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(trim(cur));
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // data rows only

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return static_cast<int>(i);
        }
        return -1;
    }
};

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string() + ": cannot open for reading");
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            t.header = split_csv_line(line);
            first = false;
        } else {
            t.rows.push_back(split_csv_line(line));
        }
    }
    if (first) throw FormatError(path.string() + ": empty file, header expected");
    return t;
}

int require_column(const CsvTable& t, const std::string& name,
                   const std::filesystem::path& path) {
    const int c = t.column(name);
    if (c < 0) throw FormatError(path.string() + ": missing required column \"" + name + "\"");
    return c;
}

[[noreturn]] void row_error(const std::filesystem::path& path, std::size_t data_row,
                            const std::string& why) {
    throw FormatError(path.string() + ": row " + std::to_string(data_row) + ": " + why);
}

}  // namespace

std::vector<NoduleAnnotation> read_annotations(const std::filesystem::path& path, bool strict) {
    const CsvTable t = read_csv(path);
    const int c_id = require_column(t, "series_id", path);
    const int c_x = require_column(t, "coordX", path);
    const int c_y = require_column(t, "coordY", path);
    const int c_z = require_column(t, "coordZ", path);
    const int c_w = require_column(t, "w_mm", path);
    const int c_h = require_column(t, "h_mm", path);
    const int c_d = require_column(t, "d_mm", path);
    const int c_diam = require_column(t, "diameter_mm", path);
    const int c_label = t.column("label");  // optional

    std::vector<NoduleAnnotation> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::size_t row_no = r + 1;  // 1-based data row, header excluded
        const auto& row = t.rows[r];
        const auto field = [&](int c) -> const std::string& {
            static const std::string empty;
            return c >= 0 && c < static_cast<int>(row.size()) ? row[c] : empty;
        };

        NoduleAnnotation a;
        a.series_id = field(c_id);
        bool ok = !a.series_id.empty();
        ok = ok && parse_double(field(c_x), a.center_mm[0]);
        ok = ok && parse_double(field(c_y), a.center_mm[1]);
        ok = ok && parse_double(field(c_z), a.center_mm[2]);
        ok = ok && parse_double(field(c_w), a.extent_mm[0]);
        ok = ok && parse_double(field(c_h), a.extent_mm[1]);
        ok = ok && parse_double(field(c_d), a.extent_mm[2]);
        ok = ok && parse_double(field(c_diam), a.diameter_mm);
        if (!ok) {
            if (strict) row_error(path, row_no, "non-numeric or missing field");
            continue;
        }
        if (a.extent_mm[0] <= 0 || a.extent_mm[1] <= 0 || a.extent_mm[2] <= 0 ||
            a.diameter_mm <= 0) {
            if (strict) row_error(path, row_no, "extents and diameter must be positive");
            continue;
        }
        if (c_label >= 0 && !field(c_label).empty()) {
            double lv = 0;
            if (!parse_double(field(c_label), lv) || (lv != 0.0 && lv != 1.0)) {
                if (strict) row_error(path, row_no, "label must be 0 or 1");
                continue;
            }
            a.label = static_cast<int>(lv);
        }
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<DetectionCandidate> read_detections(const std::filesystem::path& path, bool strict) {
    const CsvTable t = read_csv(path);
    const int c_id = require_column(t, "series_id", path);
    const int c_x = require_column(t, "coordX", path);
    const int c_y = require_column(t, "coordY", path);
    const int c_z = require_column(t, "coordZ", path);
    const int c_w = require_column(t, "w_mm", path);
    const int c_h = require_column(t, "h_mm", path);
    const int c_d = require_column(t, "d_mm", path);
    const int c_s = require_column(t, "score", path);

    std::vector<DetectionCandidate> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::size_t row_no = r + 1;
        const auto& row = t.rows[r];
        const auto field = [&](int c) -> const std::string& {
            static const std::string empty;
            return c >= 0 && c < static_cast<int>(row.size()) ? row[c] : empty;
        };

        DetectionCandidate d;
        d.series_id = field(c_id);
        bool ok = !d.series_id.empty();
        ok = ok && parse_double(field(c_x), d.center_mm[0]);
        ok = ok && parse_double(field(c_y), d.center_mm[1]);
        ok = ok && parse_double(field(c_z), d.center_mm[2]);
        ok = ok && parse_double(field(c_w), d.extent_mm[0]);
        ok = ok && parse_double(field(c_h), d.extent_mm[1]);
        ok = ok && parse_double(field(c_d), d.extent_mm[2]);
        ok = ok && parse_double(field(c_s), d.score);
        if (!ok) {
            if (strict) row_error(path, row_no, "non-numeric or missing field");
            continue;
        }
        if (d.extent_mm[0] <= 0 || d.extent_mm[1] <= 0 || d.extent_mm[2] <= 0) {
            if (strict) row_error(path, row_no, "extents must be positive");
            continue;
        }
        if (d.score < 0.0 || d.score > 1.0) {
            if (strict) row_error(path, row_no, "score outside [0,1]");
            continue;
        }
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace nodkit::io
