#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nodkit/volume.hpp"

namespace nodkit::io {

/// World-space nodule annotation: box center and extents in mm.
struct NoduleAnnotation {
    std::string series_id;
    Vec3d center_mm{};
    Vec3d extent_mm{};  // w, h, d
    double diameter_mm = 0.0;
    std::optional<int> label;  // 0 = benign, 1 = cancer
};

/// Detector output candidate with a confidence score in [0,1].
struct DetectionCandidate {
    std::string series_id;
    Vec3d center_mm{};
    Vec3d extent_mm{};
    double score = 0.0;
};

/// Reads a volume from ".nii" (uncompressed NIfTI-1 subset) or ".raw"
/// (little-endian payload with a "<name>.meta.json" sidecar).
/// scl_slope/scl_inter are applied when slope != 0.
Volume read_volume(const std::filesystem::path& path);

/// Writes a volume; the format follows the extension as in read_volume.
/// Lossless for the stored datatype, so read(write(v)) == v bit-exactly.
void write_volume(const Volume& v, const std::filesystem::path& path);

/// Label map I/O. Writes pick the smallest integer datatype that fits the
/// maximum label (u8, then i16). Float payloads are rejected on read.
LabelMap read_labelmap(const std::filesystem::path& path);
void write_labelmap(const LabelMap& lm, const std::filesystem::path& path);

/// CSV header: series_id,coordX,coordY,coordZ,w_mm,h_mm,d_mm,diameter_mm,label
/// (label optional). In strict mode a malformed data row aborts the parse with
/// its 1-based data-row number; lenient mode skips it.
std::vector<NoduleAnnotation> read_annotations(const std::filesystem::path& path,
                                               bool strict = true);

/// CSV header: series_id,coordX,coordY,coordZ,w_mm,h_mm,d_mm,score.
std::vector<DetectionCandidate> read_detections(const std::filesystem::path& path,
                                                bool strict = true);

}  // namespace nodkit::io
