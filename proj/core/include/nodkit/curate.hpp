#pragma once

#include <cstdint>
#include <vector>

#include "nodkit/maskops.hpp"
#include "nodkit/volio.hpp"
#include "nodkit/volume.hpp"

namespace nodkit::curate {

/// Sub-volume cropped around an annotation, with its placement in the parent grid.
struct VoiPatch {
    Volume volume;
    Vec3i offset_vox{};       // parent-grid position of patch voxel (0,0,0)
    VolumeMeta source_meta;   // parent grid geometry
};

enum class SegMethod { kmeans, otsu };

struct SegmentationConfig {
    SegMethod method = SegMethod::kmeans;
    int n_clusters = 2;
    int margin_vox = 5;
    std::uint64_t seed = 0;
};

inline constexpr float kBodyThresholdHu = -300.0f;

/// Body envelope: voxels strictly above the HU threshold, largest face-connected
/// component, holes filled. Throws DomainError when nothing clears the threshold.
BinaryMask derive_body_mask(const Volume& ct, float threshold_hu = kBodyThresholdHu);

/// Crops [c-h-margin, c+h+margin] per axis around the annotation center, where
/// h_i = ceil(extent_mm_i / (2*spacing_i)), clipped to the volume.
VoiPatch extract_voi(const Volume& ct, const io::NoduleAnnotation& ann, int margin_vox);

/// Intensity clustering (k-means or Otsu) inside the VOI, highest-mean cluster
/// as foreground, then binary closing (3^3 box) and opening (2^3 box anchored
/// at the min corner). The result is re-embedded into a parent-sized mask.
BinaryMask segment_nodule(const VoiPatch& voi, const SegmentationConfig& cfg);

/// Foreground plus every voxel whose Euclidean distance to it is <= mm.
BinaryMask dilate_mask_mm(const BinaryMask& m, double mm);

/// Majority lobe label (28..32) over the mask; falls back to the nearest lobe
/// by distance transform when there is no overlap. Ties pick the smallest label.
std::uint32_t attribute_lobe(const BinaryMask& m, const LabelMap& organs);

/// Minimum distance (mm) from the mask to the lung boundary (lung voxels with
/// at least one face neighbor outside the lung, grid edges included).
double pleural_distance(const BinaryMask& m, const BinaryMask& lung);

/// Unified label map with priority NODULE > organ label > BODY > background.
LabelMap integrate_labels(const LabelMap& organs, const BinaryMask& body,
                          const std::vector<BinaryMask>& nodules);

/// 1-D k-means used by segment_nodule, exposed for direct checking.
/// Centers start evenly spaced over [min, max] (min and max for k = 2); Lloyd
/// iterations run to an assignment fixpoint or max_iter; assignment ties go to
/// the lower-index center. Returns per-value cluster indices.
std::vector<int> kmeans_1d_assign(const std::vector<float>& values, int k, int max_iter = 100);

/// Otsu threshold over a 256-bin histogram of [min, max]; the lowest threshold
/// maximizing between-class variance wins.
float otsu_threshold(const std::vector<float>& values);

}  // namespace nodkit::curate
