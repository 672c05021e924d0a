#pragma once

#include <vector>

#include "nodkit/volume.hpp"

namespace nodkit::maskops {

/// Neighborhood used by morphology, components and hole filling.
/// face = 6 neighbors, edge = 18, full = 26.
enum class Connectivity { face, edge, full };

enum class MorphOp { dilate, erode, open, close };

/// Neighbor offsets for a connectivity, excluding the center voxel.
const std::vector<Vec3i>& connectivity_offsets(Connectivity conn);

/// Minkowski dilation by an explicit offset set: out = {v + o : v in m, o in offsets},
/// clipped to the grid.
BinaryMask dilate_offsets(const BinaryMask& m, const std::vector<Vec3i>& offsets);

/// Minkowski erosion by an explicit offset set: keep v iff every in-bounds
/// v + o is foreground. Out-of-bounds offsets are not required.
BinaryMask erode_offsets(const BinaryMask& m, const std::vector<Vec3i>& offsets);

/// erode then dilate with the same offset set.
BinaryMask open_element(const BinaryMask& m, const std::vector<Vec3i>& offsets);

/// dilate then erode with the same offset set.
BinaryMask close_element(const BinaryMask& m, const std::vector<Vec3i>& offsets);

/// 3x3x3 box element (center + 26 neighbors).
const std::vector<Vec3i>& box3_element();

/// 2x2x2 element anchored at the min corner: offsets {0,1}^3.
const std::vector<Vec3i>& box2_element();

/// Connectivity-based morphology, applied `iterations` times.
/// dilate marks any voxel with >=1 foreground neighbor; erode keeps a voxel
/// iff all in-bounds neighbors are foreground; open = erode,dilate and
/// close = dilate,erode per iteration.
BinaryMask morph_binary(const BinaryMask& m, MorphOp op, Connectivity conn, int iterations = 1);

/// Label connected components 1..K ordered by decreasing size; ties broken by
/// the smallest linear index occurring in the component. Background stays 0.
LabelMap connected_components(const BinaryMask& m, Connectivity conn, int* k_out = nullptr);

/// Largest connected component of m (empty mask stays empty).
BinaryMask largest_component(const BinaryMask& m, Connectivity conn);

/// Background voxels not conn-reachable from the volume boundary become
/// foreground; everything else is unchanged.
BinaryMask fill_holes(const BinaryMask& m, Connectivity conn);

/// Exact anisotropic Euclidean distance (mm) from every voxel center to the
/// nearest foreground voxel center. Foreground maps to 0.
/// Throws DomainError on an empty mask.
std::vector<double> distance_transform(const BinaryMask& m);

/// Voxels with value strictly above the threshold.
BinaryMask threshold_above(const Volume& v, float threshold);

}  // namespace nodkit::maskops
