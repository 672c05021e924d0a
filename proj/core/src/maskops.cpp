#include "nodkit/maskops.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "nodkit/error.hpp"

namespace nodkit::maskops {

namespace {

std::vector<Vec3i> make_offsets(Connectivity conn) {
    std::vector<Vec3i> out;
    for (int dz = -1; dz <= 1; ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int order = std::abs(dx) + std::abs(dy) + std::abs(dz);
                if (order == 0) continue;
                if (conn == Connectivity::face && order > 1) continue;
                if (conn == Connectivity::edge && order > 2) continue;
                out.push_back({dx, dy, dz});
            }
        }
    }
    return out;
}

}  // namespace

const std::vector<Vec3i>& connectivity_offsets(Connectivity conn) {
    static const std::vector<Vec3i> face = make_offsets(Connectivity::face);
    static const std::vector<Vec3i> edge = make_offsets(Connectivity::edge);
    static const std::vector<Vec3i> full = make_offsets(Connectivity::full);
    switch (conn) {
        case Connectivity::face: return face;
        case Connectivity::edge: return edge;
        default: return full;
    }
}

const std::vector<Vec3i>& box3_element() {
    static const std::vector<Vec3i> elem = [] {
        std::vector<Vec3i> e;
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) e.push_back({dx, dy, dz});
        return e;
    }();
    return elem;
}

const std::vector<Vec3i>& box2_element() {
    static const std::vector<Vec3i> elem = [] {
        std::vector<Vec3i> e;
        for (int dz = 0; dz <= 1; ++dz)
            for (int dy = 0; dy <= 1; ++dy)
                for (int dx = 0; dx <= 1; ++dx) e.push_back({dx, dy, dz});
        return e;
    }();
    return elem;
}

BinaryMask dilate_offsets(const BinaryMask& m, const std::vector<Vec3i>& offsets) {
    BinaryMask out(m.meta);
    const auto& meta = m.meta;
    for (int z = 0; z < meta.dims[2]; ++z) {
        for (int y = 0; y < meta.dims[1]; ++y) {
            for (int x = 0; x < meta.dims[0]; ++x) {
                if (!m.at(x, y, z)) continue;
                for (const auto& o : offsets) {
                    const int nx = x + o[0], ny = y + o[1], nz = z + o[2];
                    if (meta.in_bounds(nx, ny, nz)) out.set(nx, ny, nz, true);
                }
            }
        }
    }
    return out;
}

BinaryMask erode_offsets(const BinaryMask& m, const std::vector<Vec3i>& offsets) {
    BinaryMask out(m.meta);
    const auto& meta = m.meta;
    for (int z = 0; z < meta.dims[2]; ++z) {
        for (int y = 0; y < meta.dims[1]; ++y) {
            for (int x = 0; x < meta.dims[0]; ++x) {
                bool keep = true;
                for (const auto& o : offsets) {
                    const int nx = x + o[0], ny = y + o[1], nz = z + o[2];
                    if (meta.in_bounds(nx, ny, nz) && !m.at(nx, ny, nz)) {
                        keep = false;
                        break;
                    }
                }
                out.set(x, y, z, keep);
            }
        }
    }
    return out;
}

BinaryMask open_element(const BinaryMask& m, const std::vector<Vec3i>& offsets) {
    return dilate_offsets(erode_offsets(m, offsets), offsets);
}

BinaryMask close_element(const BinaryMask& m, const std::vector<Vec3i>& offsets) {
    return erode_offsets(dilate_offsets(m, offsets), offsets);
}

namespace {

BinaryMask dilate_conn(const BinaryMask& m, const std::vector<Vec3i>& nbr) {
    BinaryMask out = dilate_offsets(m, nbr);
    for (std::size_t i = 0; i < m.bits.size(); ++i) out.bits[i] |= m.bits[i];
    return out;
}

BinaryMask erode_conn(const BinaryMask& m, const std::vector<Vec3i>& nbr) {
    BinaryMask out = erode_offsets(m, nbr);
    for (std::size_t i = 0; i < m.bits.size(); ++i) out.bits[i] &= m.bits[i];
    return out;
}

}  // namespace

BinaryMask morph_binary(const BinaryMask& m, MorphOp op, Connectivity conn, int iterations) {
    if (iterations < 1) throw DomainError("morph_binary: iterations must be >= 1");
    const auto& nbr = connectivity_offsets(conn);
    BinaryMask cur = m;
    for (int it = 0; it < iterations; ++it) {
        switch (op) {
            case MorphOp::dilate: cur = dilate_conn(cur, nbr); break;
            case MorphOp::erode: cur = erode_conn(cur, nbr); break;
            case MorphOp::open: cur = dilate_conn(erode_conn(cur, nbr), nbr); break;
            case MorphOp::close: cur = erode_conn(dilate_conn(cur, nbr), nbr); break;
        }
    }
    return cur;
}

LabelMap connected_components(const BinaryMask& m, Connectivity conn, int* k_out) {
    const auto& meta = m.meta;
    const auto& nbr = connectivity_offsets(conn);
    const std::size_t n = m.bits.size();

    std::vector<std::uint32_t> provisional(n, 0);
    struct Component {
        std::uint32_t id;
        std::size_t size;
        std::size_t first;  // smallest linear index in the component
    };
    std::vector<Component> comps;
    std::vector<std::size_t> stack;

    std::uint32_t next_id = 0;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (!m.bits[seed] || provisional[seed] != 0) continue;
        ++next_id;
        Component c{next_id, 0, seed};
        provisional[seed] = next_id;
        stack.assign(1, seed);
        while (!stack.empty()) {
            const std::size_t idx = stack.back();
            stack.pop_back();
            ++c.size;
            const Vec3i v = meta.unravel(idx);
            for (const auto& o : nbr) {
                const int nx = v[0] + o[0], ny = v[1] + o[1], nz = v[2] + o[2];
                if (!meta.in_bounds(nx, ny, nz)) continue;
                const std::size_t nidx = meta.index(nx, ny, nz);
                if (m.bits[nidx] && provisional[nidx] == 0) {
                    provisional[nidx] = next_id;
                    stack.push_back(nidx);
                }
            }
        }
        comps.push_back(c);
    }

    // Scan order guarantees `first` is the component minimum already.
    std::sort(comps.begin(), comps.end(), [](const Component& a, const Component& b) {
        if (a.size != b.size) return a.size > b.size;
        return a.first < b.first;
    });
    std::vector<std::uint32_t> remap(next_id + 1, 0);
    for (std::size_t rank = 0; rank < comps.size(); ++rank) {
        remap[comps[rank].id] = static_cast<std::uint32_t>(rank + 1);
    }

    LabelMap out(meta);
    for (std::size_t i = 0; i < n; ++i) {
        if (provisional[i] != 0) out.labels[i] = remap[provisional[i]];
    }
    if (k_out) *k_out = static_cast<int>(comps.size());
    return out;
}

BinaryMask largest_component(const BinaryMask& m, Connectivity conn) {
    int k = 0;
    const LabelMap cc = connected_components(m, conn, &k);
    BinaryMask out(m.meta);
    if (k == 0) return out;
    for (std::size_t i = 0; i < cc.labels.size(); ++i) out.bits[i] = cc.labels[i] == 1;
    return out;
}

BinaryMask fill_holes(const BinaryMask& m, Connectivity conn) {
    const auto& meta = m.meta;
    const auto& nbr = connectivity_offsets(conn);
    const std::size_t n = m.bits.size();
    std::vector<std::uint8_t> reached(n, 0);
    std::vector<std::size_t> stack;

    auto try_seed = [&](int x, int y, int z) {
        const std::size_t idx = meta.index(x, y, z);
        if (!m.bits[idx] && !reached[idx]) {
            reached[idx] = 1;
            stack.push_back(idx);
        }
    };
    for (int z = 0; z < meta.dims[2]; ++z) {
        for (int y = 0; y < meta.dims[1]; ++y) {
            for (int x = 0; x < meta.dims[0]; ++x) {
                if (x == 0 || y == 0 || z == 0 || x == meta.dims[0] - 1 || y == meta.dims[1] - 1 ||
                    z == meta.dims[2] - 1) {
                    try_seed(x, y, z);
                }
            }
        }
    }
    while (!stack.empty()) {
        const std::size_t idx = stack.back();
        stack.pop_back();
        const Vec3i v = meta.unravel(idx);
        for (const auto& o : nbr) {
            const int nx = v[0] + o[0], ny = v[1] + o[1], nz = v[2] + o[2];
            if (!meta.in_bounds(nx, ny, nz)) continue;
            const std::size_t nidx = meta.index(nx, ny, nz);
            if (!m.bits[nidx] && !reached[nidx]) {
                reached[nidx] = 1;
                stack.push_back(nidx);
            }
        }
    }

    BinaryMask out = m;
    for (std::size_t i = 0; i < n; ++i) {
        if (!m.bits[i] && !reached[i]) out.bits[i] = 1;
    }
    return out;
}

namespace {

constexpr double kFar = 1e30;

/// 1-D squared-distance lower envelope (Felzenszwalb-Huttenlocher) on samples
/// at positions x_i = i * spacing. f holds squared distances, overwritten.
void dt_line(std::vector<double>& f, std::vector<double>& scratch, std::vector<int>& v,
             std::vector<double>& z, double spacing) {
    const int n = static_cast<int>(f.size());
    if (n == 1) return;
    auto xpos = [spacing](int i) { return static_cast<double>(i) * spacing; };

    // f stays finite (kFar for background), so s is finite and the -inf
    // sentinel can never be popped.
    const double inf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < n; ++q) {
        double s = 0.0;
        while (true) {
            const int p = v[k];
            s = ((f[q] + xpos(q) * xpos(q)) - (f[p] + xpos(p) * xpos(p))) /
                (2.0 * xpos(q) - 2.0 * xpos(p));
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }

    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < xpos(q)) ++k;
        const double d = xpos(q) - xpos(v[k]);
        scratch[q] = d * d + f[v[k]];
    }
    std::copy(scratch.begin(), scratch.begin() + n, f.begin());
}

}  // namespace

std::vector<double> distance_transform(const BinaryMask& m) {
    const auto& meta = m.meta;
    const std::size_t n = m.bits.size();

    std::vector<double> sq(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        const bool fg = m.bits[i] != 0;
        any |= fg;
        sq[i] = fg ? 0.0 : kFar;
    }
    if (!any) throw DomainError("distance_transform: empty mask");

    const int nx = meta.dims[0], ny = meta.dims[1], nz = meta.dims[2];
    const int max_dim = std::max({nx, ny, nz});
    std::vector<double> line(max_dim), scratch(max_dim);
    std::vector<int> v(max_dim);
    std::vector<double> z(max_dim + 1);

    // x pass
    for (int zz = 0; zz < nz; ++zz) {
        for (int yy = 0; yy < ny; ++yy) {
            line.resize(nx);
            for (int xx = 0; xx < nx; ++xx) line[xx] = sq[meta.index(xx, yy, zz)];
            dt_line(line, scratch, v, z, meta.spacing[0]);
            for (int xx = 0; xx < nx; ++xx) sq[meta.index(xx, yy, zz)] = line[xx];
        }
    }
    // y pass
    for (int zz = 0; zz < nz; ++zz) {
        for (int xx = 0; xx < nx; ++xx) {
            line.resize(ny);
            for (int yy = 0; yy < ny; ++yy) line[yy] = sq[meta.index(xx, yy, zz)];
            dt_line(line, scratch, v, z, meta.spacing[1]);
            for (int yy = 0; yy < ny; ++yy) sq[meta.index(xx, yy, zz)] = line[yy];
        }
    }
    // z pass
    for (int yy = 0; yy < ny; ++yy) {
        for (int xx = 0; xx < nx; ++xx) {
            line.resize(nz);
            for (int zz = 0; zz < nz; ++zz) line[zz] = sq[meta.index(xx, yy, zz)];
            dt_line(line, scratch, v, z, meta.spacing[2]);
            for (int zz = 0; zz < nz; ++zz) sq[meta.index(xx, yy, zz)] = line[zz];
        }
    }

    for (auto& d : sq) d = std::sqrt(d);
    return sq;
}

BinaryMask threshold_above(const Volume& vol, float threshold) {
    BinaryMask out(vol.meta);
    for (std::size_t i = 0; i < vol.data.size(); ++i) out.bits[i] = vol.data[i] > threshold;
    return out;
}

}  // namespace nodkit::maskops
