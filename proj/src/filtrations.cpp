#include "barcoords/filtrations.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

namespace barcoords {

BinaryImage binarize(const GrayImage& img, double thresh) {
    BinaryImage out = BinaryImage::filled(img.width, img.height, false);
    for (int i = 0; i < img.width * img.height; ++i)
        out.on[i] = img.pixels[i] > thresh ? 1 : 0;
    return out;
}

FilteredComplex flag_complex(int width, int height,
                             const std::function<bool(int, int)>& active,
                             const std::function<double(int, int)>& value) {
    FilteredComplex cx;
    std::vector<int> vid(static_cast<std::size_t>(width) * height, -1);
    int next_id = 0;
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c)
            if (active(r, c)) {
                vid[r * width + c] = next_id;
                cx.cells.push_back({next_id, 0, {}, value(r, c)});
                ++next_id;
            }

    auto vvalue = [&](int r, int c) { return cx.cells[vid[r * width + c]].value; };

    // forward half of the 8-neighborhood, so each edge is added once
    static const int dr[4] = {0, 1, 1, 1};
    static const int dc[4] = {1, -1, 0, 1};
    std::map<std::pair<int, int>, int> edge_id;  // (min vid, max vid) -> edge cell id
    for (int r = 0; r < height; ++r)
        for (int c = 0; c < width; ++c) {
            if (vid[r * width + c] < 0) continue;
            for (int k = 0; k < 4; ++k) {
                int nr = r + dr[k], nc = c + dc[k];
                if (nr < 0 || nr >= height || nc < 0 || nc >= width) continue;
                if (vid[nr * width + nc] < 0) continue;
                int u = vid[r * width + c], v = vid[nr * width + nc];
                cx.cells.push_back({next_id, 1, {u, v},
                                    std::max(vvalue(r, c), vvalue(nr, nc))});
                edge_id[{std::min(u, v), std::max(u, v)}] = next_id;
                ++next_id;
            }
        }

    // every 3-clique of the king graph lives in a single 2x2 block
    for (int r = 0; r + 1 < height; ++r)
        for (int c = 0; c + 1 < width; ++c) {
            int corner[4] = {vid[r * width + c], vid[r * width + c + 1],
                             vid[(r + 1) * width + c], vid[(r + 1) * width + c + 1]};
            double val[4] = {0, 0, 0, 0};
            for (int i = 0; i < 4; ++i)
                if (corner[i] >= 0) val[i] = cx.cells[corner[i]].value;
            for (int skip = 3; skip >= 0; --skip) {
                int tri[3];
                double tv = 0.0;
                int m = 0;
                bool ok = true;
                for (int i = 0; i < 4; ++i) {
                    if (i == skip) continue;
                    if (corner[i] < 0) {
                        ok = false;
                        break;
                    }
                    tri[m] = corner[i];
                    tv = std::max(tv, val[i]);
                    ++m;
                }
                if (!ok) continue;
                std::vector<int> edges;
                for (int i = 0; i < 3; ++i)
                    for (int j = i + 1; j < 3; ++j)
                        edges.push_back(edge_id.at(
                            {std::min(tri[i], tri[j]), std::max(tri[i], tri[j])}));
                cx.cells.push_back({next_id, 2, edges, tv});
                ++next_id;
            }
        }
    return cx;
}

FilteredComplex sweep_filtration(const BinaryImage& bin, SweepDirection dir) {
    auto coord = [&](int r, int c) -> double {
        switch (dir) {
            case SweepDirection::LeftToRight: return c;
            case SweepDirection::RightToLeft: return bin.width - 1 - c;
            case SweepDirection::TopToBottom: return r;
            case SweepDirection::BottomToTop: return bin.height - 1 - r;
        }
        return 0;
    };
    return flag_complex(
        bin.width, bin.height, [&](int r, int c) { return bin.at(r, c); }, coord);
}

double sweep_extent(const BinaryImage& bin, SweepDirection dir) {
    return (dir == SweepDirection::LeftToRight || dir == SweepDirection::RightToLeft)
               ? bin.width
               : bin.height;
}

FilteredComplex intensity_filtration(const GrayImage& img, IntensityMode mode,
                                     const BinaryImage* mask) {
    if (mask && (mask->width != img.width || mask->height != img.height))
        throw std::invalid_argument("intensity_filtration: mask dimension mismatch");
    auto active = [&](int r, int c) { return mask ? mask->at(r, c) : true; };
    auto value = [&](int r, int c) {
        double v = img.at(r, c);
        return mode == IntensityMode::Sublevel ? v : 1.0 - v;
    };
    return flag_complex(img.width, img.height, active, value);
}

DistanceMap border_distance(const BinaryImage& mask) {
    const int w = mask.width, h = mask.height;
    DistanceMap dm{w, h, std::vector<double>(static_cast<std::size_t>(w) * h, -1.0)};
    std::deque<std::pair<int, int>> queue;
    bool any_on = false;
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            if (!mask.at(r, c)) continue;
            any_on = true;
            bool border = false;
            for (int dr = -1; dr <= 1 && !border; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    int nr = r + dr, nc = c + dc;
                    if (nr < 0 || nr >= h || nc < 0 || nc >= w || !mask.at(nr, nc)) {
                        border = true;
                        break;
                    }
                }
            if (border) {
                dm.dist[r * w + c] = 0.0;
                queue.emplace_back(r, c);
            }
        }
    if (!any_on) throw std::invalid_argument("border_distance: empty mask");
    while (!queue.empty()) {
        auto [r, c] = queue.front();
        queue.pop_front();
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) {
                int nr = r + dr, nc = c + dc;
                if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                if (!mask.at(nr, nc) || dm.dist[nr * w + nc] >= 0.0) continue;
                dm.dist[nr * w + nc] = dm.dist[r * w + c] + 1.0;
                queue.emplace_back(nr, nc);
            }
    }
    return dm;
}

std::vector<SliceComplex> slice_filtrations(const GrayImage& img,
                                            const BinaryImage& mask, int n_slices,
                                            bool disjoint_bands) {
    DistanceMap dm = border_distance(mask);
    double max_dist = 0.0;
    for (double d : dm.dist) max_dist = std::max(max_dist, d);

    std::vector<SliceComplex> out;
    for (int k = 0; k < n_slices; ++k) {
        const double lo = max_dist * k / n_slices;
        const double hi = max_dist * (k + 1) / n_slices;
        for (bool from_border : {true, false}) {
            BinaryImage sub = BinaryImage::filled(mask.width, mask.height, false);
            for (int r = 0; r < mask.height; ++r)
                for (int c = 0; c < mask.width; ++c) {
                    double d = dm.at(r, c);
                    if (d < 0.0) continue;
                    bool in;
                    if (disjoint_bands)
                        in = d >= lo && d <= hi;
                    else
                        in = from_border ? d >= lo : d <= hi;
                    sub.set(r, c, in);
                }
            for (IntensityMode mode : {IntensityMode::Sublevel, IntensityMode::Superlevel})
                out.push_back({k, from_border, mode,
                               intensity_filtration(img, mode, &sub)});
        }
    }
    return out;
}

}  // namespace barcoords
