#include "barcoords/persistence.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

namespace barcoords {

MonotonicityError::MonotonicityError(int face, int coface)
    : std::runtime_error("filtration not monotone: cell " + std::to_string(coface) +
                         " has value below its face " + std::to_string(face)),
      face_id(face),
      coface_id(coface) {}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
};

}  // namespace

std::vector<Bar> compute_persistence(const FilteredComplex& cx) {
    std::unordered_map<int, int> by_id;  // cell id -> index in cx.cells
    by_id.reserve(cx.cells.size());
    for (int i = 0; i < static_cast<int>(cx.cells.size()); ++i)
        by_id.emplace(cx.cells[i].id, i);

    for (const Cell& c : cx.cells)
        for (int f : c.boundary) {
            const Cell& face = cx.cells[by_id.at(f)];
            if (face.value > c.value) throw MonotonicityError(face.id, c.id);
        }

    std::vector<int> order(cx.cells.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int u, int v) {
        const Cell &a = cx.cells[u], &b = cx.cells[v];
        if (a.value != b.value) return a.value < b.value;
        if (a.dim != b.dim) return a.dim < b.dim;
        return a.id < b.id;
    });

    std::vector<Bar> bars;

    // dim 0: union-find over vertices, elder rule on merges
    std::unordered_map<int, int> vslot;  // vertex id -> dense slot
    for (int idx : order)
        if (cx.cells[idx].dim == 0) {
            int s = static_cast<int>(vslot.size());
            vslot.emplace(cx.cells[idx].id, s);
        }
    UnionFind uf(static_cast<int>(vslot.size()));
    struct CompInfo {
        double birth;
        int rep_id;  // smallest-birth vertex, ties to smaller id
    };
    std::vector<CompInfo> comp(vslot.size());
    for (const Cell& c : cx.cells)
        if (c.dim == 0) comp[vslot.at(c.id)] = {c.value, c.id};

    std::vector<int> positive_edges;  // indices into cx.cells, filtration order
    for (int idx : order) {
        const Cell& c = cx.cells[idx];
        if (c.dim != 1) continue;
        int ru = uf.find(vslot.at(c.boundary[0]));
        int rv = uf.find(vslot.at(c.boundary[1]));
        if (ru == rv) {
            positive_edges.push_back(idx);
            continue;
        }
        // the younger component dies; ties toward the smaller rep id
        int survivor = ru, dying = rv;
        if (comp[rv].birth < comp[ru].birth ||
            (comp[rv].birth == comp[ru].birth && comp[rv].rep_id < comp[ru].rep_id)) {
            survivor = rv;
            dying = ru;
        }
        bars.push_back({0, comp[dying].birth, c.value});
        uf.parent[dying] = survivor;
    }
    for (const auto& [vid, slot] : vslot)
        if (uf.find(slot) == slot) bars.push_back({0, comp[slot].birth, kInfDeath});

    // dim 1: reduce the triangle boundary matrix over GF(2)
    std::unordered_map<int, int> edge_pos;  // edge id -> filtration position
    for (int p = 0; p < static_cast<int>(order.size()); ++p)
        if (cx.cells[order[p]].dim == 1) edge_pos.emplace(cx.cells[order[p]].id, p);

    std::unordered_map<int, std::vector<int>> pivot_col;  // low pos -> reduced column
    std::unordered_map<int, int> pivot_tri;               // low pos -> triangle cell index
    std::vector<bool> edge_paired_pos(order.size(), false);

    for (int idx : order) {
        const Cell& c = cx.cells[idx];
        if (c.dim != 2) continue;
        std::vector<int> col;
        for (int e : c.boundary) col.push_back(edge_pos.at(e));
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            int low = col.back();
            auto it = pivot_col.find(low);
            if (it == pivot_col.end()) break;
            // symmetric difference with the column owning this pivot
            std::vector<int> merged;
            std::set_symmetric_difference(col.begin(), col.end(), it->second.begin(),
                                          it->second.end(), std::back_inserter(merged));
            col.swap(merged);
        }
        if (!col.empty()) {
            int low = col.back();
            pivot_col.emplace(low, col);
            pivot_tri.emplace(low, idx);
            edge_paired_pos[low] = true;
            const Cell& e = cx.cells[order[low]];
            bars.push_back({1, e.value, c.value});
        }
    }
    for (int idx : positive_edges) {
        int pos = edge_pos.at(cx.cells[idx].id);
        if (!edge_paired_pos[pos]) bars.push_back({1, cx.cells[idx].value, kInfDeath});
    }
    return bars;
}

namespace {

// rank over GF(2); columns are sorted row-index lists
int gf2_rank(std::vector<std::vector<int>> cols) {
    std::unordered_map<int, int> pivot;  // low row -> column index
    int rank = 0;
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
        auto& col = cols[j];
        while (!col.empty()) {
            auto it = pivot.find(col.back());
            if (it == pivot.end()) break;
            std::vector<int> merged;
            const auto& other = cols[it->second];
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(),
                                          other.end(), std::back_inserter(merged));
            col.swap(merged);
        }
        if (!col.empty()) {
            pivot.emplace(col.back(), j);
            ++rank;
        }
    }
    return rank;
}

}  // namespace

std::pair<int, int> betti_at(const FilteredComplex& cx, double t) {
    std::unordered_map<int, int> vrow, erow;
    std::vector<std::vector<int>> d1, d2;
    for (const Cell& c : cx.cells) {
        if (c.value > t) continue;
        if (c.dim == 0) {
            int r = static_cast<int>(vrow.size());
            vrow.emplace(c.id, r);
        }
    }
    int ne = 0;
    for (const Cell& c : cx.cells) {
        if (c.value > t || c.dim != 1) continue;
        erow.emplace(c.id, ne++);
        std::vector<int> col{vrow.at(c.boundary[0]), vrow.at(c.boundary[1])};
        std::sort(col.begin(), col.end());
        d1.push_back(std::move(col));
    }
    for (const Cell& c : cx.cells) {
        if (c.value > t || c.dim != 2) continue;
        std::vector<int> col;
        for (int e : c.boundary) col.push_back(erow.at(e));
        std::sort(col.begin(), col.end());
        d2.push_back(std::move(col));
    }
    const int r1 = gf2_rank(std::move(d1));
    const int r2 = gf2_rank(std::move(d2));
    const int b0 = static_cast<int>(vrow.size()) - r1;
    const int b1 = ne - r1 - r2;
    return {b0, b1};
}

std::vector<Bar> bars_of_dim(const std::vector<Bar>& bars, int dim) {
    std::vector<Bar> out;
    for (const Bar& b : bars)
        if (b.dim == dim) out.push_back(b);
    return out;
}

Barcode cap_barcode(const std::vector<Bar>& bars, double cap) {
    Barcode bc;
    bc.reserve(bars.size());
    for (const Bar& b : bars) {
        if (cap < b.birth)
            throw std::invalid_argument("cap_barcode: cap below a birth value");
        bc.push_back({b.birth, b.essential() ? cap : b.death});
    }
    return bc;
}

}  // namespace barcoords
