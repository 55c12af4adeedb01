#include "rspan/spanning.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rspan/detail/candidates.hpp"
#include "rspan/parallel.hpp"
#include "rspan/rng.hpp"

namespace rspan {

using detail::BestCandidate;
using detail::halfspace_dot;
using detail::radially_precedes;

namespace {

uint64_t cell_hash(const int64_t* c, int dim) {
    uint64_t h = 0x51ed270b4d5bdc91ULL;
    for (int i = 0; i < dim; ++i)
        h = mix64(h ^ static_cast<uint64_t>(c[i]));
    return h;
}

} // namespace

GridIndex::GridIndex(const double* coords, size_t n, int dim, double cell)
    : dim_(dim), cell_(cell) {
    if (!(cell > 0.0))
        throw std::invalid_argument("GridIndex: cell size must be positive");
    lo_.assign(static_cast<size_t>(dim), 0.0);
    std::vector<double> hi(static_cast<size_t>(dim), 0.0);
    for (int a = 0; a < dim; ++a) {
        double mn = 0.0, mx = 0.0;
        if (n > 0) {
            mn = mx = coords[a];
            for (size_t i = 1; i < n; ++i) {
                const double v = coords[i * static_cast<size_t>(dim) + a];
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
        }
        lo_[static_cast<size_t>(a)] = mn;
        hi[static_cast<size_t>(a)] = mx;
    }
    ncells_.assign(static_cast<size_t>(dim), 1);
    for (int a = 0; a < dim; ++a) {
        const double span = hi[static_cast<size_t>(a)] - lo_[static_cast<size_t>(a)];
        ncells_[static_cast<size_t>(a)] =
            std::max<int64_t>(1, static_cast<int64_t>(std::floor(span / cell_)) + 1);
    }
    buckets_.reserve(n);
    std::vector<int64_t> c(static_cast<size_t>(dim));
    for (size_t i = 0; i < n; ++i) {
        cell_of({coords + i * static_cast<size_t>(dim), static_cast<size_t>(dim)}, c);
        buckets_[cell_hash(c.data(), dim)].push_back(static_cast<uint32_t>(i));
    }
}

void GridIndex::cell_of(std::span<const double> x, std::vector<int64_t>& c) const {
    c.resize(static_cast<size_t>(dim_));
    for (int a = 0; a < dim_; ++a) {
        int64_t v = static_cast<int64_t>(std::floor((x[a] - lo_[static_cast<size_t>(a)]) / cell_));
        v = std::clamp<int64_t>(v, 0, ncells_[static_cast<size_t>(a)] - 1);
        c[static_cast<size_t>(a)] = v;
    }
}

int GridIndex::max_shell(std::span<const double> x) const {
    std::vector<int64_t> c;
    cell_of(x, c);
    int64_t m = 0;
    for (int a = 0; a < dim_; ++a)
        m = std::max({m, c[static_cast<size_t>(a)],
                      ncells_[static_cast<size_t>(a)] - 1 - c[static_cast<size_t>(a)]});
    return static_cast<int>(m);
}

void GridIndex::shell_candidates(std::span<const double> x, int shell,
                                 std::vector<uint32_t>& out) const {
    std::vector<int64_t> c;
    cell_of(x, c);
    std::vector<int64_t> g(static_cast<size_t>(dim_));
    const int64_t s = shell;

    auto emit = [&]() {
        auto it = buckets_.find(cell_hash(g.data(), dim_));
        if (it != buckets_.end())
            out.insert(out.end(), it->second.begin(), it->second.end());
    };

    // Odometer over cells whose Chebyshev offset from c equals `shell`; on
    // the last axis the offset is forced to +-s unless an earlier axis
    // already hit the boundary.
    auto visit = [&](auto&& self, int axis, bool hit) -> void {
        if (axis == dim_) {
            emit();
            return;
        }
        const int64_t base = c[static_cast<size_t>(axis)];
        const int64_t nc = ncells_[static_cast<size_t>(axis)];
        auto step = [&](int64_t v, bool now_hit) {
            const int64_t gv = base + v;
            if (gv < 0 || gv >= nc)
                return;
            g[static_cast<size_t>(axis)] = gv;
            self(self, axis + 1, now_hit);
        };
        if (axis == dim_ - 1 && !hit) {
            step(-s, true);
            if (s != 0)
                step(s, true);
        } else {
            for (int64_t v = -s; v <= s; ++v)
                step(v, hit || v == -s || v == s);
        }
    };
    visit(visit, 0, false);
}

std::vector<uint32_t> GridIndex::cell_content(std::span<const double> x) const {
    std::vector<uint32_t> out;
    shell_candidates(x, 0, out);
    return out;
}

double default_cell_size(const PointSample& s) {
    const double vol = s.sampling_window().volume();
    const double n = static_cast<double>(std::max<size_t>(s.size(), 1));
    return std::pow(vol / n, 1.0 / s.dim);
}

ParentLink radial_parent(size_t i, const PointSample& s) {
    const size_t n = s.size();
    if (i >= n)
        throw std::out_of_range("radial_parent: index out of range");
    const double* x = s.point_ptr(i);
    const double n2x = norm2(s.point(i));
    BestCandidate best;
    best.consider(kParentRoot, n2x, 0.0, nullptr, s.dim);
    for (size_t j = 0; j < n; ++j) {
        if (j == i)
            continue;
        const double* y = s.point_ptr(j);
        const double n2y = norm2(s.point(j));
        if (!radially_precedes(y, n2y, x, n2x, s.dim))
            continue;
        best.consider(static_cast<uint32_t>(j), dist2(x, y, s.dim), n2y, y, s.dim);
    }
    return {best.idx, std::sqrt(best.d2)};
}

ParentLink directed_parent(size_t i, const PointSample& s, const Direction& e) {
    const size_t n = s.size();
    if (i >= n)
        throw std::out_of_range("directed_parent: index out of range");
    if (e.dim() != s.dim)
        throw std::invalid_argument("directed_parent: direction dimension mismatch");
    const double* x = s.point_ptr(i);
    BestCandidate best;
    for (size_t j = 0; j < n; ++j) {
        if (j == i)
            continue;
        const double* y = s.point_ptr(j);
        if (halfspace_dot(e.coords(), x, y) > 0.0)
            continue;
        best.consider(static_cast<uint32_t>(j), dist2(x, y, s.dim), norm2(s.point(j)), y, s.dim);
    }
    if (!best.has)
        return {kParentNone, 0.0};
    return {best.idx, std::sqrt(best.d2)};
}

namespace {

ParentLink rst_query(const PointSample& s, const GridIndex& grid,
                     const std::vector<double>& norms2, size_t i,
                     std::vector<uint32_t>& buf) {
    const double* x = s.point_ptr(i);
    const double n2x = norms2[i];
    BestCandidate best;
    best.consider(kParentRoot, n2x, 0.0, nullptr, s.dim);
    const int smax = grid.max_shell(s.point(i));
    const double h = grid.cell_size();
    for (int shell = 0; shell <= smax; ++shell) {
        if (shell >= 1) {
            const double bound = (shell - 1) * h;
            if (bound * bound > best.d2)
                break;
        }
        buf.clear();
        grid.shell_candidates(s.point(i), shell, buf);
        for (uint32_t j : buf) {
            if (j == i)
                continue;
            const double* y = s.point_ptr(j);
            if (!radially_precedes(y, norms2[j], x, n2x, s.dim))
                continue;
            best.consider(j, dist2(x, y, s.dim), norms2[j], y, s.dim);
        }
    }
    return {best.idx, std::sqrt(best.d2)};
}

ParentLink dsf_query(const PointSample& s, const Direction& e, const GridIndex& grid,
                     const std::vector<double>& norms2, size_t i,
                     std::vector<uint32_t>& buf) {
    const double* x = s.point_ptr(i);
    BestCandidate best;
    const int smax = grid.max_shell(s.point(i));
    const double h = grid.cell_size();
    for (int shell = 0; shell <= smax; ++shell) {
        if (best.has && shell >= 1) {
            const double bound = (shell - 1) * h;
            if (bound * bound > best.d2)
                break;
        }
        buf.clear();
        grid.shell_candidates(s.point(i), shell, buf);
        for (uint32_t j : buf) {
            if (j == i)
                continue;
            const double* y = s.point_ptr(j);
            if (halfspace_dot(e.coords(), x, y) > 0.0)
                continue;
            best.consider(j, dist2(x, y, s.dim), norms2[j], y, s.dim);
        }
    }
    if (!best.has)
        return {kParentNone, 0.0};
    return {best.idx, std::sqrt(best.d2)};
}

std::vector<double> all_norms2(const PointSample& s) {
    std::vector<double> out(s.size());
    for (size_t i = 0; i < s.size(); ++i)
        out[i] = norm2(s.point(i));
    return out;
}

} // namespace

RadialTree build_rst(const PointSample& s, unsigned workers) {
    RadialTree tree;
    const size_t n = s.size();
    tree.parent.resize(n);
    tree.edge_length.resize(n);
    if (n == 0)
        return tree;
    const auto norms2 = all_norms2(s);
    const GridIndex grid(s.coords.data(), n, s.dim, default_cell_size(s));
    parallel_for(n, workers, [&](size_t i) {
        thread_local std::vector<uint32_t> buf;
        const ParentLink link = rst_query(s, grid, norms2, i, buf);
        tree.parent[i] = link.parent;
        tree.edge_length[i] = link.length;
    });
    return tree;
}

DirectedForest build_dsf(const PointSample& s, const Direction& e, unsigned workers) {
    DirectedForest forest;
    const size_t n = s.size();
    forest.parent.resize(n);
    forest.edge_length.resize(n);
    if (n == 0)
        return forest;
    if (e.dim() != s.dim)
        throw std::invalid_argument("build_dsf: direction dimension mismatch");
    const auto norms2 = all_norms2(s);
    const GridIndex grid(s.coords.data(), n, s.dim, default_cell_size(s));
    parallel_for(n, workers, [&](size_t i) {
        thread_local std::vector<uint32_t> buf;
        const ParentLink link = dsf_query(s, e, grid, norms2, i, buf);
        forest.parent[i] = link.parent;
        forest.edge_length[i] = link.length;
    });
    return forest;
}

void write_edges_csv(std::ostream& os, const std::vector<uint32_t>& parent,
                     const std::vector<double>& edge_length) {
    os << "child_index,parent_index,parent_kind,length\n";
    std::string line;
    for (size_t i = 0; i < parent.size(); ++i) {
        line.clear();
        line += std::to_string(i);
        if (parent[i] == kParentRoot) {
            line += ",-1,ROOT,";
        } else if (parent[i] == kParentNone) {
            line += ",-1,NONE,";
        } else {
            line += "," + std::to_string(parent[i]) + ",NODE,";
        }
        append_double(line, edge_length[i]);
        line.push_back('\n');
        os << line;
    }
}

} // namespace rspan
