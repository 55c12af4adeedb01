#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "rspan/geom.hpp"
#include "rspan/point_sample.hpp"

namespace rspan {

inline constexpr uint32_t kParentRoot = 0xFFFFFFFFu;
inline constexpr uint32_t kParentNone = 0xFFFFFFFEu;

/// Tree rooted at the origin: parent[i] is a point index or kParentRoot,
/// edge_length[i] the distance to the parent (to the origin for ROOT).
struct RadialTree {
    std::vector<uint32_t> parent;
    std::vector<double> edge_length;
    size_t size() const { return parent.size(); }
};

/// Forest for a fixed direction: parent[i] is a point index or kParentNone,
/// edge_length[i] = 0 for NONE.
struct DirectedForest {
    std::vector<uint32_t> parent;
    std::vector<double> edge_length;
    size_t size() const { return parent.size(); }
};

struct ParentLink {
    uint32_t parent = kParentNone;
    double length = 0.0;
    bool operator==(const ParentLink&) const = default;
};

/// Uniform-cell spatial hash over the sample's bounding box. Buckets key on
/// a 64-bit cell hash; a hash collision merges two cells into one bucket,
/// which only ever adds candidates to a shell scan, never hides any.
class GridIndex {
public:
    GridIndex(const double* coords, size_t n, int dim, double cell);

    double cell_size() const { return cell_; }
    int dim() const { return dim_; }

    /// Point indices in cells at Chebyshev distance `shell` from the cell of
    /// x (clamped into the grid), appended to `out` in deterministic order.
    void shell_candidates(std::span<const double> x, int shell,
                          std::vector<uint32_t>& out) const;

    /// Last shell that can contain any cell, seen from x's clamped cell.
    int max_shell(std::span<const double> x) const;

    /// Any point of x's own (clamped) cell present? For the cell-content
    /// invariant tests.
    std::vector<uint32_t> cell_content(std::span<const double> x) const;

private:
    void cell_of(std::span<const double> x, std::vector<int64_t>& c) const;
    int dim_;
    double cell_;
    std::vector<double> lo_;
    std::vector<int64_t> ncells_;
    std::unordered_map<uint64_t, std::vector<uint32_t>> buckets_;
};

/// Heuristic cell size: the mean nearest-point spacing (volume per point)
/// ^(1/d), i.e. t^{-1/d} for a unit-volume window at intensity t.
double default_cell_size(const PointSample& s);

/// Radial nearest neighbour of point i: the candidate minimizing the
/// distance to it among the origin (always admissible, reported as ROOT)
/// and every sample point that precedes i radially. Points of equal norm
/// are ordered by coordinates, so parent links strictly decrease the
/// (norm, coordinates) key and the tree is acyclic on any input. Linear
/// scan; the definitional reference the grid builders must match exactly.
ParentLink radial_parent(size_t i, const PointSample& s);

/// Nearest sample point of the closed half-space behind point i (boundary
/// included), or NONE. Linear scan.
ParentLink directed_parent(size_t i, const PointSample& s, const Direction& e);

/// Grid-accelerated builders. Parent assignments are required to equal the
/// per-point linear queries bit for bit; the spatial index is an
/// optimization, never a semantic change.
RadialTree build_rst(const PointSample& s, unsigned workers = 1);
DirectedForest build_dsf(const PointSample& s, const Direction& e,
                         unsigned workers = 1);

/// Edge list CSV: child_index,parent_index,parent_kind,length with
/// parent_kind in {ROOT,NODE,NONE} and parent_index -1 for ROOT/NONE.
void write_edges_csv(std::ostream& os, const std::vector<uint32_t>& parent,
                     const std::vector<double>& edge_length);

} // namespace rspan
