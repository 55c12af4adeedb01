#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "rspan/geom.hpp"
#include "rspan/point_sample.hpp"
#include "rspan/spanning.hpp"

namespace rspan {

/// x^a with the 0^0 := 1 convention, so the a = 0 functional counts
/// vertices (including directed-forest points without a parent).
inline double pow_edge(double x, double a) {
    if (a == 0.0)
        return 1.0;
    return std::pow(x, a);
}

/// Which graph the edge-length functional sum runs over. For the directed
/// forest the sum is restricted to `core` (defaults to the sample's
/// undilated window); neighbours may lie in the dilation collar.
struct FunctionalSpec {
    enum class Graph { Rst, Dsf };
    double a = 1.0;
    Graph graph = Graph::Rst;
    std::optional<Direction> direction; // Dsf only
    std::optional<Window> core;         // Dsf only; default: sample.core

    static FunctionalSpec rst(double a);
    static FunctionalSpec dsf(double a, Direction e, std::optional<Window> core = std::nullopt);
};

struct FunctionalValue {
    double value = 0.0;
    size_t point_count = 0;
    double a = 0.0;
};

/// Sum of edge_length^a over all tree points, left to right in index order.
/// Throws for a < 0.
FunctionalValue eval_rst_functional(const RadialTree& tree, double a);

/// Sum restricted to forest points inside `core`; parentless points
/// contribute 0^a. Throws if `core` is not contained in the sample's
/// (dilated) window, or for a < 0.
FunctionalValue eval_dsf_functional(const PointSample& s, const DirectedForest& forest,
                                    const Window& core, double a);

/// F(sample) for the given spec (builds the graph, then evaluates).
double functional_value(const FunctionalSpec& spec, const PointSample& s,
                        unsigned workers = 1);

/// The set of parent reassignments caused by inserting one point. Only the
/// inserted point can become a new parent, so each entry records the point
/// whose edge shrank and the replacement length.
struct DiffPatch {
    struct Entry {
        uint32_t idx;
        double old_length;
        double new_length;
        bool operator==(const Entry&) const = default;
    };
    uint32_t z_parent = kParentNone; // parent of the inserted point
    double z_length = 0.0;
    std::vector<Entry> changed; // ascending idx
};

struct DiffResult {
    double value = 0.0;
    DiffPatch patch;
};

/// First-order difference F(sample + z) - F(sample). Both functional values
/// are full sums in index order (the inserted point last), so the result is
/// bit-identical to evaluating the rebuilt graph from scratch. Throws if z
/// lies outside the sample's window.
double diff_first(const FunctionalSpec& spec, const PointSample& s,
                  std::span<const double> z);
DiffResult diff_first_detail(const FunctionalSpec& spec, const PointSample& s,
                             std::span<const double> z);

/// Second-order difference
/// F(s+z1+z2) - F(s+z1) - F(s+z2) + F(s), via two first-order differences.
/// Arguments are canonicalized (lexicographic order), so swapping z1 and z2
/// reproduces the identical result bit for bit. When the two insertions do
/// not interact -- the patch of z2 is the same with and without z1 present,
/// in which case the alternating sum is exactly zero in real arithmetic --
/// the function returns exactly 0.0.
double diff_second(const FunctionalSpec& spec, const PointSample& s,
                   std::span<const double> z1, std::span<const double> z2);

/// Same, reusing a prebuilt base graph of `s` (parents and lengths from the
/// matching builder) when many probes run against one sample.
double diff_second_with_base(const FunctionalSpec& spec, const PointSample& s,
                             const std::vector<uint32_t>& base_parent,
                             const std::vector<double>& base_length,
                             std::span<const double> z1, std::span<const double> z2);

double diff_first_with_base(const FunctionalSpec& spec, const PointSample& s,
                            const std::vector<uint32_t>& base_parent,
                            const std::vector<double>& base_length,
                            std::span<const double> z);

} // namespace rspan
