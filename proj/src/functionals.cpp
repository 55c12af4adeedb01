#include "rspan/functionals.hpp"

#include <cmath>
#include <stdexcept>

#include "rspan/detail/candidates.hpp"

namespace rspan {

using detail::BestCandidate;
using detail::halfspace_dot;
using detail::lex_less;
using detail::radially_precedes;

FunctionalSpec FunctionalSpec::rst(double a) {
    FunctionalSpec s;
    s.a = a;
    s.graph = Graph::Rst;
    return s;
}

FunctionalSpec FunctionalSpec::dsf(double a, Direction e, std::optional<Window> core) {
    FunctionalSpec s;
    s.a = a;
    s.graph = Graph::Dsf;
    s.direction = std::move(e);
    s.core = std::move(core);
    return s;
}

namespace {

void require_exponent(double a) {
    if (a < 0.0 || !std::isfinite(a))
        throw std::invalid_argument("edge-length functional: exponent must be >= 0");
}

} // namespace

FunctionalValue eval_rst_functional(const RadialTree& tree, double a) {
    require_exponent(a);
    FunctionalValue v;
    v.a = a;
    v.point_count = tree.size();
    for (size_t i = 0; i < tree.size(); ++i)
        v.value += pow_edge(tree.edge_length[i], a);
    return v;
}

FunctionalValue eval_dsf_functional(const PointSample& s, const DirectedForest& forest,
                                    const Window& core, double a) {
    require_exponent(a);
    if (forest.size() != s.size())
        throw std::invalid_argument("eval_dsf_functional: forest/sample size mismatch");
    if (!Window::covers(s.sampling_window(), core))
        throw std::invalid_argument("eval_dsf_functional: core window not contained in sample window");
    FunctionalValue v;
    v.a = a;
    for (size_t i = 0; i < s.size(); ++i) {
        if (!core.contains(s.point(i)))
            continue;
        ++v.point_count;
        v.value += pow_edge(forest.edge_length[i], a);
    }
    return v;
}

namespace {

void build_graph(const FunctionalSpec& spec, const PointSample& s,
                 std::vector<uint32_t>& parent, std::vector<double>& length,
                 unsigned workers) {
    if (spec.graph == FunctionalSpec::Graph::Rst) {
        RadialTree t = build_rst(s, workers);
        parent = std::move(t.parent);
        length = std::move(t.edge_length);
    } else {
        if (!spec.direction)
            throw std::invalid_argument("FunctionalSpec: directed functional needs a direction");
        DirectedForest f = build_dsf(s, *spec.direction, workers);
        parent = std::move(f.parent);
        length = std::move(f.edge_length);
    }
}

Window effective_core(const FunctionalSpec& spec, const PointSample& s) {
    return spec.core ? *spec.core : s.core;
}

// F(sample) from prebuilt per-point lengths, summing in index order. The
// optional trailing length covers an appended point.
double sum_functional(double a, const std::vector<double>& length,
                      const std::vector<bool>* in_core, const double* z_length,
                      bool z_in_core) {
    double acc = 0.0;
    for (size_t i = 0; i < length.size(); ++i) {
        if (in_core && !(*in_core)[i])
            continue;
        acc += pow_edge(length[i], a);
    }
    if (z_length && z_in_core)
        acc += pow_edge(*z_length, a);
    return acc;
}

DiffResult diff_first_impl(const FunctionalSpec& spec, const PointSample& s,
                           const std::vector<uint32_t>& base_parent,
                           const std::vector<double>& base_length,
                           std::span<const double> z) {
    require_exponent(spec.a);
    const Window sampling = s.sampling_window();
    if (!sampling.contains(z))
        throw std::invalid_argument("difference operator: point lies outside the sample window");

    const size_t n = s.size();
    const int dim = s.dim;
    const PointSample appended = append_point(s, z);
    const double* zp = appended.point_ptr(n);

    DiffResult res;

    // Parent of the inserted point, by the definitional linear query.
    if (spec.graph == FunctionalSpec::Graph::Rst) {
        const ParentLink link = radial_parent(n, appended);
        res.patch.z_parent = link.parent;
        res.patch.z_length = link.length;
    } else {
        const ParentLink link = directed_parent(n, appended, *spec.direction);
        res.patch.z_parent = link.parent;
        res.patch.z_length = link.length;
    }

    // Existing points: only z can become a better parent, so each point
    // either keeps its link or switches to z under the shared comparator.
    const double n2z = norm2(appended.point(n));
    for (size_t i = 0; i < n; ++i) {
        const double* x = s.point_ptr(i);
        BestCandidate best;
        if (spec.graph == FunctionalSpec::Graph::Rst) {
            const double n2x = norm2(s.point(i));
            if (!radially_precedes(zp, n2z, x, n2x, dim))
                continue;
            const uint32_t p = base_parent[i];
            if (p == kParentRoot) {
                best.consider(kParentRoot, norm2(s.point(i)), 0.0, nullptr, dim);
            } else {
                best.consider(p, dist2(x, s.point_ptr(p), dim), norm2(s.point(p)),
                              s.point_ptr(p), dim);
            }
        } else {
            if (halfspace_dot(spec.direction->coords(), x, zp) > 0.0)
                continue;
            const uint32_t p = base_parent[i];
            if (p != kParentNone)
                best.consider(p, dist2(x, s.point_ptr(p), dim), norm2(s.point(p)),
                              s.point_ptr(p), dim);
        }
        best.consider(static_cast<uint32_t>(n), dist2(x, zp, dim), n2z, zp, dim);
        if (best.idx == static_cast<uint32_t>(n)) {
            res.patch.changed.push_back(
                {static_cast<uint32_t>(i), base_length[i], std::sqrt(best.d2)});
        }
    }

    // Full sums in index order on both sides; the patched sum is
    // bit-identical to evaluating a from-scratch rebuild of the appended
    // sample.
    const bool dsf = spec.graph == FunctionalSpec::Graph::Dsf;
    std::vector<bool> in_core;
    bool z_in_core = true;
    if (dsf) {
        const Window core = effective_core(spec, s);
        in_core.resize(n);
        for (size_t i = 0; i < n; ++i)
            in_core[i] = core.contains(s.point(i));
        z_in_core = core.contains(z);
    }
    std::vector<double> patched = base_length;
    for (const auto& entry : res.patch.changed)
        patched[entry.idx] = entry.new_length;

    const double base_sum =
        sum_functional(spec.a, base_length, dsf ? &in_core : nullptr, nullptr, false);
    const double patched_sum = sum_functional(spec.a, patched, dsf ? &in_core : nullptr,
                                              &res.patch.z_length, z_in_core);
    res.value = patched_sum - base_sum;
    return res;
}

// Graph changes caused by z agree with and without the other insertion
// present: same parent for z (an inserted-point parent counts as a
// difference), same reassigned points with identical old and new lengths.
// Then the alternating second-order sum is exactly zero in real arithmetic.
bool patches_equivalent(const DiffPatch& with_w1, const DiffPatch& without, size_t n) {
    const uint32_t w1_idx = static_cast<uint32_t>(n);
    if (with_w1.z_parent == w1_idx)
        return false;
    if (with_w1.z_parent != without.z_parent || with_w1.z_length != without.z_length)
        return false;
    if (with_w1.changed.size() != without.changed.size())
        return false;
    for (size_t k = 0; k < with_w1.changed.size(); ++k) {
        if (with_w1.changed[k].idx >= w1_idx)
            return false;
        if (!(with_w1.changed[k] == without.changed[k]))
            return false;
    }
    return true;
}

} // namespace

double functional_value(const FunctionalSpec& spec, const PointSample& s, unsigned workers) {
    if (spec.graph == FunctionalSpec::Graph::Rst)
        return eval_rst_functional(build_rst(s, workers), spec.a).value;
    if (!spec.direction)
        throw std::invalid_argument("FunctionalSpec: directed functional needs a direction");
    return eval_dsf_functional(s, build_dsf(s, *spec.direction, workers),
                               effective_core(spec, s), spec.a)
        .value;
}

DiffResult diff_first_detail(const FunctionalSpec& spec, const PointSample& s,
                             std::span<const double> z) {
    std::vector<uint32_t> parent;
    std::vector<double> length;
    build_graph(spec, s, parent, length, 1);
    return diff_first_impl(spec, s, parent, length, z);
}

double diff_first(const FunctionalSpec& spec, const PointSample& s,
                  std::span<const double> z) {
    return diff_first_detail(spec, s, z).value;
}

double diff_first_with_base(const FunctionalSpec& spec, const PointSample& s,
                            const std::vector<uint32_t>& base_parent,
                            const std::vector<double>& base_length,
                            std::span<const double> z) {
    return diff_first_impl(spec, s, base_parent, base_length, z).value;
}

double diff_second_with_base(const FunctionalSpec& spec, const PointSample& s,
                             const std::vector<uint32_t>& base_parent,
                             const std::vector<double>& base_length,
                             std::span<const double> z1, std::span<const double> z2) {
    require_exponent(spec.a);
    if (z1.size() != z2.size() || static_cast<int>(z1.size()) != s.dim)
        throw std::invalid_argument("diff_second: dimension mismatch");

    // Canonical insertion order makes the result symmetric to the bit.
    std::span<const double> w1 = z1, w2 = z2;
    if (lex_less(z2.data(), z1.data(), s.dim))
        std::swap(w1, w2);

    const PointSample with_w1 = append_point(s, w1);
    std::vector<uint32_t> parent_a;
    std::vector<double> length_a;
    build_graph(spec, with_w1, parent_a, length_a, 1);

    const DiffResult ra = diff_first_impl(spec, with_w1, parent_a, length_a, w2);
    const DiffResult rb = diff_first_impl(spec, s, base_parent, base_length, w2);

    if (patches_equivalent(ra.patch, rb.patch, s.size()))
        return 0.0;
    return ra.value - rb.value;
}

double diff_second(const FunctionalSpec& spec, const PointSample& s,
                   std::span<const double> z1, std::span<const double> z2) {
    std::vector<uint32_t> parent;
    std::vector<double> length;
    build_graph(spec, s, parent, length, 1);
    return diff_second_with_base(spec, s, parent, length, z1, z2);
}

} // namespace rspan
