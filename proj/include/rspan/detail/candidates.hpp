#pragma once

#include <cstdint>
#include <span>

#include "rspan/geom.hpp"
#include "rspan/spanning.hpp"

// Candidate admission and tie-breaking shared by every parent query: the
// grid builders, the linear reference queries and the difference-operator
// patch computation must all run the identical comparisons on identically
// computed values.

namespace rspan::detail {

// Lexicographic order on coordinates; nullptr stands for the origin.
inline bool lex_less(const double* a, const double* b, int dim) {
    for (int i = 0; i < dim; ++i) {
        const double av = a ? a[i] : 0.0;
        const double bv = b ? b[i] : 0.0;
        if (av != bv)
            return av < bv;
    }
    return false;
}

// y precedes x in the radial order: smaller norm, ties by coordinates.
// Parent links strictly descend in this order, which keeps the tree acyclic
// even on crafted equal-norm inputs.
inline bool radially_precedes(const double* y, double n2y, const double* x,
                              double n2x, int dim) {
    if (n2y != n2x)
        return n2y < n2x;
    return lex_less(y, x, dim);
}

inline double halfspace_dot(std::span<const double> e, const double* x, const double* y) {
    double dot = 0.0;
    for (size_t i = 0; i < e.size(); ++i)
        dot += e[i] * (y[i] - x[i]);
    return dot;
}

// Running argmin with the deterministic tie-break: distance, then candidate
// norm, then lexicographic coordinates.
struct BestCandidate {
    bool has = false;
    uint32_t idx = kParentNone;
    double d2 = 0.0;
    double n2 = 0.0;
    const double* y = nullptr; // nullptr = origin

    void consider(uint32_t cand, double cand_d2, double cand_n2, const double* cand_y,
                  int dim) {
        if (!has) {
            has = true;
        } else if (cand_d2 != d2) {
            if (cand_d2 > d2)
                return;
        } else if (cand_n2 != n2) {
            if (cand_n2 > n2)
                return;
        } else if (!lex_less(cand_y, y, dim)) {
            return;
        }
        idx = cand;
        d2 = cand_d2;
        n2 = cand_n2;
        y = cand_y;
    }
};

} // namespace rspan::detail
