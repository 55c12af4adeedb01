#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rspan/geom.hpp"

namespace rspan {

/// One realization of a homogeneous Poisson point process. `core` is the
/// observation window; points live in core.dilated(dilation_margin).
/// Coordinates are stored row-major (point i occupies [i*dim, (i+1)*dim)).
struct PointSample {
    int dim = 0;
    std::vector<double> coords;
    Window core = Window::box({0.0}, {1.0}); // placeholder; always overwritten
    double intensity = 0.0;
    uint64_t seed = 0;
    double dilation_margin = 0.0;
    uint64_t duplicate_rejections = 0;

    size_t size() const { return dim == 0 ? 0 : coords.size() / static_cast<size_t>(dim); }
    std::span<const double> point(size_t i) const {
        return {coords.data() + i * static_cast<size_t>(dim), static_cast<size_t>(dim)};
    }
    const double* point_ptr(size_t i) const { return coords.data() + i * static_cast<size_t>(dim); }
    Window sampling_window() const { return core.dilated(dilation_margin); }
};

/// Draw N ~ Poisson(t * volume(w)), then N i.i.d. uniform points in w.
/// Deterministic in (w, t, seed). Exact duplicate points are redrawn and
/// counted in duplicate_rejections. Throws on t < 0, ResourceError when the
/// expected count exceeds 2^31.
PointSample sample_poisson(const Window& w, double t, uint64_t seed);

/// Same, but sampling on the Minkowski-dilated window. Functionals restrict
/// summation to the undilated core; the collar removes boundary effects for
/// directed-forest edge lengths.
PointSample sample_poisson_dilated(const Window& w, double t, double margin,
                                   uint64_t seed);

/// Smallest margin m with exp(-kappa_d m^d / 2) < 1e-6: beyond m the chance
/// that a half-space nearest-neighbour edge of a core point reaches outside
/// the collar is negligible.
double default_dilation_margin(int d);

/// Copy with one point appended (used by the difference operators; the input
/// is never mutated).
PointSample append_point(const PointSample& s, std::span<const double> z);

class Rng;

/// One uniform point of w, written to out[0..dim). Boxes sample per axis,
/// balls reject from the bounding cube.
void uniform_point(Rng& rng, const Window& w, double* out);

/// CSV export: header "x0,...,x{d-1}", one point per row, 17 significant
/// digits, locale-independent.
void write_points_csv(std::ostream& os, const PointSample& s);

/// Locale-independent shortest-17-digit formatting used by every CSV writer.
void append_double(std::string& out, double v);

} // namespace rspan
