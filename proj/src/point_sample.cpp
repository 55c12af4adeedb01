#include "rspan/point_sample.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "rspan/rng.hpp"

namespace rspan {

void uniform_point(Rng& rng, const Window& w, double* out) {
    const int d = w.dim();
    if (w.kind() == WindowKind::Box) {
        for (int i = 0; i < d; ++i)
            out[i] = rng.uniform(w.lower()[static_cast<size_t>(i)], w.upper()[static_cast<size_t>(i)]);
        return;
    }
    const double r = w.radius();
    for (;;) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            out[i] = rng.uniform(-r, r);
            s += out[i] * out[i];
        }
        if (s <= r * r)
            return;
    }
}

namespace {

uint64_t coord_hash(const double* p, int d) {
    uint64_t h = 0x2545f4914f6cdd1dULL;
    for (int i = 0; i < d; ++i) {
        uint64_t bits;
        std::memcpy(&bits, &p[i], sizeof(bits));
        h = mix64(h ^ bits);
    }
    return h;
}

} // namespace

PointSample sample_poisson_dilated(const Window& w, double t, double margin,
                                   uint64_t seed) {
    if (t < 0.0)
        throw std::invalid_argument("sample_poisson: intensity must be >= 0");
    const Window region = w.dilated(margin);
    Rng rng(seed);
    const double mean = t * region.volume();
    const uint64_t n = rng.poisson(mean);

    PointSample s;
    s.dim = w.dim();
    s.core = w;
    s.intensity = t;
    s.seed = seed;
    s.dilation_margin = margin;
    s.coords.resize(n * static_cast<size_t>(w.dim()));

    // Exact duplicates (probability 0, but possible in floating point) are
    // rejected and redrawn.
    std::unordered_multimap<uint64_t, size_t> seen;
    seen.reserve(n * 2);
    const int d = w.dim();
    for (size_t i = 0; i < n; ++i) {
        double* p = s.coords.data() + i * static_cast<size_t>(d);
        for (;;) {
            uniform_point(rng, region, p);
            const uint64_t h = coord_hash(p, d);
            bool dup = false;
            auto [lo, hi] = seen.equal_range(h);
            for (auto it = lo; it != hi; ++it) {
                const double* q = s.coords.data() + it->second * static_cast<size_t>(d);
                if (std::memcmp(p, q, sizeof(double) * static_cast<size_t>(d)) == 0) {
                    dup = true;
                    break;
                }
            }
            if (!dup) {
                seen.emplace(h, i);
                break;
            }
            ++s.duplicate_rejections;
        }
    }
    return s;
}

PointSample sample_poisson(const Window& w, double t, uint64_t seed) {
    return sample_poisson_dilated(w, t, 0.0, seed);
}

double default_dilation_margin(int d) {
    // exp(-kappa_d m^d / 2) < 1e-6  <=>  m > (2 ln(1e6) / kappa_d)^{1/d};
    // inflated a hair so the strict inequality survives rounding.
    const double kd = unit_ball_volume(d);
    return std::pow(2.0 * std::log(1e6) / kd, 1.0 / d) * (1.0 + 1e-12);
}

PointSample append_point(const PointSample& s, std::span<const double> z) {
    if (static_cast<int>(z.size()) != s.dim)
        throw std::invalid_argument("append_point: dimension mismatch");
    PointSample out = s;
    out.coords.insert(out.coords.end(), z.begin(), z.end());
    return out;
}

void append_double(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

void write_points_csv(std::ostream& os, const PointSample& s) {
    std::string line;
    for (int i = 0; i < s.dim; ++i) {
        if (i)
            line.push_back(',');
        line += "x" + std::to_string(i);
    }
    line.push_back('\n');
    os << line;
    for (size_t i = 0; i < s.size(); ++i) {
        line.clear();
        const double* p = s.point_ptr(i);
        for (int j = 0; j < s.dim; ++j) {
            if (j)
                line.push_back(',');
            append_double(line, p[j]);
        }
        line.push_back('\n');
        os << line;
    }
}

} // namespace rspan
