#pragma once

#include <span>
#include <vector>

namespace rspan {

/// Volume of the d-dimensional unit ball, pi^{d/2} / Gamma(d/2 + 1).
/// Throws std::invalid_argument for d < 1.
double unit_ball_volume(int d);

/// Gamma function for x > 0 (Lanczos approximation, g = 7, 9 terms;
/// relative error below 1e-13 over the positive axis).
/// Throws std::domain_error for x <= 0.
double gamma_function(double x);

/// Squared Euclidean norm / distance, always accumulated in axis order so
/// every code path that measures the same pair produces the same bits.
double norm2(std::span<const double> x);
double dist2(const double* a, const double* b, int dim);

enum class WindowKind { Box, Ball };

/// Convex observation window containing the origin: an axis-aligned box or
/// an origin-centered ball.
class Window {
public:
    static Window box(std::vector<double> lower, std::vector<double> upper);
    static Window ball(int dim, double radius);

    WindowKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double radius() const { return radius_; }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }

    double volume() const;

    /// Closed-set membership (boundary included). Throws on dimension
    /// mismatch.
    bool contains(std::span<const double> x) const;

    /// Minkowski dilation: box sides extended by `margin` on both ends,
    /// ball radius increased by `margin`.
    Window dilated(double margin) const;

    /// Axis-aligned bounding box (equals the box itself for Box windows).
    void bounding_box(std::vector<double>& lo, std::vector<double>& hi) const;

    /// Largest distance between two window points.
    double diameter() const;

    /// True iff every point of `inner` lies in `outer` (exact for all four
    /// kind combinations).
    static bool covers(const Window& outer, const Window& inner);

private:
    Window() = default;
    WindowKind kind_ = WindowKind::Box;
    int dim_ = 0;
    std::vector<double> lower_, upper_; // Box
    double radius_ = 0.0;               // Ball
};

/// Unit vector in R^d (validated to |norm - 1| <= 1e-12).
class Direction {
public:
    explicit Direction(std::vector<double> e);
    static Direction axis(int dim, int axis, double sign = 1.0);
    static Direction normalized(std::vector<double> v);

    int dim() const { return static_cast<int>(e_.size()); }
    std::span<const double> coords() const { return e_; }
    double operator[](int i) const { return e_[static_cast<size_t>(i)]; }

private:
    std::vector<double> e_;
};

/// True iff y lies in the half-space H_{x,e} = { y : <e, y - x> <= 0 }.
bool halfspace_contains(const Direction& e, std::span<const double> x,
                        std::span<const double> y);

} // namespace rspan
