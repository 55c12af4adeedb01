#include "rspan/geom.hpp"

#include <cmath>
#include <stdexcept>

namespace rspan {

double gamma_function(double x) {
    if (!(x > 0.0))
        throw std::domain_error("gamma_function: requires x > 0");
    // Lanczos, g = 7, 9 coefficients.
    static constexpr double g = 7.0;
    static constexpr double coef[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    if (x < 0.5) {
        // Reflection keeps the series argument >= 0.5.
        return M_PI / (std::sin(M_PI * x) * gamma_function(1.0 - x));
    }
    const double z = x - 1.0;
    double acc = coef[0];
    for (int i = 1; i < 9; ++i)
        acc += coef[i] / (z + static_cast<double>(i));
    const double t = z + g + 0.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

double unit_ball_volume(int d) {
    if (d < 1)
        throw std::invalid_argument("unit_ball_volume: dimension must be >= 1");
    return std::pow(M_PI, 0.5 * d) / gamma_function(0.5 * d + 1.0);
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return s;
}

double dist2(const double* a, const double* b, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

Window Window::box(std::vector<double> lower, std::vector<double> upper) {
    if (lower.empty() || lower.size() != upper.size())
        throw std::invalid_argument("Window::box: lower/upper must be nonempty and of equal dimension");
    for (size_t i = 0; i < lower.size(); ++i) {
        if (!(lower[i] <= 0.0 && 0.0 <= upper[i]))
            throw std::invalid_argument("Window::box: window must contain the origin");
        if (!(upper[i] > lower[i]))
            throw std::invalid_argument("Window::box: upper must exceed lower on every axis");
    }
    Window w;
    w.kind_ = WindowKind::Box;
    w.dim_ = static_cast<int>(lower.size());
    w.lower_ = std::move(lower);
    w.upper_ = std::move(upper);
    return w;
}

Window Window::ball(int dim, double radius) {
    if (dim < 1)
        throw std::invalid_argument("Window::ball: dimension must be >= 1");
    if (!(radius > 0.0))
        throw std::invalid_argument("Window::ball: radius must be positive");
    Window w;
    w.kind_ = WindowKind::Ball;
    w.dim_ = dim;
    w.radius_ = radius;
    return w;
}

double Window::volume() const {
    if (kind_ == WindowKind::Box) {
        double v = 1.0;
        for (size_t i = 0; i < lower_.size(); ++i)
            v *= upper_[i] - lower_[i];
        return v;
    }
    return unit_ball_volume(dim_) * std::pow(radius_, dim_);
}

bool Window::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_)
        throw std::invalid_argument("Window::contains: dimension mismatch");
    if (kind_ == WindowKind::Box) {
        for (int i = 0; i < dim_; ++i)
            if (x[i] < lower_[i] || x[i] > upper_[i])
                return false;
        return true;
    }
    return norm2(x) <= radius_ * radius_;
}

Window Window::dilated(double margin) const {
    if (margin < 0.0)
        throw std::invalid_argument("Window::dilated: margin must be >= 0");
    if (margin == 0.0)
        return *this;
    if (kind_ == WindowKind::Box) {
        std::vector<double> lo = lower_, hi = upper_;
        for (int i = 0; i < dim_; ++i) {
            lo[i] -= margin;
            hi[i] += margin;
        }
        return box(std::move(lo), std::move(hi));
    }
    return ball(dim_, radius_ + margin);
}

void Window::bounding_box(std::vector<double>& lo, std::vector<double>& hi) const {
    if (kind_ == WindowKind::Box) {
        lo = lower_;
        hi = upper_;
    } else {
        lo.assign(static_cast<size_t>(dim_), -radius_);
        hi.assign(static_cast<size_t>(dim_), radius_);
    }
}

double Window::diameter() const {
    if (kind_ == WindowKind::Ball)
        return 2.0 * radius_;
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
        const double side = upper_[i] - lower_[i];
        s += side * side;
    }
    return std::sqrt(s);
}

bool Window::covers(const Window& outer, const Window& inner) {
    if (outer.dim() != inner.dim())
        return false;
    const int d = outer.dim();
    if (inner.kind() == WindowKind::Box && outer.kind() == WindowKind::Box) {
        for (int i = 0; i < d; ++i)
            if (inner.lower_[i] < outer.lower_[i] || inner.upper_[i] > outer.upper_[i])
                return false;
        return true;
    }
    if (inner.kind() == WindowKind::Ball && outer.kind() == WindowKind::Ball)
        return inner.radius_ <= outer.radius_;
    if (inner.kind() == WindowKind::Ball && outer.kind() == WindowKind::Box) {
        for (int i = 0; i < d; ++i)
            if (-inner.radius_ < outer.lower_[i] || inner.radius_ > outer.upper_[i])
                return false;
        return true;
    }
    // Box inside ball: the farthest corner decides.
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        const double m = std::max(std::abs(inner.lower_[i]), std::abs(inner.upper_[i]));
        s += m * m;
    }
    return s <= outer.radius_ * outer.radius_;
}

Direction::Direction(std::vector<double> e) : e_(std::move(e)) {
    if (e_.empty())
        throw std::invalid_argument("Direction: empty vector");
    const double n2 = norm2(e_);
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
        throw std::invalid_argument("Direction: vector is not unit length");
}

Direction Direction::axis(int dim, int axis, double sign) {
    if (dim < 1 || axis < 0 || axis >= dim)
        throw std::invalid_argument("Direction::axis: bad axis");
    std::vector<double> e(static_cast<size_t>(dim), 0.0);
    e[static_cast<size_t>(axis)] = sign < 0.0 ? -1.0 : 1.0;
    return Direction(std::move(e));
}

Direction Direction::normalized(std::vector<double> v) {
    const double n = std::sqrt(norm2(v));
    if (!(n > 0.0))
        throw std::invalid_argument("Direction::normalized: zero vector");
    for (double& c : v)
        c /= n;
    return Direction(std::move(v));
}

bool halfspace_contains(const Direction& e, std::span<const double> x,
                        std::span<const double> y) {
    if (e.dim() != static_cast<int>(x.size()) || x.size() != y.size())
        throw std::invalid_argument("halfspace_contains: dimension mismatch");
    double dot = 0.0;
    for (int i = 0; i < e.dim(); ++i)
        dot += e[i] * (y[i] - x[i]);
    return dot <= 0.0;
}

} // namespace rspan
