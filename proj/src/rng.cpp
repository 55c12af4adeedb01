#include "rspan/rng.hpp"

#include <cmath>

namespace rspan {

uint64_t Rng::poisson(double mean) {
    if (mean < 0.0)
        throw std::invalid_argument("Rng::poisson: negative mean");
    if (mean > 2147483648.0) // 2^31
        throw ResourceError("Rng::poisson: mean exceeds 2^31");
    if (mean == 0.0)
        return 0;
    uint64_t count = 0;
    double acc = 0.0;
    for (;;) {
        acc += -std::log(next_unit_open());
        if (acc > mean)
            return count;
        ++count;
    }
}

double Rng::normal() {
    const double u1 = next_unit_open();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace rspan
