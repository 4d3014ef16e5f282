#include "gradgeom/rng.hpp"

#include <cmath>

namespace gradgeom {

double Rng::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    // Box-Muller on two fresh uniforms; u1 kept away from 0
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
}

std::vector<double> Rng::normal_vector(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = normal();
    return v;
}

std::vector<double> Rng::rademacher_vector(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = sign();
    return v;
}

}  // namespace gradgeom
