#include "imexrelax/models.hpp"

#include <algorithm>
#include <cmath>

namespace imexrelax {

double Penalization::mu(double eps, double dx) const {
    const double raw = kind == Constant ? value : std::exp(-eps * eps / dx);
    return std::clamp(raw, 0.0, 1.0);
}

Closure Closure::linear(double slope) {
    return {[slope](double u) { return slope * u; }, [slope](double) { return slope; }};
}

StabilityBound linear_stability_bound(double eps, double xi) {
    if (eps == 0.0) return {std::numeric_limits<double>::infinity(), false};
    const double k = 4.0 * eps * eps * xi * xi;
    const double bound = (1.0 - k) / (k * xi * xi);
    return {bound, k >= 1.0};
}

double klf_parabolic_cfl(double alpha, double max_ux, double dx) {
    if (alpha <= -1.0) throw std::invalid_argument("diffusion coefficient degenerates for alpha <= -1");
    if (max_ux < 0.0) throw std::invalid_argument("max |u_x| must be nonnegative");
    const double nu = (1.0 + alpha) * (alpha == 0.0 ? 1.0 : std::pow(max_ux, alpha));
    return dx * dx / nu;
}

bool subcharacteristic_check(double dp_min, double slope_abs_max, double eps, Scaling scaling) {
    if (scaling == Scaling::Hyperbolic) return dp_min >= slope_abs_max * slope_abs_max;
    return slope_abs_max * slope_abs_max < dp_min / (eps * eps);
}

}  // namespace imexrelax
