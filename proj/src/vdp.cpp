#include "imexrelax/models.hpp"

#include <cmath>

namespace imexrelax {

VanDerPol::VanDerPol(double eps) : eps_(eps) {
    if (!(eps > 0.0)) throw ConfigError("Van der Pol needs eps > 0");
}

VectorXd VanDerPol::explicit_rhs(const VectorXd& y, double) const { return VectorXd{{y(1), 0.0}}; }

VectorXd VanDerPol::implicit_rhs(const VectorXd& y, double) const {
    return VectorXd{{0.0, ((1.0 - y(0) * y(0)) * y(1) - y(0)) / eps_}};
}

VectorXd VanDerPol::full_rhs(const VectorXd& y, double) const {
    return VectorXd{{y(1), ((1.0 - y(0) * y(0)) * y(1) - y(0)) / eps_}};
}

VectorXd VanDerPol::stage_solve(const VectorXd& known, double gamma, double) const {
    if (gamma == 0.0) return known;
    const double y = known(0);
    const double den = eps_ - gamma * (1.0 - y * y);
    if (den == 0.0) throw StageError("Van der Pol stage is singular");
    return VectorXd{{y, (eps_ * known(1) - gamma * y) / den}};
}

std::optional<double> VanDerPol::manifold_residual(const VectorXd& y) const {
    return std::abs((1.0 - y(0) * y(0)) * y(1) - y(0));
}

double VanDerPol::manifold_z(double y) { return y / (1.0 - y * y); }

}  // namespace imexrelax
