#include "imexrelax/models.hpp"

#include <array>
#include <cmath>

namespace imexrelax {

Broadwell::Broadwell(Grid1D grid, double eps, int weno_order) : grid_(grid), eps_(eps), order_(weno_order) {
    if (!(eps > 0.0)) throw ConfigError("Broadwell needs eps > 0");
    if (grid_.boundary != BoundaryKind::Periodic) throw ConfigError("Broadwell runs on a periodic mesh");
    if (order_ != 3 && order_ != 5) throw ConfigError("Broadwell WENO order must be 3 or 5");
    grid_.ghost = order_ == 5 ? 3 : 2;
}

void Broadwell::check_density(const VectorXd& y) const {
    if ((component(y, 0).array() <= 0.0).any()) throw StageError("Broadwell density must stay positive");
}

VectorXd Broadwell::explicit_rhs(const VectorXd& y, double) const {
    const Index n = grid_.n;
    const int gw = grid_.ghost;
    check_density(y);
    const double a = max_speed(y);
    VectorXd out(3 * n);
    // Flux (m, z, m): rho and z are advected by m, m by z.
    const std::array<Index, 3> flux_of{1, 2, 1};
    for (Index k = 0; k < 3; ++k) {
        const VectorXd uk = pad_periodic(component(y, k), gw);
        const VectorXd fk = pad_periodic(component(y, flux_of[k]), gw);
        auto [fp, fm] = split_flux(fk, a, uk);
        const VectorXd fhat = weno_reconstruct(fp, gw, Side::LeftOfInterface, order_) +
                              weno_reconstruct(fm, gw, Side::RightOfInterface, order_);
        out.segment(k * n, n) = conservative_divergence(fhat, grid_.dx());
    }
    return out;
}

VectorXd Broadwell::implicit_rhs(const VectorXd& y, double) const {
    const Index n = grid_.n;
    VectorXd out = VectorXd::Zero(3 * n);
    const auto rho = component(y, 0).array();
    const auto m = component(y, 1).array();
    const auto z = component(y, 2).array();
    out.segment(2 * n, n) = (rho * rho + m * m - 2.0 * rho * z) / eps_;
    return out;
}

VectorXd Broadwell::full_rhs(const VectorXd& y, double t) const { return explicit_rhs(y, t) + implicit_rhs(y, t); }

VectorXd Broadwell::stage_solve(const VectorXd& known, double gamma, double) const {
    check_density(known);
    if (gamma == 0.0) return known;
    const Index n = grid_.n;
    VectorXd y = known;
    const auto rho = component(known, 0).array();
    const auto m = component(known, 1).array();
    y.segment(2 * n, n) = (eps_ * component(known, 2).array() + gamma * (rho * rho + m * m)) / (eps_ + 2.0 * gamma * rho);
    return y;
}

std::optional<double> Broadwell::manifold_residual(const VectorXd& y) const {
    const auto rho = component(y, 0).array();
    const auto m = component(y, 1).array();
    const auto z = component(y, 2).array();
    return (rho * rho + m * m - 2.0 * rho * z).abs().maxCoeff();
}

VectorXd Broadwell::equilibrium_state(const VectorXd& rho, const VectorXd& m) const {
    const Index n = grid_.n;
    VectorXd y(3 * n);
    y << rho, m, (rho.array().square() + m.array().square()) / (2.0 * rho.array());
    return y;
}

}  // namespace imexrelax
