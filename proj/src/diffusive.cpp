#include "imexrelax/models.hpp"

#include "staggered.hpp"

#include <cmath>

namespace imexrelax {

using namespace staggered;

namespace {

Grid1D checked_staggered_grid(Grid1D grid, const char* model) {
    if (grid.boundary != BoundaryKind::Periodic)
        throw ConfigError(std::string(model) + " runs on a periodic staggered mesh");
    return grid;
}

}  // namespace

// ---------------------------------------------------------------------------

Diffusive2x2::Diffusive2x2(Grid1D grid, double eps, Closure p, Closure q, Mode mode, std::optional<Penalization> pen)
    : grid_(checked_staggered_grid(grid, "diffusive2x2")), eps_(eps), p_(std::move(p)), q_(std::move(q)), mode_(mode) {
    if (!(eps > 0.0)) throw ConfigError("diffusive2x2 needs eps > 0");
    if (mode == Mode::ImexI && !pen)
        throw ConfigError("IMEX-I needs a penalization; request mu = 0 explicitly for the unpenalized scheme");
    mu_ = pen ? pen->mu(eps, grid_.dx()) : 0.0;
}

double Diffusive2x2::max_speed(const VectorXd& y) const {
    const double dp = map(VectorXd(component(y, 0)), p_.df).maxCoeff();
    const double c = std::sqrt(std::max(dp, 0.0));
    return mode_ == Mode::ImexE ? c / eps_ : c;
}

VectorXd Diffusive2x2::coordinates(Index var) const {
    VectorXd x = grid_.points();
    if (var == 1) x.array() += 0.5 * grid_.dx();
    return x;
}

VectorXd Diffusive2x2::equilibrium_v(const VectorXd& u) const {
    return map(avg(u), q_.f) - Dp(map(u, p_.f), grid_.dx());
}

VectorXd Diffusive2x2::explicit_rhs(const VectorXd& y, double) const {
    const Index n = grid_.n;
    const double h = grid_.dx();
    const VectorXd u = component(y, 0), v = component(y, 1);
    const VectorXd px = Dp(map(u, p_.f), h);
    VectorXd out(2 * n);
    if (mode_ == Mode::ImexI) {
        out.head(n) = -Dm(v + mu_ * px, h);
        out.tail(n).setZero();
    } else {
        out.head(n) = -Dm(v + mu_ * px, h);
        out.tail(n) = -px / (eps_ * eps_);
    }
    return out;
}

VectorXd Diffusive2x2::implicit_rhs(const VectorXd& y, double) const {
    const Index n = grid_.n;
    const double h = grid_.dx();
    const VectorXd u = component(y, 0), v = component(y, 1);
    const VectorXd px = Dp(map(u, p_.f), h);
    const VectorXd qv = map(avg(u), q_.f);
    VectorXd out(2 * n);
    out.head(n) = mu_ * Dm(px, h);
    if (mode_ == Mode::ImexI)
        out.tail(n) = (-px - v + qv) / (eps_ * eps_);
    else
        out.tail(n) = (-v + qv) / (eps_ * eps_);
    return out;
}

VectorXd Diffusive2x2::full_rhs(const VectorXd& y, double) const {
    const Index n = grid_.n;
    const double h = grid_.dx();
    const VectorXd u = component(y, 0), v = component(y, 1);
    VectorXd out(2 * n);
    out.head(n) = -Dm(v, h);
    out.tail(n) = (-Dp(map(u, p_.f), h) - v + map(avg(u), q_.f)) / (eps_ * eps_);
    return out;
}

VectorXd Diffusive2x2::stage_solve(const VectorXd& known, double gamma, double) const {
    if (gamma == 0.0) return known;
    const Index n = grid_.n;
    const double h = grid_.dx();
    const VectorXd Ku = component(known, 0), Kv = component(known, 1);
    VectorXd U = Ku;
    if (mu_ != 0.0) U = implicit_diffusion(Ku, Ku, gamma * mu_, VectorXd::Ones(n), p_.f, p_.df, h);
    VectorXd src = map(avg(U), q_.f);
    if (mode_ == Mode::ImexI) src -= Dp(map(U, p_.f), h);
    const double e2 = eps_ * eps_;
    VectorXd y(2 * n);
    y << U, (e2 * Kv + gamma * src) / (e2 + gamma);
    return y;
}

std::optional<double> Diffusive2x2::manifold_residual(const VectorXd& y) const {
    const VectorXd u = component(y, 0), v = component(y, 1);
    return (equilibrium_v(u) - v).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

double solve_power_source(double r, double kappa, double m, double tol, int max_iter) {
    if (kappa < 0.0 || m <= 0.0) throw StageError("power-law source needs kappa >= 0 and m > 0");
    if (kappa == 0.0 || r == 0.0) return r;
    if (m == 1.0) return r / (1.0 + kappa);
    const double sgn = r > 0.0 ? 1.0 : -1.0;
    const double ar = std::abs(r);
    if (m == 2.0) return sgn * 2.0 * ar / (1.0 + std::sqrt(1.0 + 4.0 * kappa * ar));

    // phi(x) = x / kappa + x^m - |r| / kappa on x >= 0, increasing.
    const double s = ar / kappa;
    auto phi = [&](double x) { return x / kappa + std::pow(x, m) - s; };
    double lo = 0.0, hi = std::min(ar, std::pow(s, 1.0 / m));
    double x = hi;
    std::string trace;
    for (int it = 0; it < max_iter; ++it) {
        const double f = phi(x);
        if (f > 0.0) hi = x; else lo = x;
        const double df = 1.0 / kappa + m * std::pow(x, m - 1.0);
        double nx = x - f / df;
        if (!(nx > lo && nx < hi) || !std::isfinite(nx)) nx = 0.5 * (lo + hi);
        if (std::abs(nx - x) <= tol * std::max(1.0, std::abs(nx)) || hi - lo <= tol * std::max(1.0, hi))
            return sgn * nx;
        if (it < 6) trace += " " + std::to_string(nx);
        x = nx;
    }
    throw StageError("power-law source Newton did not converge (r=" + std::to_string(r) + ", kappa=" +
                     std::to_string(kappa) + "), iterates:" + trace);
}

KawashimaLeFloch::KawashimaLeFloch(Grid1D grid, double eps, KlfOptions opts)
    : grid_(checked_staggered_grid(grid, "klf")), eps_(eps), opts_(std::move(opts)) {
    if (!(eps > 0.0)) throw ConfigError("klf needs eps > 0");
    if (!(opts_.m > 0.0)) throw ConfigError("klf needs m > 0");
    if (opts_.tol < 0.0) throw ConfigError("klf needs TOL >= 0");
    mu_ = opts_.penalization.mu(eps, grid_.dx());
}

VectorXd KawashimaLeFloch::coordinates(Index var) const {
    VectorXd x = grid_.points();
    if (var == 1) x.array() += 0.5 * grid_.dx();
    return x;
}

VectorXd KawashimaLeFloch::diffusivity(const VectorXd& u) const {
    const double a = alpha();
    const VectorXd bx = Dp(map(u, opts_.b.f), grid_.dx());
    if (a == 0.0) return VectorXd::Ones(bx.size());
    return bx.unaryExpr([&](double s) { return std::pow(std::abs(s) + opts_.tol, a); });
}

double KawashimaLeFloch::max_slope(const VectorXd& y) const {
    return Dp(map(VectorXd(component(y, 0)), opts_.b.f), grid_.dx()).cwiseAbs().maxCoeff();
}

namespace {

VectorXd power_law(const VectorXd& v, double m) {
    if (m == 1.0) return v;
    return v.unaryExpr([m](double x) { return std::pow(std::abs(x), m - 1.0) * x; });
}

}  // namespace

VectorXd KawashimaLeFloch::explicit_rhs(const VectorXd& y, double) const {
    const Index n = grid_.n;
    const double h = grid_.dx();
    const VectorXd u = component(y, 0), v = component(y, 1);
    VectorXd out = VectorXd::Zero(2 * n);
    VectorXd flux = v;
    if (mu_ != 0.0) flux += mu_ * diffusivity(u).cwiseProduct(Dp(map(u, opts_.b.f), h));
    out.head(n) = -Dm(flux, h);
    return out;
}

VectorXd KawashimaLeFloch::implicit_rhs_frozen(const VectorXd& frozen, const VectorXd& y, double) const {
    const Index n = grid_.n;
    const double h = grid_.dx();
    const VectorXd u = component(y, 0), v = component(y, 1);
    const VectorXd bx = Dp(map(u, opts_.b.f), h);
    VectorXd out(2 * n);
    if (mu_ != 0.0)
        out.head(n) = mu_ * Dm(diffusivity(component(frozen, 0)).cwiseProduct(bx), h);
    else
        out.head(n).setZero();
    out.tail(n) = (-bx - power_law(v, opts_.m) + map(avg(u), opts_.q.f)) / (eps_ * eps_);
    return out;
}

VectorXd KawashimaLeFloch::full_rhs(const VectorXd& y, double) const {
    const Index n = grid_.n;
    const double h = grid_.dx();
    const VectorXd u = component(y, 0), v = component(y, 1);
    VectorXd out(2 * n);
    out.head(n) = -Dm(v, h);
    out.tail(n) = (-Dp(map(u, opts_.b.f), h) - power_law(v, opts_.m) + map(avg(u), opts_.q.f)) / (eps_ * eps_);
    return out;
}

VectorXd KawashimaLeFloch::stage_solve_frozen(const VectorXd& known, double gamma, double, const VectorXd& frozen) const {
    if (gamma == 0.0) return known;
    const Index n = grid_.n;
    const double h = grid_.dx();
    const VectorXd Ku = component(known, 0), Kv = component(known, 1);
    VectorXd U = Ku;
    if (mu_ != 0.0)
        U = implicit_diffusion(Ku, Ku, gamma * mu_, diffusivity(component(frozen, 0)), opts_.b.f, opts_.b.df, h);
    const double e2 = eps_ * eps_;
    const double kappa = gamma / e2;
    const VectorXd src = -Dp(map(U, opts_.b.f), h) + map(avg(U), opts_.q.f);
    VectorXd V(n);
    for (Index j = 0; j < n; ++j)
        V(j) = solve_power_source(Kv(j) + kappa * src(j), kappa, opts_.m, opts_.newton_tol, opts_.newton_max_iter);
    VectorXd y(2 * n);
    y << U, V;
    return y;
}

std::optional<double> KawashimaLeFloch::manifold_residual(const VectorXd& y) const {
    const VectorXd u = component(y, 0), v = component(y, 1);
    const VectorXd g = -Dp(map(u, opts_.b.f), grid_.dx()) - power_law(v, opts_.m) + map(avg(u), opts_.q.f);
    return g.cwiseAbs().maxCoeff();
}

}  // namespace imexrelax
