#pragma once

#include "imexrelax/r13_boundary.hpp"
#include "imexrelax/spatial.hpp"
#include "imexrelax/system.hpp"

#include <functional>
#include <limits>
#include <optional>

namespace imexrelax {

/// Weight mu(eps) of the added/subtracted diffusion term.
struct Penalization {
    enum Kind { Exponential, Constant } kind = Exponential;
    double value = 0.0;  ///< mu itself for Constant

    static Penalization exponential() { return {Exponential, 0.0}; }
    static Penalization constant(double mu) { return {Constant, mu}; }
    /// exp(-eps^2/dx) or the constant, clamped to [0,1].
    double mu(double eps, double dx) const;
};

/// Scalar closure with its derivative.
struct Closure {
    std::function<double(double)> f;
    std::function<double(double)> df;

    static Closure linear(double slope);
    static Closure zero() { return linear(0.0); }
};

// ---------------------------------------------------------------------------

/// y' = z, eps z' = (1 - y^2) z - y with the z equation implicit.
class VanDerPol final : public SplitSystem {
public:
    explicit VanDerPol(double eps);

    std::string name() const override { return "vdp"; }
    std::vector<std::string> variables() const override { return {"y", "z"}; }
    Index points() const override { return 1; }
    double epsilon() const override { return eps_; }

    VectorXd explicit_rhs(const VectorXd& y, double t) const override;
    VectorXd implicit_rhs(const VectorXd& y, double t) const override;
    VectorXd full_rhs(const VectorXd& y, double t) const override;
    VectorXd stage_solve(const VectorXd& known, double gamma, double t) const override;
    std::optional<double> manifold_residual(const VectorXd& y) const override;

    /// Leading-order manifold z = y/(1 - y^2).
    static double manifold_z(double y);

private:
    double eps_;
};

// ---------------------------------------------------------------------------

/// Broadwell kinetic model on a periodic mesh: (rho, m, z) with convection
/// explicit through WENO flux splitting and the z relaxation implicit.
class Broadwell final : public SplitSystem {
public:
    Broadwell(Grid1D grid, double eps, int weno_order = 5);

    std::string name() const override { return "broadwell"; }
    std::vector<std::string> variables() const override { return {"rho", "m", "z"}; }
    Index points() const override { return grid_.n; }
    double epsilon() const override { return eps_; }
    double dx() const override { return grid_.dx(); }
    double max_speed(const VectorXd&) const override { return 1.0; }
    VectorXd coordinates(Index) const override { return grid_.points(); }

    VectorXd explicit_rhs(const VectorXd& y, double t) const override;
    VectorXd implicit_rhs(const VectorXd& y, double t) const override;
    VectorXd full_rhs(const VectorXd& y, double t) const override;
    VectorXd stage_solve(const VectorXd& known, double gamma, double t) const override;
    std::optional<double> manifold_residual(const VectorXd& y) const override;

    static double equilibrium_z(double rho, double m) { return (rho * rho + m * m) / (2.0 * rho); }
    /// rho, m given pointwise; z placed on its equilibrium.
    VectorXd equilibrium_state(const VectorXd& rho, const VectorXd& m) const;
    const Grid1D& grid() const { return grid_; }

private:
    void check_density(const VectorXd& y) const;
    Grid1D grid_;
    double eps_;
    int order_;
};

// ---------------------------------------------------------------------------

/// u_t + v_x = 0, eps^2 v_t + p(u)_x = -(v - q(u)) on a periodic staggered
/// mesh: u at the grid points, v halfway between point j and j+1.
class Diffusive2x2 final : public SplitSystem {
public:
    /// ImexI needs an explicit penalization; pass Penalization::constant(0)
    /// for the unpenalized explicit-limit configuration.
    Diffusive2x2(Grid1D grid, double eps, Closure p, Closure q, Mode mode, std::optional<Penalization> pen);

    std::string name() const override { return "diffusive2x2"; }
    std::vector<std::string> variables() const override { return {"u", "v"}; }
    Index points() const override { return grid_.n; }
    double epsilon() const override { return eps_; }
    Mode mode() const override { return mode_; }
    double dx() const override { return grid_.dx(); }
    double max_speed(const VectorXd& y) const override;
    VectorXd coordinates(Index var) const override;

    VectorXd explicit_rhs(const VectorXd& y, double t) const override;
    VectorXd implicit_rhs(const VectorXd& y, double t) const override;
    VectorXd full_rhs(const VectorXd& y, double t) const override;
    VectorXd stage_solve(const VectorXd& known, double gamma, double t) const override;
    std::optional<double> manifold_residual(const VectorXd& y) const override;

    double mu() const { return mu_; }
    /// Discrete limit relation v = q(u) - D+ p(u) at the v points.
    VectorXd equilibrium_v(const VectorXd& u) const;
    const Grid1D& grid() const { return grid_; }

private:
    Grid1D grid_;
    double eps_;
    Closure p_, q_;
    Mode mode_;
    double mu_;
};

// ---------------------------------------------------------------------------

struct KlfOptions {
    double m = 2.0;
    double tol = 1e-6;  ///< floor inside (|b(u)_x| + tol)^alpha
    Closure b = Closure::linear(1.0);
    Closure q = Closure::zero();
    Penalization penalization = Penalization::exponential();
    double newton_tol = 1e-12;
    int newton_max_iter = 50;
};

/// Solves V + kappa |V|^(m-1) V = r for kappa >= 0 (safeguarded Newton,
/// closed form for m = 1 and m = 2).
double solve_power_source(double r, double kappa, double m, double tol = 1e-12, int max_iter = 50);

/// Kawashima-LeFloch model u_t + v_x = 0, eps^2 v_t + b(u)_x = -|v|^(m-1) v + q(u)
/// on the staggered periodic mesh, in partitioned form: the nonlinear
/// diffusivity is frozen at the stage predictor, u_x stays live.
class KawashimaLeFloch final : public PartitionedSystem {
public:
    KawashimaLeFloch(Grid1D grid, double eps, KlfOptions opts);

    std::string name() const override { return "klf"; }
    std::vector<std::string> variables() const override { return {"u", "v"}; }
    Index points() const override { return grid_.n; }
    double epsilon() const override { return eps_; }
    double dx() const override { return grid_.dx(); }
    VectorXd coordinates(Index var) const override;

    VectorXd explicit_rhs(const VectorXd& y, double t) const override;
    VectorXd implicit_rhs_frozen(const VectorXd& frozen, const VectorXd& y, double t) const override;
    VectorXd stage_solve_frozen(const VectorXd& known, double gamma, double t, const VectorXd& frozen) const override;
    VectorXd full_rhs(const VectorXd& y, double t) const override;
    std::optional<double> manifold_residual(const VectorXd& y) const override;

    double alpha() const { return -1.0 + 1.0 / opts_.m; }
    double mu() const { return mu_; }
    /// max |b(u)_x| over the v points.
    double max_slope(const VectorXd& y) const;
    const Grid1D& grid() const { return grid_; }

private:
    VectorXd diffusivity(const VectorXd& u) const;  ///< (|D+ b| + tol)^alpha at v points
    Grid1D grid_;
    double eps_;
    KlfOptions opts_;
    double mu_;
};

// ---------------------------------------------------------------------------

struct R13Options {
    double g = 0.0;
    double alpha = 0.7;
    double beta = 0.3;
    Penalization penalization = Penalization::exponential();
    bool periodic = false;
    BoundarySet boundary_set = BoundarySet::Set124;
    int extrapolation_degree = 0;  ///< 0 selects the fixed second-order formulas
};

/// Diffusively scaled R13 channel system for (u~, v, w~) on cell centers
/// of [-1, 1], penalized by mu u~_xx / 2 split between both parts.
class R13Channel final : public SplitSystem {
public:
    R13Channel(Index n, double eps, R13Options opts);

    std::string name() const override { return "r13"; }
    std::vector<std::string> variables() const override { return {"u", "v", "w"}; }
    Index points() const override { return grid_.n; }
    double epsilon() const override { return eps_; }
    double dx() const override { return grid_.dx(); }
    VectorXd coordinates(Index) const override { return grid_.points(); }

    VectorXd explicit_rhs(const VectorXd& y, double t) const override;
    VectorXd implicit_rhs(const VectorXd& y, double t) const override;
    VectorXd full_rhs(const VectorXd& y, double t) const override;
    VectorXd stage_solve(const VectorXd& known, double gamma, double t) const override;
    std::optional<double> manifold_residual(const VectorXd& y) const override;

    /// Padded copies with ghosts filled by the configured boundary treatment.
    R13Fields padded(const VectorXd& y) const;
    WallData wall(WallSide side) const;
    double mu() const { return mu_; }
    const Grid1D& grid() const { return grid_; }
    const R13Options& options() const { return opts_; }

private:
    void fill(R13Fields& f) const;
    Grid1D grid_;
    double eps_;
    R13Options opts_;
    double mu_;
};

/// Scaled steady state (u~, v, w~) sampled at the grid's cell centers.
VectorXd r13_steady_state(const Grid1D& grid, double g, double alpha, double beta, double eps);

// ---------------------------------------------------------------------------

struct StabilityBound {
    double dt_max;  ///< +inf when unbounded
    bool unstable;  ///< no positive step is stable at this wavenumber
};

/// Bound (1 - 4 eps^2 xi^2) / (4 eps^2 xi^4) for first-order IMEX-I with
/// mu = 1 and central differencing.
StabilityBound linear_stability_bound(double eps, double xi);

/// dx^2 / ((1 + alpha) max_ux^alpha); max_ux should already include TOL
/// when alpha < 0.
double klf_parabolic_cfl(double alpha, double max_ux, double dx);

enum class Scaling { Hyperbolic, Diffusive };

/// Hyperbolic: p' >= f'^2. Diffusive: q'^2 < p'/eps^2.
bool subcharacteristic_check(double dp_min, double slope_abs_max, double eps, Scaling scaling);

}  // namespace imexrelax
