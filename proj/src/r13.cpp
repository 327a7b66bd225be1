#include "imexrelax/models.hpp"

#include <cmath>

namespace imexrelax {

namespace {

constexpr int kGhost = 2;
constexpr int kMaxWallSweeps = 200;
constexpr double kWallSweepTol = 1e-14;

VectorXd central(const VectorXd& padded, double dx) {
    return first_derivative(padded, kGhost, dx, DerivativeMode::central());
}

}  // namespace

R13Channel::R13Channel(Index n, double eps, R13Options opts)
    : grid_(make_grid(-1.0, 1.0, n, opts.periodic ? BoundaryKind::Periodic : BoundaryKind::GhostCells, kGhost)),
      eps_(eps),
      opts_(opts) {
    if (!(eps > 0.0)) throw ConfigError("r13 needs eps > 0");
    if (!(opts.alpha > opts.beta && opts.beta > 0.0)) throw ConfigError("r13 wall coefficients need alpha > beta > 0");
    if (opts.extrapolation_degree < 0) throw ConfigError("extrapolation degree must be >= 0");
    mu_ = opts.penalization.mu(eps, grid_.dx());
}

WallData R13Channel::wall(WallSide side) const {
    return {opts_.g, opts_.alpha, opts_.beta, eps_, grid_.dx(), side};
}

void R13Channel::fill(R13Fields& f) const {
    if (opts_.periodic) {
        for (VectorXd* a : {&f.u, &f.v, &f.w}) {
            const Index n = grid_.n;
            a->head(kGhost) = a->segment(n, kGhost);
            a->tail(kGhost) = a->segment(kGhost, kGhost);
        }
        return;
    }
    for (WallSide side : {WallSide::Left, WallSide::Right}) {
        if (opts_.extrapolation_degree == 0)
            apply_ghost_second_order(f, wall(side), opts_.boundary_set);
        else
            apply_ghost_lagrange(f, wall(side), opts_.extrapolation_degree, opts_.boundary_set);
    }
}

R13Fields R13Channel::padded(const VectorXd& y) const {
    const Index n = grid_.n;
    R13Fields f;
    f.ghost = kGhost;
    for (Index k = 0; k < 3; ++k) {
        VectorXd& a = k == 0 ? f.u : (k == 1 ? f.v : f.w);
        a = VectorXd::Zero(n + 2 * kGhost);
        a.segment(kGhost, n) = component(y, k);
    }
    fill(f);
    return f;
}

VectorXd R13Channel::explicit_rhs(const VectorXd& y, double) const {
    const Index n = grid_.n;
    const double h = grid_.dx();
    const R13Fields f = padded(y);
    VectorXd out(3 * n);
    out.segment(0, n) = -central(f.v, h) - 0.5 * mu_ * second_derivative(f.u, kGhost, h);
    out.segment(n, n) = -0.5 * central(f.w, h);
    out.segment(2 * n, n).setZero();
    return out;
}

VectorXd R13Channel::implicit_rhs(const VectorXd& y, double) const {
    const Index n = grid_.n;
    const double h = grid_.dx();
    const double e2 = eps_ * eps_;
    const R13Fields f = padded(y);
    VectorXd out(3 * n);
    out.segment(0, n) = (0.5 * mu_ * second_derivative(f.u, kGhost, h)).array() + opts_.g;
    out.segment(n, n) = (-0.5 * central(f.u, h) - component(y, 1)) / e2;
    out.segment(2 * n, n) = (-central(f.v, h) - component(y, 2)) / e2;
    return out;
}

VectorXd R13Channel::full_rhs(const VectorXd& y, double) const {
    const Index n = grid_.n;
    const double h = grid_.dx();
    const double e2 = eps_ * eps_;
    const R13Fields f = padded(y);
    const VectorXd vx = central(f.v, h);
    VectorXd out(3 * n);
    out.segment(0, n) = (-vx).array() + opts_.g;
    out.segment(n, n) = -0.5 * (central(f.u, h) / e2 + central(f.w, h)) - component(y, 1) / e2;
    out.segment(2 * n, n) = (-vx - component(y, 2)) / e2;
    return out;
}

VectorXd R13Channel::stage_solve(const VectorXd& known, double gamma, double) const {
    if (gamma == 0.0) return known;
    const Index n = grid_.n;
    const double h = grid_.dx();
    const double e2 = eps_ * eps_;
    VectorXd y = known;
    component(y, 0).array() += gamma * opts_.g;

    // u~ first: (1 - gamma mu L / 2) U = K + gamma g, with wall rows carrying
    // the ghost extrapolation. Wall ghosts couple u~ to v and w~, so walled
    // stages sweep u~, v, w~ until the sweep is a fixed point.
    const double r = 0.5 * gamma * mu_ / (h * h);
    const int max_passes = opts_.periodic ? 1 : kMaxWallSweeps;
    const VectorXd rhs_u = component(y, 0);
    for (int pass = 0; pass < max_passes; ++pass) {
        const VectorXd before = y;
        if (r != 0.0) {
            TridiagonalSystem sys;
            sys.cyclic = opts_.periodic;
            sys.lower = VectorXd::Constant(n, -r);
            sys.upper = VectorXd::Constant(n, -r);
            sys.diag = VectorXd::Constant(n, 1.0 + 2.0 * r);
            sys.rhs = rhs_u;
            if (!opts_.periodic) {
                const R13Fields f = padded(y);
                const int deg = opts_.extrapolation_degree;
                const GhostAffine left = u_ghost_affine(f, wall(WallSide::Left), deg, opts_.boundary_set);
                const GhostAffine right = u_ghost_affine(f, wall(WallSide::Right), deg, opts_.boundary_set);
                sys.lower(0) = 0.0;
                sys.upper(n - 1) = 0.0;
                sys.rhs(0) += r * left.constant;
                sys.rhs(n - 1) += r * right.constant;
                sys.diag(0) -= r * left.weights[0];
                sys.upper(0) -= r * left.weights[1];
                sys.diag(n - 1) -= r * right.weights[0];
                sys.lower(n - 1) -= r * right.weights[1];
                // Weights reaching past the tridiagonal band use the current iterate.
                const VectorXd cur = component(y, 0);
                for (std::size_t i = 2; i < left.weights.size(); ++i) {
                    sys.rhs(0) += r * left.weights[i] * cur(static_cast<Index>(i));
                    sys.rhs(n - 1) += r * right.weights[i] * cur(n - 1 - static_cast<Index>(i));
                }
            }
            component(y, 0) = solve_tridiagonal(sys).x;
        }
        // v from the fresh u~, then w~ from the fresh v.
        R13Fields f = padded(y);
        component(y, 1) = (e2 * component(known, 1) - 0.5 * gamma * central(f.u, h)) / (e2 + gamma);
        f = padded(y);
        component(y, 2) = (e2 * component(known, 2) - gamma * central(f.v, h)) / (e2 + gamma);
        if (opts_.periodic) break;
        if ((y - before).cwiseAbs().maxCoeff() <= kWallSweepTol * (1.0 + y.cwiseAbs().maxCoeff())) return y;
    }
    if (!opts_.periodic) throw StageError("r13 wall stage sweeps did not converge");
    return y;
}

std::optional<double> R13Channel::manifold_residual(const VectorXd& y) const {
    const double h = grid_.dx();
    const R13Fields f = padded(y);
    const double rv = (-0.5 * central(f.u, h) - component(y, 1)).cwiseAbs().maxCoeff();
    const double rw = (-central(f.v, h) - component(y, 2)).cwiseAbs().maxCoeff();
    return std::max(rv, rw);
}

VectorXd r13_steady_state(const Grid1D& grid, double g, double alpha, double beta, double eps) {
    const Index n = grid.n;
    const VectorXd x = grid.points();
    VectorXd y(3 * n);
    y.segment(0, n) = (eps * g * (1.0 + eps * beta) / alpha + g * (1.0 - x.array().square())).matrix();
    y.segment(n, n) = g * x;
    y.segment(2 * n, n).setConstant(-g);
    return y;
}

}  // namespace imexrelax
