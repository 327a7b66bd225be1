#include "imexrelax/spatial.hpp"

#include <cmath>
#include <string>

namespace imexrelax {

VectorXd Grid1D::points() const {
    VectorXd p(n);
    for (Index j = 0; j < n; ++j) p(j) = x(j);
    return p;
}

VectorXd Grid1D::faces() const {
    VectorXd p(n + 1);
    for (Index k = 0; k <= n; ++k) p(k) = face(k);
    return p;
}

Grid1D make_grid(double x_left, double x_right, Index n, BoundaryKind boundary, int ghost, NodeKind node_kind) {
    if (n < 4) throw GridError("grid needs at least 4 points, got " + std::to_string(n));
    if (!(x_right > x_left)) throw GridError("grid needs x_right > x_left");
    if (ghost < 1) throw GridError("ghost width must be at least 1");
    return Grid1D{x_left, x_right, n, boundary, ghost, node_kind};
}

VectorXd pad_periodic(const Eigen::Ref<const VectorXd>& interior, int ghost) {
    const Index n = interior.size();
    if (ghost > n) throw GridError("ghost width exceeds periodic grid size");
    VectorXd out(n + 2 * ghost);
    out.segment(ghost, n) = interior;
    out.head(ghost) = interior.tail(ghost);
    out.tail(ghost) = interior.head(ghost);
    return out;
}

void require_finite(const Eigen::Ref<const VectorXd>& f, const char* what) {
    if (!f.allFinite()) throw std::domain_error(std::string(what) + ": non-finite entry");
}

namespace {

// Left-biased value at the right edge of the middle point of (a,b,c,d,e).
double weno5(double a, double b, double c, double d, double e) {
    const double q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
    const double q1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
    const double q2 = (2.0 * c + 5.0 * d - e) / 6.0;
    const double b0 = 13.0 / 12.0 * std::pow(a - 2.0 * b + c, 2) + 0.25 * std::pow(a - 4.0 * b + 3.0 * c, 2);
    const double b1 = 13.0 / 12.0 * std::pow(b - 2.0 * c + d, 2) + 0.25 * std::pow(b - d, 2);
    const double b2 = 13.0 / 12.0 * std::pow(c - 2.0 * d + e, 2) + 0.25 * std::pow(3.0 * c - 4.0 * d + e, 2);
    const double a0 = 0.1 / std::pow(kWenoEps + b0, 2);
    const double a1 = 0.6 / std::pow(kWenoEps + b1, 2);
    const double a2 = 0.3 / std::pow(kWenoEps + b2, 2);
    return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2);
}

double weno3(double a, double b, double c) {
    const double q0 = (-a + 3.0 * b) / 2.0;
    const double q1 = (b + c) / 2.0;
    const double a0 = (1.0 / 3.0) / std::pow(kWenoEps + (b - a) * (b - a), 2);
    const double a1 = (2.0 / 3.0) / std::pow(kWenoEps + (c - b) * (c - b), 2);
    return (a0 * q0 + a1 * q1) / (a0 + a1);
}

}  // namespace

VectorXd weno_reconstruct(const Eigen::Ref<const VectorXd>& padded, int ghost, Side side, int order) {
    if (order != 3 && order != 5) throw std::invalid_argument("WENO order must be 3 or 5");
    const int need = order == 5 ? 3 : 2;
    if (ghost < need)
        throw GridError("WENO" + std::to_string(order) + " needs ghost width " + std::to_string(need) + ", got " +
                        std::to_string(ghost));
    const Index n = padded.size() - 2 * ghost;
    VectorXd out(n + 1);
    // f(j) is point j of the interior; ghosts reach negative j and j >= n.
    auto f = [&](Index j) { return padded(j + ghost); };
    for (Index k = 0; k <= n; ++k) {
        if (side == Side::LeftOfInterface) {
            const Index i = k - 1;
            out(k) = order == 5 ? weno5(f(i - 2), f(i - 1), f(i), f(i + 1), f(i + 2)) : weno3(f(i - 1), f(i), f(i + 1));
        } else {
            const Index i = k;
            out(k) = order == 5 ? weno5(f(i + 2), f(i + 1), f(i), f(i - 1), f(i - 2)) : weno3(f(i + 1), f(i), f(i - 1));
        }
    }
    return out;
}

VectorXd first_derivative(const Eigen::Ref<const VectorXd>& padded, int ghost, double dx, DerivativeMode mode) {
    if (mode.kind == DerivativeMode::Blended && (mode.mu < 0.0 || mode.mu > 1.0))
        throw std::invalid_argument("blend weight mu must lie in [0,1]");
    if (ghost < 1) throw GridError("derivative needs one ghost layer");
    const Index n = padded.size() - 2 * ghost;
    const auto mid = padded.segment(ghost, n);
    const auto lft = padded.segment(ghost - 1, n);
    const auto rgt = padded.segment(ghost + 1, n);
    VectorXd central = (rgt - lft) / (2.0 * dx);
    if (mode.kind == DerivativeMode::Central) return central;
    VectorXd upwind = mode.sign >= 0 ? VectorXd((mid - lft) / dx) : VectorXd((rgt - mid) / dx);
    if (mode.kind == DerivativeMode::Upwind) return upwind;
    if (mode.mu == 1.0) return central;
    if (mode.mu == 0.0) return upwind;
    return (1.0 - mode.mu) * upwind + mode.mu * central;
}

VectorXd second_derivative(const Eigen::Ref<const VectorXd>& padded, int ghost, double dx) {
    if (ghost < 1) throw GridError("second derivative needs one ghost layer");
    const Index n = padded.size() - 2 * ghost;
    return (padded.segment(ghost + 1, n) - 2.0 * padded.segment(ghost, n) + padded.segment(ghost - 1, n)) / (dx * dx);
}

VectorXd apply_tridiagonal(const TridiagonalSystem& sys, const Eigen::Ref<const VectorXd>& x) {
    const Index n = sys.diag.size();
    VectorXd y = sys.diag.cwiseProduct(x);
    for (Index i = 1; i < n; ++i) y(i) += sys.lower(i) * x(i - 1);
    for (Index i = 0; i + 1 < n; ++i) y(i) += sys.upper(i) * x(i + 1);
    if (sys.cyclic) {
        y(0) += sys.lower(0) * x(n - 1);
        y(n - 1) += sys.upper(n - 1) * x(0);
    }
    return y;
}

namespace {

VectorXd thomas(const VectorXd& lo, const VectorXd& di, const VectorXd& up, const VectorXd& rhs) {
    const Index n = di.size();
    VectorXd cp(n), dp(n);
    double piv = di(0);
    if (std::abs(piv) == 0.0) throw SingularSystemError("zero pivot in row 1");
    cp(0) = up(0) / piv;
    dp(0) = rhs(0) / piv;
    for (Index i = 1; i < n; ++i) {
        piv = di(i) - lo(i) * cp(i - 1);
        if (piv == 0.0 || !std::isfinite(piv))
            throw SingularSystemError("zero pivot in row " + std::to_string(i + 1));
        cp(i) = i + 1 < n ? up(i) / piv : 0.0;
        dp(i) = (rhs(i) - lo(i) * dp(i - 1)) / piv;
    }
    VectorXd x(n);
    x(n - 1) = dp(n - 1);
    for (Index i = n - 2; i >= 0; --i) x(i) = dp(i) - cp(i) * x(i + 1);
    return x;
}

}  // namespace

TridiagonalSolution solve_tridiagonal(const TridiagonalSystem& sys) {
    const Index n = sys.diag.size();
    if (n < 2) throw std::invalid_argument("tridiagonal system needs n >= 2");
    if (sys.lower.size() != n || sys.upper.size() != n || sys.rhs.size() != n)
        throw std::invalid_argument("tridiagonal bands must all have length n");

    TridiagonalSolution sol;
    if (!sys.cyclic) {
        sol.x = thomas(sys.lower, sys.diag, sys.upper, sys.rhs);
    } else {
        if (n < 3) throw std::invalid_argument("cyclic tridiagonal system needs n >= 3");
        // Rank-one correction: A = B + u v^T with B tridiagonal.
        const double alpha = sys.upper(n - 1);  // bottom-left corner
        const double beta = sys.lower(0);       // top-right corner
        const double gamma = sys.diag(0) != 0.0 ? -sys.diag(0) : -1.0;
        VectorXd bb = sys.diag;
        bb(0) -= gamma;
        bb(n - 1) -= alpha * beta / gamma;
        VectorXd x = thomas(sys.lower, bb, sys.upper, sys.rhs);
        VectorXd u = VectorXd::Zero(n);
        u(0) = gamma;
        u(n - 1) = alpha;
        VectorXd z = thomas(sys.lower, bb, sys.upper, u);
        const double denom = 1.0 + z(0) + beta * z(n - 1) / gamma;
        if (denom == 0.0) throw SingularSystemError("cyclic correction is singular");
        const double fact = (x(0) + beta * x(n - 1) / gamma) / denom;
        sol.x = x - fact * z;
    }
    if (!sol.x.allFinite()) throw SingularSystemError("tridiagonal solve produced non-finite values");
    sol.residual = (apply_tridiagonal(sys, sol.x) - sys.rhs).cwiseAbs().maxCoeff();
    return sol;
}

}  // namespace imexrelax
