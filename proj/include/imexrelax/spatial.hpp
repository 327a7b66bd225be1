#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <utility>

namespace imexrelax {

using Eigen::Index;
using Eigen::VectorXd;

enum class BoundaryKind { Periodic, GhostCells };
enum class NodeKind { CellCenters, Nodes };

/// Uniform 1-D mesh. Point j (0-based) sits at x_left + (j + 1/2) dx for
/// cell centers and at x_left + j dx for nodes.
struct Grid1D {
    double x_left = 0.0;
    double x_right = 1.0;
    Index n = 4;
    BoundaryKind boundary = BoundaryKind::Periodic;
    int ghost = 1;
    NodeKind node_kind = NodeKind::CellCenters;

    double dx() const { return (x_right - x_left) / static_cast<double>(n); }
    double x(Index j) const {
        return x_left + (static_cast<double>(j) + (node_kind == NodeKind::CellCenters ? 0.5 : 0.0)) * dx();
    }
    /// Interface k lies between points k-1 and k.
    double face(Index k) const { return x(k) - 0.5 * dx(); }
    VectorXd points() const;
    VectorXd faces() const;  ///< n+1 interface positions
};

struct GridError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SingularSystemError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Builds a grid and checks n >= 4, dx > 0, ghost >= 1.
Grid1D make_grid(double x_left, double x_right, Index n, BoundaryKind boundary, int ghost,
                 NodeKind node_kind = NodeKind::CellCenters);

/// Interior values wrapped periodically into a padded array.
VectorXd pad_periodic(const Eigen::Ref<const VectorXd>& interior, int ghost);

/// Rejects NaN or infinite entries.
void require_finite(const Eigen::Ref<const VectorXd>& f, const char* what);

enum class Side { LeftOfInterface, RightOfInterface };

inline constexpr double kWenoEps = 1e-6;

/// WENO interface values from padded data with `ghost` layers each side.
/// LeftOfInterface uses the left-biased stencil (upwind for f+). Result
/// entry k is the value at the interface between points k-1 and k.
VectorXd weno_reconstruct(const Eigen::Ref<const VectorXd>& padded, int ghost, Side side, int order);

/// Global Lax-Friedrichs splitting f = f+ + f-.
template <class DerivedF, class DerivedU>
std::pair<VectorXd, VectorXd> split_flux(const Eigen::MatrixBase<DerivedF>& f, double alpha,
                                         const Eigen::MatrixBase<DerivedU>& u) {
    if (alpha <= 0.0 && f.size() > 0 && (f.array() != f(0)).any())
        throw std::invalid_argument("split_flux: alpha must be positive for a nonconstant flux");
    VectorXd plus = 0.5 * (f + alpha * u);
    VectorXd minus = 0.5 * (f - alpha * u);
    return {std::move(plus), std::move(minus)};
}

/// -(fhat_{k+1} - fhat_k)/dx for each of the n points.
template <class Derived>
VectorXd conservative_divergence(const Eigen::MatrixBase<Derived>& fhat, double dx) {
    const Index n = fhat.size() - 1;
    return -(fhat.tail(n) - fhat.head(n)) / dx;
}

struct DerivativeMode {
    enum Kind { Central, Upwind, Blended } kind = Central;
    int sign = 1;     ///< wind direction for upwind parts: +1 uses the backward difference
    double mu = 1.0;  ///< weight of the central part when blended

    static DerivativeMode central() { return {Central, 1, 1.0}; }
    static DerivativeMode upwind(int sign) { return {Upwind, sign, 0.0}; }
    static DerivativeMode blended(double mu, int sign = 1) { return {Blended, sign, mu}; }
};

VectorXd first_derivative(const Eigen::Ref<const VectorXd>& padded, int ghost, double dx, DerivativeMode mode);

/// (f_{j+1} - 2 f_j + f_{j-1}) / dx^2 at interior points.
VectorXd second_derivative(const Eigen::Ref<const VectorXd>& padded, int ghost, double dx);

/// Row i reads lower(i) x(i-1) + diag(i) x(i) + upper(i) x(i+1). For cyclic
/// systems lower(0) couples to x(n-1) and upper(n-1) to x(0); otherwise those
/// two entries are ignored.
struct TridiagonalSystem {
    VectorXd lower, diag, upper, rhs;
    bool cyclic = false;
};

struct TridiagonalSolution {
    VectorXd x;
    double residual = 0.0;  ///< max-norm of A x - rhs
};

VectorXd apply_tridiagonal(const TridiagonalSystem& sys, const Eigen::Ref<const VectorXd>& x);
TridiagonalSolution solve_tridiagonal(const TridiagonalSystem& sys);

}  // namespace imexrelax
