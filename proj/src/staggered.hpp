#pragma once

// Periodic staggered differences: u lives at points j, v halfway between
// j and j+1. Dp maps point values to the v positions, Dm maps back.

#include "imexrelax/spatial.hpp"

#include <functional>

namespace imexrelax::staggered {

inline VectorXd next(const VectorXd& a) {
    const Index n = a.size();
    VectorXd r(n);
    r << a.tail(n - 1), a(0);
    return r;
}

inline VectorXd prev(const VectorXd& a) {
    const Index n = a.size();
    VectorXd r(n);
    r << a(n - 1), a.head(n - 1);
    return r;
}

inline VectorXd Dp(const VectorXd& a, double dx) { return (next(a) - a) / dx; }
inline VectorXd Dm(const VectorXd& a, double dx) { return (a - prev(a)) / dx; }
inline VectorXd avg(const VectorXd& a) { return 0.5 * (a + next(a)); }

template <class F>
VectorXd map(const VectorXd& a, const F& f) {
    return a.unaryExpr([&](double x) { return f(x); });
}

/// Solves U - s * Dm(nu * Dp(c U)) = rhs with c = b'(K) from a linearization
/// of b about K; returns U. nu sits at v positions.
inline VectorXd implicit_diffusion(const VectorXd& K, const VectorXd& rhs, double s, const VectorXd& nu,
                                   const std::function<double(double)>& b, const std::function<double(double)>& db,
                                   double dx) {
    const Index n = K.size();
    const VectorXd c = map(K, db);
    // Residual part of the linearization b(U) ~ b(K) + c (U - K).
    const VectorXd off = map(K, b) - c.cwiseProduct(K);
    const double r = s / (dx * dx);
    const VectorXd nu_prev = prev(nu);
    TridiagonalSystem sys;
    sys.cyclic = true;
    sys.lower.resize(n);
    sys.upper.resize(n);
    sys.diag.resize(n);
    for (Index j = 0; j < n; ++j) {
        const Index jp = (j + 1) % n, jm = (j + n - 1) % n;
        sys.upper(j) = -r * nu(j) * c(jp);
        sys.lower(j) = -r * nu_prev(j) * c(jm);
        sys.diag(j) = 1.0 + r * (nu(j) + nu_prev(j)) * c(j);
    }
    sys.rhs = rhs + s * Dm(nu.cwiseProduct(Dp(off, dx)), dx);
    return solve_tridiagonal(sys).x;
}

}  // namespace imexrelax::staggered
