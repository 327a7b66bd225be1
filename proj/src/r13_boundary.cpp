#include "imexrelax/r13_boundary.hpp"

#include <cmath>
#include <string>

namespace imexrelax {

namespace {

// Wall-local view: index 1 is the cell touching the wall, 0 the first ghost,
// negative indices further out. Coordinates grow away from the wall into the
// domain in units of dx, so the wall sits at 0.5.
template <class V>
struct Local {
    V& a;
    Index n;
    int ghost;
    WallSide side;

    decltype(auto) operator()(Index i) const { return side == WallSide::Left ? a(i - 1 + ghost) : a(n - i + ghost); }
};

// d/dx = orient * (1/dx) d/ds.
double orient(WallSide s) { return s == WallSide::Left ? 1.0 : -1.0; }

// Slip relation for u~ at the wall given v and w~ there.
double slip_u(const WallData& w, double vW, double wW) {
    const double out = -orient(w.side);
    return out * w.eps * (vW - out * w.eps * w.beta * wW) / w.alpha;
}

void check_sizes(const R13Fields& f, Index need) {
    if (f.v.size() != f.u.size() || f.w.size() != f.u.size())
        throw std::invalid_argument("R13 fields must share one padded length");
    if (f.ghost < 1) throw std::invalid_argument("R13 fields need at least one ghost layer");
    if (f.n() < need)
        throw std::invalid_argument("wall extrapolation needs at least " + std::to_string(need) + " interior cells");
}

}  // namespace

VectorXd lagrange_values(int degree, double x) {
    VectorXd l(degree + 1);
    for (int i = 0; i <= degree; ++i) {
        double p = 1.0;
        for (int j = 0; j <= degree; ++j)
            if (j != i) p *= (x - j) / static_cast<double>(i - j);
        l(i) = p;
    }
    return l;
}

VectorXd lagrange_derivatives(int degree, double x) {
    VectorXd d = VectorXd::Zero(degree + 1);
    for (int i = 0; i <= degree; ++i) {
        for (int k = 0; k <= degree; ++k) {
            if (k == i) continue;
            double p = 1.0 / static_cast<double>(i - k);
            for (int j = 0; j <= degree; ++j)
                if (j != i && j != k) p *= (x - j) / static_cast<double>(i - j);
            d(i) += p;
        }
    }
    return d;
}

void apply_ghost_second_order(R13Fields& f, const WallData& wall, BoundarySet set) {
    check_sizes(f, 3);
    const Index n = f.n();
    Local u{f.u, n, f.ghost, wall.side}, v{f.v, n, f.ghost, wall.side}, w{f.w, n, f.ghost, wall.side};
    const double o = orient(wall.side);

    const double wW = -wall.g;
    w(0) = (8.0 * wW - 6.0 * w(1) + w(2)) / 3.0;
    v(0) = v(1) - o * wall.g * wall.dx;
    const double vW = 0.375 * v(0) + 0.75 * v(1) - 0.125 * v(2);
    if (set == BoundarySet::Set124) {
        u(0) = (8.0 * slip_u(wall, vW, wW) - 6.0 * u(1) + u(2)) / 3.0;
    } else {
        u(0) = u(1) + 2.0 * o * wall.dx * vW + wall.eps * wall.eps * (w(1) - w(0));
    }
    for (int k = 1; k < f.ghost; ++k) {
        for (const Local<VectorXd>* U : {&u, &v, &w}) (*U)(-k) = 3.0 * (*U)(1 - k) - 3.0 * (*U)(2 - k) + (*U)(3 - k);
    }
}

void apply_ghost_lagrange(R13Fields& f, const WallData& wall, int degree, BoundarySet set) {
    if (degree < 1) throw std::invalid_argument("Lagrange degree must be at least 1");
    check_sizes(f, degree);
    const Index n = f.n();
    Local u{f.u, n, f.ghost, wall.side}, v{f.v, n, f.ghost, wall.side}, w{f.w, n, f.ghost, wall.side};
    const double o = orient(wall.side);
    const VectorXd l = lagrange_values(degree, 0.5);
    const VectorXd dl = lagrange_derivatives(degree, 0.5);
    if (std::abs(l(0)) < 1e-14 || std::abs(dl(0)) < 1e-14)
        throw DegenerateStencilError("wall basis value or slope vanishes for degree " + std::to_string(degree));

    auto tail = [&](const Local<VectorXd>& U, const VectorXd& basis) {
        double s = 0.0;
        for (int i = 1; i <= degree; ++i) s += U(i) * basis(i);
        return s;
    };
    w(0) = (-wall.g - tail(w, l)) / l(0);
    v(0) = (o * wall.g * wall.dx - tail(v, dl)) / dl(0);
    const double vW = v(0) * l(0) + tail(v, l);
    const double wW = w(0) * l(0) + tail(w, l);
    if (set == BoundarySet::Set124) {
        u(0) = (slip_u(wall, vW, wW) - tail(u, l)) / l(0);
    } else {
        const double dw = w(0) * dl(0) + tail(w, dl);
        u(0) = (-2.0 * o * wall.dx * vW - wall.eps * wall.eps * dw - tail(u, dl)) / dl(0);
    }
    for (int k = 1; k < f.ghost; ++k) {
        const VectorXd lk = lagrange_values(degree, -static_cast<double>(k));
        for (const Local<VectorXd>* U : {&u, &v, &w}) {
            double s = 0.0;
            for (int i = 0; i <= degree; ++i) s += (*U)(i) * lk(i);
            (*U)(-k) = s;
        }
    }
}

WallResiduals wall_residuals(const R13Fields& f, const WallData& wall, int degree) {
    check_sizes(f, degree);
    const Index n = f.n();
    Local u{f.u, n, f.ghost, wall.side}, v{f.v, n, f.ghost, wall.side}, w{f.w, n, f.ghost, wall.side};
    const VectorXd l = lagrange_values(degree, 0.5);
    const VectorXd dl = lagrange_derivatives(degree, 0.5);
    auto at = [&](const Local<const VectorXd>& U, const VectorXd& basis) {
        double s = 0.0;
        for (int i = 0; i <= degree; ++i) s += U(i) * basis(i);
        return s;
    };
    const double wW = at(w, l), vW = at(v, l), uW = at(u, l);
    WallResiduals r;
    r.r1 = wW + wall.g;
    r.r2 = orient(wall.side) * at(v, dl) / wall.dx - wall.g;
    r.r4 = uW - slip_u(wall, vW, wW);
    return r;
}

GhostAffine u_ghost_affine(const R13Fields& f, const WallData& wall, int degree, BoundarySet set) {
    const int d = degree == 0 ? 2 : degree;
    check_sizes(f, d);
    const Index n = f.n();
    Local v{f.v, n, f.ghost, wall.side}, w{f.w, n, f.ghost, wall.side};
    const double o = orient(wall.side);
    const VectorXd l = lagrange_values(d, 0.5);
    const VectorXd dl = lagrange_derivatives(d, 0.5);
    double vW = 0.0, wW = 0.0, dw = 0.0;
    for (int i = 0; i <= d; ++i) {
        vW += v(i) * l(i);
        wW += w(i) * l(i);
        dw += w(i) * dl(i);
    }
    GhostAffine a;
    a.weights.resize(d);
    if (set == BoundarySet::Set124) {
        if (degree == 0) wW = -wall.g;  // the fixed formulas use the wall value directly
        a.constant = slip_u(wall, vW, wW) / l(0);
        for (int i = 1; i <= d; ++i) a.weights[i - 1] = -l(i) / l(0);
    } else {
        a.constant = (-2.0 * o * wall.dx * vW - wall.eps * wall.eps * dw) / dl(0);
        for (int i = 1; i <= d; ++i) a.weights[i - 1] = -dl(i) / dl(0);
    }
    return a;
}

}  // namespace imexrelax
