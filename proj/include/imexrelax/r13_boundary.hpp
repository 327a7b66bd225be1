#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace imexrelax {

using Eigen::Index;
using Eigen::VectorXd;

enum class WallSide { Left, Right };

/// Which wall conditions are imposed: (1) w~ = -g, (2) v_x = g together with
/// either the slip relation for u~ (Set124) or the flux relation
/// (u~_x + eps^2 w~_x) = -2v (Set123).
enum class BoundarySet { Set124, Set123 };

struct WallData {
    double g = 1.0;
    double alpha = 0.7;
    double beta = 0.3;
    double eps = 1e-4;
    double dx = 0.04;
    WallSide side = WallSide::Left;
};

/// Padded R13 fields. Interior cell i (1-based, 1..n) is stored at i - 1 +
/// ghost, so cell 0 and cell -1 are the two slots left of the interior.
struct R13Fields {
    VectorXd u, v, w;
    int ghost = 2;

    Index n() const { return u.size() - 2 * ghost; }
};

struct DegenerateStencilError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fills ghosts from the fixed quadratic formulas: cell 0 from the wall
/// value and cells 1, 2, further cells by U_-1 = 3U_0 - 3U_1 + U_2.
void apply_ghost_second_order(R13Fields& f, const WallData& wall, BoundarySet set = BoundarySet::Set124);

/// Fills ghosts from a degree-n Lagrange interpolant through cells 0..n
/// whose cell-0 value is fixed by the wall constraint.
void apply_ghost_lagrange(R13Fields& f, const WallData& wall, int degree, BoundarySet set = BoundarySet::Set124);

struct WallResiduals {
    double r1 = 0.0;  ///< w~ + g at the wall
    double r2 = 0.0;  ///< v_x - g at the wall
    double r4 = 0.0;  ///< u~ minus its slip-relation value at the wall
};

/// Residuals of the wall conditions using a degree-`degree` interpolant
/// through cells 0..degree (2 matches the fixed formulas).
WallResiduals wall_residuals(const R13Fields& f, const WallData& wall, int degree = 2);

/// Cell-0 value of u~ as an affine function of the interior u~ cells:
/// u_0 = constant + sum_i weights[i] * u_{i+1}. The constant depends on the
/// current v and w~ (whose ghosts must already be filled).
struct GhostAffine {
    double constant = 0.0;
    std::vector<double> weights;
};

GhostAffine u_ghost_affine(const R13Fields& f, const WallData& wall, int degree, BoundarySet set);

/// Lagrange basis values l_i(x) and derivatives for nodes 0..n (unit spacing).
VectorXd lagrange_values(int degree, double x);
VectorXd lagrange_derivatives(int degree, double x);

}  // namespace imexrelax
