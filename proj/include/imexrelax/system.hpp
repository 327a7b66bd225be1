#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace imexrelax {

using Eigen::Index;
using Eigen::VectorXd;

/// IMEX-I keeps the stiff flux implicit; IMEX-E treats the whole
/// hyperbolic part explicitly and only the relaxation source implicitly.
enum class Mode { ImexI, ImexE };

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct StageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A semi-discrete model y' = E(y, t) + I(y, t). The state is one flat
/// vector holding each variable's points contiguously, variables in order.
class SplitSystem {
public:
    virtual ~SplitSystem() = default;

    virtual std::string name() const = 0;
    virtual std::vector<std::string> variables() const = 0;
    virtual Index points() const = 0;  ///< points per variable
    virtual double epsilon() const = 0;
    virtual Mode mode() const { return Mode::ImexI; }
    /// Mesh spacing, 0 for ODEs.
    virtual double dx() const { return 0.0; }
    /// Largest non-stiff characteristic speed, used by hyperbolic CFL.
    virtual double max_speed(const VectorXd&) const { return 1.0; }
    /// Positions of each variable's points (for sampling and comparison).
    virtual VectorXd coordinates(Index var) const;

    virtual VectorXd explicit_rhs(const VectorXd& y, double t) const = 0;
    virtual VectorXd implicit_rhs(const VectorXd& y, double t) const = 0;
    /// Unsplit right-hand side, assembled without the add/subtract terms.
    virtual VectorXd full_rhs(const VectorXd& y, double t) const = 0;
    /// Returns Y solving Y = known + gamma * I(Y, t).
    virtual VectorXd stage_solve(const VectorXd& known, double gamma, double t) const = 0;
    /// Max-norm of the algebraic constraint g(u, v); empty if the model has none.
    virtual std::optional<double> manifold_residual(const VectorXd&) const { return std::nullopt; }

    virtual bool partitioned() const { return false; }

    Index size() const { return static_cast<Index>(variables().size()) * points(); }
    auto component(const VectorXd& y, Index var) const { return y.segment(var * points(), points()); }
    auto component(VectorXd& y, Index var) const { return y.segment(var * points(), points()); }
};

/// Systems of the form y' = F(y*, y), non-stiff in the frozen argument y*.
class PartitionedSystem : public SplitSystem {
public:
    virtual VectorXd implicit_rhs_frozen(const VectorXd& frozen, const VectorXd& y, double t) const = 0;
    virtual VectorXd stage_solve_frozen(const VectorXd& known, double gamma, double t,
                                        const VectorXd& frozen) const = 0;

    VectorXd implicit_rhs(const VectorXd& y, double t) const override { return implicit_rhs_frozen(y, y, t); }
    VectorXd stage_solve(const VectorXd& known, double gamma, double t) const override {
        return stage_solve_frozen(known, gamma, t, known);
    }
    bool partitioned() const override { return true; }
};

}  // namespace imexrelax
