#pragma once

#include "imexrelax/system.hpp"
#include "imexrelax/tableau.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace imexrelax {

struct BlowUpError : std::runtime_error {
    BlowUpError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
    double time;
};

struct StepControl {
    enum DtMode { FixedDt, HyperbolicCFL, ParabolicCFL } dt_mode = FixedDt;
    double value = 0.1;  ///< dt for FixedDt, the CFL number otherwise
    double t_end = 1.0;
    double newton_tol = 1e-12;
    int newton_max_iter = 50;
    std::vector<double> sample_times;  ///< states kept at these times (plus start and end)
    bool record_manifold = true;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<VectorXd> states;
    std::vector<double> step_times;
    std::vector<double> manifold;  ///< per-step constraint residual when available
    long steps = 0;
    double dt = 0.0;

    const VectorXd& final_state() const { return states.back(); }
};

/// Stage values and derivatives of one step, for diagnostics.
struct StepDetail {
    std::vector<VectorXd> stages;
    std::vector<VectorXd> expl;
    std::vector<VectorXd> impl;
    VectorXd quadrature;  ///< y0 + h sum(btilde E + b I)
    VectorXd result;      ///< last stage for GSA tableaux, quadrature otherwise
};

StepDetail imex_step_detail(const SplitSystem& sys, const ImexTableau& tab, const VectorXd& y0, double t0, double h);
VectorXd imex_step(const SplitSystem& sys, const ImexTableau& tab, const VectorXd& y0, double t0, double h);

/// Rejects tableaux violating the weight condition of the system's mode.
void check_partitioned_tableau(Mode mode, const ImexTableau& tab);

StepDetail imex_step_partitioned_detail(const PartitionedSystem& sys, const ImexTableau& tab, const VectorXd& y0,
                                        double t0, double h);
VectorXd imex_step_partitioned(const PartitionedSystem& sys, const ImexTableau& tab, const VectorXd& y0, double t0,
                               double h);

/// Time step implied by the control for this system and state.
double resolve_dt(const SplitSystem& sys, const StepControl& control, const VectorXd& y0);

using StepObserver = std::function<void(double t, const VectorXd& y)>;

Trajectory integrate(const SplitSystem& sys, const ImexTableau& tab, const VectorXd& y0, const StepControl& control,
                     const StepObserver& observer = {});

/// Constraint residual of the system; throws if the model has none.
double manifold_residual(const SplitSystem& sys, const VectorXd& y);

}  // namespace imexrelax
