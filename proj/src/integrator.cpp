#include "imexrelax/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace imexrelax {

VectorXd SplitSystem::coordinates(Index) const {
    return VectorXd::LinSpaced(points(), 0.0, static_cast<double>(points() - 1));
}

namespace {

// Stage i's derivative is needed if a later stage or the quadrature uses it.
bool needed(const Eigen::MatrixXd& A, const VectorXd& b, Index i, bool gsa) {
    const Index s = b.size();
    for (Index k = i + 1; k < s; ++k)
        if (A(k, i) != 0.0) return true;
    return !gsa && b(i) != 0.0;
}

template <class Solve, class Implicit, class Explicit>
StepDetail run_stages(const ImexTableau& tab, const VectorXd& y0, double t0, double h, Solve&& solve,
                      Implicit&& implicit, Explicit&& expl) {
    const Index s = tab.stages();
    const bool gsa = is_globally_stiffly_accurate(tab);
    const auto& At = tab.expl.A;
    const auto& A = tab.impl.A;
    StepDetail d;
    d.stages.resize(s);
    d.expl.assign(s, VectorXd());
    d.impl.assign(s, VectorXd());

    for (Index i = 0; i < s; ++i) {
        VectorXd known = y0;
        for (Index j = 0; j < i; ++j) {
            if (At(i, j) != 0.0) known.noalias() += (h * At(i, j)) * d.expl[j];
            if (A(i, j) != 0.0) known.noalias() += (h * A(i, j)) * d.impl[j];
        }
        const double gamma = h * A(i, i);
        const double ti = t0 + tab.impl.c(i) * h;
        VectorXd Y;
        try {
            if (gamma != 0.0) {
                Y = solve(known, gamma, ti);
                // Recovering I from the stage avoids forming 1/eps^2 terms twice.
                d.impl[i] = (Y - known) / gamma;
            } else {
                Y = known;
                if (needed(A, tab.impl.b, i, gsa)) d.impl[i] = implicit(Y, ti);
            }
            if (needed(At, tab.expl.b, i, gsa)) d.expl[i] = expl(Y, t0 + tab.expl.c(i) * h);
        } catch (const StageError& e) {
            throw StageError("stage " + std::to_string(i + 1) + ": " + e.what());
        } catch (const std::exception& e) {
            throw StageError("stage " + std::to_string(i + 1) + ": " + e.what());
        }
        d.stages[i] = std::move(Y);
    }

    d.quadrature = y0;
    for (Index i = 0; i < s; ++i) {
        if (tab.expl.b(i) != 0.0) {
            if (d.expl[i].size() == 0) d.expl[i] = expl(d.stages[i], t0 + tab.expl.c(i) * h);
            d.quadrature.noalias() += (h * tab.expl.b(i)) * d.expl[i];
        }
        if (tab.impl.b(i) != 0.0) {
            if (d.impl[i].size() == 0) d.impl[i] = implicit(d.stages[i], t0 + tab.impl.c(i) * h);
            d.quadrature.noalias() += (h * tab.impl.b(i)) * d.impl[i];
        }
    }
    d.result = gsa ? d.stages[s - 1] : d.quadrature;
    return d;
}

}  // namespace

StepDetail imex_step_detail(const SplitSystem& sys, const ImexTableau& tab, const VectorXd& y0, double t0,
                            double h) {
    return run_stages(
        tab, y0, t0, h, [&](const VectorXd& k, double g, double t) { return sys.stage_solve(k, g, t); },
        [&](const VectorXd& y, double t) { return sys.implicit_rhs(y, t); },
        [&](const VectorXd& y, double t) { return sys.explicit_rhs(y, t); });
}

VectorXd imex_step(const SplitSystem& sys, const ImexTableau& tab, const VectorXd& y0, double t0, double h) {
    return imex_step_detail(sys, tab, y0, t0, h).result;
}

void check_partitioned_tableau(Mode mode, const ImexTableau& tab) {
    if (mode == Mode::ImexI) {
        if ((tab.expl.b - tab.impl.b).cwiseAbs().maxCoeff() > kStiffTol)
            throw ConfigError("partitioned IMEX-I stepping requires b = btilde; '" + tab.name + "' violates it");
    } else if (!is_globally_stiffly_accurate(tab)) {
        throw ConfigError("partitioned IMEX-E stepping requires a globally stiffly accurate tableau; '" + tab.name +
                          "' is not");
    }
}

StepDetail imex_step_partitioned_detail(const PartitionedSystem& sys, const ImexTableau& tab, const VectorXd& y0,
                                        double t0, double h) {
    check_partitioned_tableau(sys.mode(), tab);
    // The frozen argument of stage i is its explicit predictor, which is
    // exactly the known part of the stage equation.
    return run_stages(
        tab, y0, t0, h,
        [&](const VectorXd& k, double g, double t) { return sys.stage_solve_frozen(k, g, t, k); },
        [&](const VectorXd& y, double t) { return sys.implicit_rhs_frozen(y, y, t); },
        [&](const VectorXd& y, double t) { return sys.explicit_rhs(y, t); });
}

VectorXd imex_step_partitioned(const PartitionedSystem& sys, const ImexTableau& tab, const VectorXd& y0, double t0,
                               double h) {
    return imex_step_partitioned_detail(sys, tab, y0, t0, h).result;
}

double resolve_dt(const SplitSystem& sys, const StepControl& control, const VectorXd& y0) {
    if (!(control.value > 0.0)) throw ConfigError("time step / CFL value must be positive");
    switch (control.dt_mode) {
        case StepControl::FixedDt:
            return control.value;
        case StepControl::HyperbolicCFL: {
            const double speed = sys.max_speed(y0);
            if (sys.dx() <= 0.0 || speed <= 0.0) throw ConfigError("hyperbolic CFL needs a mesh and a positive speed");
            return control.value * sys.dx() / speed;
        }
        case StepControl::ParabolicCFL:
            if (sys.dx() <= 0.0) throw ConfigError("parabolic CFL needs a mesh");
            return control.value * sys.dx() * sys.dx();
    }
    return control.value;
}

Trajectory integrate(const SplitSystem& sys, const ImexTableau& tab, const VectorXd& y0, const StepControl& control,
                     const StepObserver& observer) {
    const auto* part = sys.partitioned() ? dynamic_cast<const PartitionedSystem*>(&sys) : nullptr;
    if (part) check_partitioned_tableau(sys.mode(), tab);
    if (y0.size() != sys.size()) throw ConfigError("initial state has the wrong size");
    if (!y0.allFinite()) throw BlowUpError("non-finite initial state", 0.0);

    Trajectory traj;
    traj.dt = resolve_dt(sys, control, y0);
    const double t_end = control.t_end;
    // Step count chosen so that the last step lands on t_end; a tiny relative
    // slack keeps exact multiples from producing a sliver step.
    const long nsteps = std::max(1L, static_cast<long>(std::ceil(t_end / traj.dt - 1e-9)));

    std::vector<double> samples = control.sample_times;
    std::sort(samples.begin(), samples.end());
    std::size_t next_sample = 0;
    while (next_sample < samples.size() && samples[next_sample] <= 0.0) ++next_sample;

    traj.times.push_back(0.0);
    traj.states.push_back(y0);
    VectorXd y = y0;
    double t = 0.0;
    for (long k = 0; k < nsteps; ++k) {
        const double t_next = k + 1 == nsteps ? t_end : static_cast<double>(k + 1) * traj.dt;
        const double h = t_next - t;
        y = part ? imex_step_partitioned(*part, tab, y, t, h) : imex_step(sys, tab, y, t, h);
        t = t_next;
        ++traj.steps;
        if (!y.allFinite()) throw BlowUpError("non-finite state at t = " + std::to_string(t), t);
        traj.step_times.push_back(t);
        if (control.record_manifold) {
            if (auto r = sys.manifold_residual(y)) traj.manifold.push_back(*r);
        }
        if (observer) observer(t, y);
        while (next_sample < samples.size() && samples[next_sample] <= t + 1e-12 * traj.dt) {
            if (k + 1 != nsteps && traj.times.back() < t) {
                traj.times.push_back(t);
                traj.states.push_back(y);
            }
            ++next_sample;
        }
    }
    traj.times.push_back(t);
    traj.states.push_back(y);
    return traj;
}

double manifold_residual(const SplitSystem& sys, const VectorXd& y) {
    auto r = sys.manifold_residual(y);
    if (!r) throw ConfigError("model '" + sys.name() + "' exposes no algebraic constraint");
    return *r;
}

}  // namespace imexrelax
