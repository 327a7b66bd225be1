// One PASS/FAIL/SKIP line per acceptance criterion; exits nonzero on any FAIL.
#include "helpers.hpp"

#include "imexrelax/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace imexrelax;
using namespace testutil;

namespace {

// Pinned tolerances.
constexpr double kOrderMin = 1.8;
constexpr double kPeriodicOrderMax = 2.3;
constexpr double kPeriodicSeconds = 120.0;
constexpr double kSteadyDistance = 1e-3;
constexpr long kSteadySteps = 100;
constexpr double kSteadyRatio = 25.0;
constexpr double kSteadySeconds = 10.0;
constexpr double kSweepSeconds = 120.0;
constexpr double kHeatSeconds = 30.0;
constexpr double kKlfExplicitFactor = 5.0;
constexpr double kKlfPenalizedFactor = 2.0;
constexpr double kKlfStepRatio = 150.0;
constexpr double kKlfStepRatioTol = 0.2;  // relative
constexpr double kKlfSeconds = 60.0;
constexpr double kBroadwellSeconds = 120.0;
constexpr double kSplitTol = 1e-13;
constexpr double kConserveTol = 1e-12;
constexpr double kManifoldRel = 1e-6;
constexpr double kGhostTol = 1e-11;
constexpr double kLog3Tol = 1e-14;

// Published N = 50 errors of the periodic run, for the factor-2 report.
constexpr double kPublishedErrors[3] = {8.062e-4, 2.530e-3, 1.089e-2};

int failures = 0;

struct Verdict {
    enum { Pass, Fail, Skip } status = Pass;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (status != Skip) status = Fail;
            detail << " [violated: " << what << "]";
        }
    }
};

void criterion(const std::string& name, const std::function<void(Verdict&)>& body) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(v);
    } catch (const std::exception& e) {
        v.status = Verdict::Fail;
        v.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const char* tag = v.status == Verdict::Pass ? "PASS" : v.status == Verdict::Fail ? "FAIL" : "SKIP";
    if (v.status == Verdict::Fail) ++failures;
    std::printf("%s %s:%s (%.1fs)\n", tag, name.c_str(), v.detail.str().c_str(), secs);
    std::fflush(stdout);
}

ExperimentConfig load(const std::string& file) {
    return ExperimentConfig::from(KeyValueConfig::from_file(std::string(IMEXRELAX_SOURCE_DIR) + "/configs/" + file));
}

double seconds_of(const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, const char* f = "%.3f") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

std::string join(const std::vector<double>& xs, const char* f = "%.3f") {
    std::string s;
    for (double x : xs) s += (s.empty() ? "" : "/") + fmt(x, f);
    return s;
}

bool all_at_least(const std::vector<double>& xs, double lo) {
    if (xs.empty()) return false;
    for (double x : xs)
        if (!(x >= lo)) return false;
    return true;
}

// ---------------------------------------------------------------------------

void periodic() {
    criterion("R13 periodic self-convergence (ratio-3 ladder 50/150/450)", [](Verdict& v) {
        const auto cfg = load("r13_periodic.ini");
        ExperimentReport rep;
        const double secs = seconds_of([&] { rep = run_experiment(cfg); });
        v.require(!rep.aborted, "no run aborted");
        const double e = cfg.eps.front();
        const char* comps[3] = {"u", "v", "w"};
        for (int c = 0; c < 3; ++c) {
            const auto o = rep.orders(e, comps[c], Norm::L1);
            v.detail << " " << comps[c] << " order " << join(o);
            v.require(!o.empty() && o.front() >= kOrderMin && o.front() <= kPeriodicOrderMax,
                      std::string(comps[c]) + " order in [1.8, 2.3]");
        }
        v.detail << "; N=50 L1 errors";
        for (int c = 0; c < 3; ++c) {
            const auto err = rep.errors(e, comps[c], Norm::L1);
            if (err.empty()) continue;
            const double ratio = err.front() / kPublishedErrors[c];
            v.detail << " " << comps[c] << " " << fmt(err.front(), "%.3e") << " (x" << fmt(ratio, "%.2f")
                     << " vs published" << (ratio <= 2.0 && ratio >= 0.5 ? ", within 2" : ", outside 2, not gated") << ")";
        }
        v.detail << "; runtime " << fmt(secs, "%.1f") << "s";
        v.require(secs <= kPeriodicSeconds, "runtime <= 120 s");
    });
}

void steady() {
    criterion("R13 wall-bounded steady state (N=50, dt=2.5dx, t_end=10)", [](Verdict& v) {
        const auto cfg = load("r13_steady.ini");
        ExperimentReport rep;
        const double secs = seconds_of([&] { rep = run_experiment(cfg); });
        v.require(!rep.aborted, "run completed");
        const double steps = rep.metrics["steps"], dist = rep.metrics["final_distance"];
        const double ratio = rep.metrics["step_ratio"], mono = rep.metrics["monotone_after"];
        v.detail << " steps " << steps << ", distance " << fmt(dist, "%.3e") << ", monotone after t=5 "
                 << (mono == 1.0 ? "yes" : "no") << ", step advantage " << fmt(ratio, "%.2f") << "x, runtime "
                 << fmt(secs, "%.2f") << "s";
        v.require(steps == static_cast<double>(kSteadySteps), "exactly 100 steps");
        v.require(dist <= kSteadyDistance, "distance <= 1e-3");
        v.require(mono == 1.0, "monotone decay after t = 5");
        v.require(std::abs(ratio - kSteadyRatio) <= 1e-12, "step advantage 25x");
        v.require(secs <= kSteadySeconds, "runtime <= 10 s");
    });
}

void eps_sweep() {
    criterion("R13 penalized eps-sweep (dt=0.3dx, ratio-3 ladder 20/60/180)", [](Verdict& v) {
        const auto cfg = load("r13_eps_sweep.ini");
        ExperimentReport rep;
        const double secs = seconds_of([&] { rep = run_experiment(cfg); });
        for (double e : cfg.eps) {
            v.detail << " eps " << fmt(e, "%.0e") << ":";
            for (const char* c : {"u", "v", "w"}) {
                const auto o = rep.orders(e, c, Norm::L1);
                v.detail << " " << c << " " << join(o);
                if (e <= 1e-2) {
                    v.require(all_at_least(o, kOrderMin), std::string(c) + " order >= 1.8 at eps " + fmt(e, "%.0e"));
                } else {
                    // Lower order is allowed here but must carry the flag.
                    for (const auto& row : rep.rows) {
                        if (row.eps != e || row.component != c || row.norm != Norm::L1 || std::isnan(row.order))
                            continue;
                        if (row.order < kOrderMin) {
                            v.require(row.flag == "degraded", "eps 1e-1 low order flagged");
                            v.detail << " (flagged)";
                        }
                    }
                }
            }
            v.detail << ";";
        }
        v.detail << " runtime " << fmt(secs, "%.1f") << "s";
        v.require(secs <= kSweepSeconds, "runtime <= 120 s");
    });

    // Informational: the finer ladder crosses the instability of the split at moderate eps.
    auto cfg = load("r13_eps_sweep.ini");
    cfg.sizes = {50, 150, 450};
    cfg.eps = {1e-2};
    const auto rep = run_experiment(cfg);
    std::printf("INFO R13 eps-sweep on 50/150/450 at eps 1e-2: %s", rep.aborted ? "aborted" : "completed");
    for (const auto& n : rep.notes) std::printf(" (%s)", n.c_str());
    std::printf("\n");
}

void heat() {
    criterion("Heat-limit oracle (diffusive 2x2, eps=1e-6, dt=0.25dx)", [](Verdict& v) {
        const auto pen_cfg = load("heat_limit.ini");
        const auto exp_cfg = load("heat_limit_explicit.ini");
        ExperimentReport pen, expl;
        const double secs = seconds_of([&] {
            pen = run_experiment(pen_cfg);
            expl = run_experiment(exp_cfg);
        });
        const double e = pen_cfg.eps.front();
        v.require(!pen.aborted, "penalized run stable");
        const auto ou = pen.orders(e, "u", Norm::L1);
        const auto err = pen.errors(e, "u", Norm::L1);
        v.detail << " penalized u errors " << join(err, "%.2e") << ", orders " << join(ou);
        v.require(all_at_least(ou, kOrderMin), "penalized order >= 1.8");

        const auto xerr = expl.errors(e, "u", Norm::L1);
        bool unstable = expl.aborted;
        for (double x : xerr) unstable = unstable || !std::isfinite(x) || x > 1.0;
        if (xerr.size() >= 2) unstable = unstable || xerr.back() > xerr.front();
        v.detail << "; unpenalized " << (expl.aborted ? "aborted" : "errors " + join(xerr, "%.2e"));
        v.require(unstable, "unpenalized run blows up or its error grows");
        v.detail << "; runtime " << fmt(secs, "%.2f") << "s";
        v.require(secs <= kHeatSeconds, "runtime <= 30 s");
    });
}

void klf() {
    criterion("KLF m=2 demonstration (N=96, eps=1e-4)", [](Verdict& v) {
        const auto cfg = load("klf_demo.ini");
        ExperimentReport rep;
        const double secs = seconds_of([&] { rep = run_experiment(cfg); });
        auto& m = rep.metrics;
        const double ref = m["indicator_reference"];
        const double floor = std::max(ref, 1.0);  // a clean reference scores 0
        const double e1 = m["indicator_explicit_t1.00"], e177 = m["indicator_explicit_t1.77"];
        const double p177 = m["indicator_penalized_t1.77"];
        const double steps_e = m["steps_explicit_t1.77"], steps_p = m["steps_penalized_t1.77"];
        const double step_ratio = steps_e / steps_p;
        v.detail << " indicator explicit T=1 " << e1 << ", explicit T=1.77 " << e177 << ", penalized T=1.77 "
                 << p177 << ", reference " << ref << "; steps " << steps_e << " vs " << steps_p << " ("
                 << fmt(step_ratio, "%.1f") << "x), runtime " << fmt(secs, "%.1f") << "s";
        bool smooth_t1 = e1 <= kKlfPenalizedFactor * floor;
        for (const auto& row : rep.rows)
            if (row.component.rfind("u@1.00", 0) == 0 && row.flag == "blowup") smooth_t1 = false;
        v.require(smooth_t1, "explicit run smooth at T = 1");
        v.require(e177 >= kKlfExplicitFactor * floor, "explicit indicator >= 5x reference at T = 1.77");
        v.require(p177 <= kKlfPenalizedFactor * floor, "penalized indicator within 2x reference");
        v.require(std::abs(step_ratio / kKlfStepRatio - 1.0) <= kKlfStepRatioTol, "about 150x fewer steps");
        v.require(secs <= kKlfSeconds, "runtime <= 60 s");
    });
}

void broadwell() {
    criterion("Broadwell eps-sweep (WENO5, smooth well-prepared data)", [](Verdict& v) {
        const auto cfg = load("broadwell_sweep.ini");
        auto euler = cfg;
        euler.scheme = "imex-euler";
        euler.eps = {1e-8};
        ExperimentReport gsa, low;
        const double secs = seconds_of([&] {
            gsa = run_experiment(cfg);
            low = run_experiment(euler);
        });
        v.require(!gsa.aborted && !low.aborted, "runs completed");
        for (double e : cfg.eps) {
            const auto o = gsa.orders(e, "rho", Norm::L1);
            v.detail << " " << cfg.scheme << " rho orders eps " << fmt(e, "%.0e") << " " << join(o) << ";";
            v.require(all_at_least(o, kOrderMin), "rho order >= 1.8 at eps " + fmt(e, "%.0e"));
        }
        const auto orho = low.orders(1e-8, "rho", Norm::L1), oz = low.orders(1e-8, "z", Norm::L1);
        v.detail << " imex-euler eps 1e-8 rho " << join(orho) << " z " << join(oz) << ";";
        v.require(!oz.empty() && oz.size() == orho.size(), "non-GSA orders available");
        for (std::size_t i = 0; i < std::min(oz.size(), orho.size()); ++i)
            v.require(oz[i] < orho[i], "z order strictly below rho order");
        v.detail << " runtime " << fmt(secs, "%.1f") << "s";
        v.require(secs <= kBroadwellSeconds, "runtime <= 120 s");
    });

    criterion("Broadwell z-order ranking of transcribed high-order pairs", [](Verdict& v) {
        const auto reg = TableauRegistry::from_file(default_registry_path());
        bool have = true;
        try {
            have = check_order_conditions(reg.get("bhr-553"), 3).satisfied_order >= 2;
        } catch (const std::exception&) {
            have = false;
        }
        if (!have) {
            v.status = Verdict::Skip;
            v.detail << " coefficient slot for bhr-553 is empty in the registry";
            return;
        }
        auto cfg = load("broadwell_sweep.ini");
        cfg.eps = {1e-4};
        cfg.scheme = "bhr-553";
        const auto bhr = run_experiment(cfg).orders(1e-4, "z", Norm::L1);
        cfg.scheme = "ars-343";
        const auto ars = run_experiment(cfg).orders(1e-4, "z", Norm::L1);
        v.detail << " bhr z " << join(bhr) << ", ars z " << join(ars);
        v.require(!bhr.empty() && !ars.empty() && bhr.back() >= ars.back(), "BHR z order >= ARS z order");
    });
}

// ---------------------------------------------------------------------------

Grid1D periodic_nodes(Index n, int ghost) {
    return make_grid(0.0, 2.0 * std::numbers::pi, n, BoundaryKind::Periodic, ghost, NodeKind::Nodes);
}

double split_defect(const SplitSystem& sys, const VectorXd& y) {
    const VectorXd sum = sys.explicit_rhs(y, 0.3) + sys.implicit_rhs(y, 0.3);
    const VectorXd full = sys.full_rhs(y, 0.3);
    return (sum - full).cwiseAbs().maxCoeff() / std::max(1.0, full.cwiseAbs().maxCoeff());
}

void properties() {
    criterion("Property suites", [](Verdict& v) {
        const auto reg = TableauRegistry::from_file(default_registry_path());

        // Tableau checker truths.
        const ImexTableau midpoint{"midpoint", bt(mat({{0, 0}, {0.5, 0}}), vec({0, 1}), vec({0, 0.5})),
                                   bt(mat({{0, 0}, {0, 0.5}}), vec({0, 1}), vec({0, 0.5}))};
        v.require(check_order_conditions(implicit_euler_pair(), 3).satisfied_order == 1, "implicit Euler order 1");
        v.require(check_order_conditions(midpoint, 3).satisfied_order == 2, "midpoint order 2");
        v.require(is_stiffly_accurate(implicit_euler_pair().impl), "implicit Euler SA");
        v.require(!is_globally_stiffly_accurate(implicit_euler_pair()), "implicit Euler pair not GSA");
        v.require(is_globally_stiffly_accurate(reg.get("gsa-442")), "gsa-442 GSA");
        v.require(!is_stiffly_accurate(midpoint.impl), "midpoint not SA");
        v.detail << " tableau truths;";

        // Splitting cancellation on every model.
        double worst = 0.0;
        const Index n = 24;
        for (unsigned s = 0; s < 3; ++s) {
            VectorXd pos = random_vector(3 * n, s);
            pos.head(n).array() += 2.0;
            worst = std::max(worst, split_defect(VanDerPol(1e-3), random_vector(2, s)));
            worst = std::max(worst, split_defect(Broadwell(periodic_nodes(n, 3), 1e-3), pos));
            for (Mode mode : {Mode::ImexI, Mode::ImexE})
                worst = std::max(worst, split_defect(Diffusive2x2(periodic_nodes(n, 1), 1e-3, Closure::linear(1.3),
                                                                  Closure::linear(0.2), mode,
                                                                  Penalization::exponential()),
                                                     random_vector(2 * n, s)));
            worst = std::max(worst,
                             split_defect(KawashimaLeFloch(periodic_nodes(n, 1), 1e-2, KlfOptions{}), random_vector(2 * n, s)));
            for (bool periodic : {true, false}) {
                R13Options o;
                o.g = 1.0;
                o.periodic = periodic;
                worst = std::max(worst, split_defect(R13Channel(n, 1e-4, o), random_vector(3 * n, s)));
            }
        }
        v.detail << " splitting defect " << fmt(worst, "%.1e") << ";";
        v.require(worst <= kSplitTol, "splitting cancels to 1e-13");

        // Conservation on periodic Broadwell.
        const Broadwell b(periodic_nodes(40, 3), 1e-6);
        VectorXd y0 = random_vector(120, 9);
        y0.head(40).array() += 2.0;
        double drift = 0.0;
        for (const char* name : {"gsa-442", "ars-343", "imex-euler"}) {
            const VectorXd y1 = imex_step(b, reg.get(name), y0, 0.0, 0.05);
            drift = std::max(drift, std::abs(y1.head(40).sum() - y0.head(40).sum()) * b.dx());
            drift = std::max(drift, std::abs(y1.segment(40, 40).sum() - y0.segment(40, 40).sum()) * b.dx());
        }
        v.detail << " conservation drift " << fmt(drift, "%.1e") << ";";
        v.require(drift <= kConserveTol, "conservation to 1e-12");

        // Manifold projection of a GSA run at eps = 1e-10.
        const Diffusive2x2 d(periodic_nodes(32, 1), 1e-10, Closure::linear(1), Closure::zero(), Mode::ImexI,
                             Penalization::exponential());
        VectorXd y(64);
        y << d.coordinates(0).array().sin().matrix(), random_vector(32, 4);
        StepControl c;
        c.dt_mode = StepControl::HyperbolicCFL;
        c.value = 0.5;
        c.t_end = 5 * 0.5 * d.dx();
        const auto traj = integrate(d, reg.get("gsa-442"), y, c);
        double rel = 0.0;
        for (double r : traj.manifold) rel = std::max(rel, r / traj.final_state().cwiseAbs().maxCoeff());
        v.detail << " manifold " << fmt(rel, "%.1e") << ";";
        v.require(!traj.manifold.empty() && rel <= kManifoldRel, "manifold residual <= 1e-6 |state|");

        // Ghost-fill exactness on wall-compatible polynomials.
        double ghost_err = 0.0;
        for (int degree : {1, 2, 3}) {
            const Index cells = 20;
            const double dx = 2.0 / cells, g = 1.0, eps = 1e-2, alpha = 0.7, beta = 0.3;
            auto poly = [&](double a0, double a1, double x) {
                double s = a0 + a1 * (x + 1.0), p = x + 1.0;
                for (int k = 2; k <= degree; ++k) {
                    p *= x + 1.0;
                    s += 0.1 * k * p;
                }
                return s;
            };
            const double uW = -eps * (-g - eps * beta * g) / alpha;
            R13Fields ref;
            ref.ghost = 3;
            ref.u.resize(cells + 6);
            ref.v.resize(cells + 6);
            ref.w.resize(cells + 6);
            for (Index k = 0; k < cells + 6; ++k) {
                const double x = -1.0 + (static_cast<double>(k - 3) + 0.5) * dx;
                ref.u(k) = poly(uW, 0.4, x);
                ref.v(k) = poly(-g, g, x);
                ref.w(k) = poly(-g, 0.3, x);
            }
            R13Fields f = ref;
            f.u.head(3).setZero();
            f.v.head(3).setZero();
            f.w.head(3).setZero();
            WallData wall;
            wall.g = g;
            wall.alpha = alpha;
            wall.beta = beta;
            wall.eps = eps;
            wall.dx = dx;
            wall.side = WallSide::Left;
            apply_ghost_lagrange(f, wall, degree);
            ghost_err = std::max({ghost_err, (f.u.head(3) - ref.u.head(3)).cwiseAbs().maxCoeff(),
                                  (f.v.head(3) - ref.v.head(3)).cwiseAbs().maxCoeff(),
                                  (f.w.head(3) - ref.w.head(3)).cwiseAbs().maxCoeff()});
        }
        v.detail << " ghost fill " << fmt(ghost_err, "%.1e") << ";";
        v.require(ghost_err <= kGhostTol, "ghost fill exact on polynomials");

        // Rate estimator on powers of three.
        double log3_err = 0.0;
        double p = 1.0;
        for (int k = 1; k <= 6; ++k) {
            p *= 3.0;
            log3_err = std::max(log3_err, std::abs(convergence_rate_log3(p * 1e-4, 1e-4) - k));
        }
        v.require(convergence_rate_log3(9e-4, 1e-4) == 2.0, "log3(9e-4 / 1e-4) == 2");
        v.detail << " log3 " << fmt(log3_err, "%.1e");
        v.require(log3_err <= kLog3Tol, "log3 exact on powers of 3");
    });
}

}  // namespace

int main() {
    periodic();
    steady();
    eps_sweep();
    heat();
    klf();
    broadwell();
    properties();
    std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
