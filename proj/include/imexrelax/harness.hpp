#pragma once

#include "imexrelax/integrator.hpp"
#include "imexrelax/models.hpp"

#include <iosfwd>
#include <limits>
#include <optional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace imexrelax {

enum class Norm { L1, Linf };

const char* to_string(Norm n);

/// L1 = sum |a - b| dx, Linf = max |a - b|.
template <class DA, class DB>
double error_norm(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b, Norm norm, double dx) {
    if (a.size() != b.size()) throw std::invalid_argument("error_norm: size mismatch");
    const auto d = (a - b).cwiseAbs();
    return norm == Norm::L1 ? d.sum() * dx : d.maxCoeff();
}

/// log3(E1/E2).
double convergence_rate_log3(double e1, double e2);
/// log_ratio(E1/E2).
double convergence_rate(double e1, double e2, double ratio);

/// Samples of the fine solution at the coarse points, for nested grids of
/// the given refinement ratio. Cell-centered grids need an odd ratio (the
/// middle fine cell shares the coarse center); node grids share every
/// ratio-th node.
VectorXd restrict_to_coarse(const VectorXd& fine, Index ratio, NodeKind kind);

/// Ratio-3 finite-volume comparator: norm of coarse minus restricted fine.
double self_convergence_error(const VectorXd& coarse, const VectorXd& fine, Norm norm, double dx_coarse);

// ---------------------------------------------------------------------------
// Configuration

/// Sectioned key = value text. Keys are stored as "section.key".
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig from_file(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

struct ExperimentConfig {
    std::string study = "convergence";  ///< convergence | steady | klf
    std::string model;
    std::map<std::string, std::string> params;  ///< model section, verbatim
    std::string scheme = "gsa-442";
    std::string registry;
    std::vector<Index> sizes;
    std::vector<double> eps;
    StepControl::DtMode dt_mode = StepControl::FixedDt;
    double dt_value = 0.1;
    double t_end = 1.0;
    double tau_end = 0.0;  ///< when positive, t_end = eps * tau_end
    std::string reference = "self";  ///< self | exact
    std::vector<double> sample_times;
    Norm norm = Norm::L1;
    std::string output;
    bool timing = true;
    unsigned seed = 0;  ///< reserved, runs are deterministic

    double param(const std::string& key, double fallback) const;
    std::string param_str(const std::string& key, const std::string& fallback) const;
    double end_time(double e) const { return tau_end > 0.0 ? e * tau_end : t_end; }

    /// Throws ConfigError on unknown models, non-increasing sizes or
    /// non-constant refinement ratios.
    static ExperimentConfig from(const KeyValueConfig& kv);
    Index ratio() const;
};

// ---------------------------------------------------------------------------
// Reports

struct ReportRow {
    std::string model, scheme;
    double eps = 0.0;
    Index n = 0;
    double dt = 0.0;
    std::string component;
    Norm norm = Norm::L1;
    double error = 0.0;
    double order = std::numeric_limits<double>::quiet_NaN();
    std::string flag = "ok";
    double seconds = 0.0;
};

struct SteadySample {
    double t;
    double distance;  ///< max-norm distance to the steady state
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    std::vector<SteadySample> history;  ///< steady-state studies
    std::map<std::string, double> metrics;
    bool aborted = false;
    std::vector<std::string> notes;

    /// Orders of one (eps, component, norm) in row order, NaNs skipped.
    std::vector<double> orders(double eps, const std::string& component, Norm norm) const;
    std::vector<double> errors(double eps, const std::string& component, Norm norm) const;
};

inline constexpr const char* kCsvHeader = "model,scheme,eps,N,dt,component,norm,error,order,flag,seconds";

void write_csv(const ExperimentReport& report, std::ostream& out, bool header = true);
std::string csv_string(const ExperimentReport& report);

// ---------------------------------------------------------------------------
// Model plumbing

std::vector<std::string> model_ids();
std::unique_ptr<SplitSystem> build_model(const ExperimentConfig& cfg, Index n, double eps);
VectorXd initial_state(const ExperimentConfig& cfg, const SplitSystem& sys);
/// Exact solution where the model and initial data admit one.
std::optional<VectorXd> exact_solution(const ExperimentConfig& cfg, const SplitSystem& sys, double t);
ImexTableau load_scheme(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Studies

ExperimentReport run_convergence_study(const ExperimentConfig& cfg);
ExperimentReport run_steady_state_study(const ExperimentConfig& cfg);
ExperimentReport run_klf_demo(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Sign changes of the second difference of a periodic profile near its
/// extrema, i.e. where u lies within band * (max u - min u) of the max or
/// the min. Entries below tau * max |second difference| are ignored. A
/// smooth profile scores 0.
int oscillation_indicator(const VectorXd& u, double tau = 1e-2, double band = 0.2);

}  // namespace imexrelax
