#pragma once

#include <Eigen/Dense>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace imexrelax {

/// One Runge-Kutta tableau (A, b, c).
struct ButcherTableau {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;

    Eigen::Index stages() const { return b.size(); }
};

/// Explicit/implicit pair sharing a stage count.
struct ImexTableau {
    std::string name;
    ButcherTableau expl;  ///< strictly lower triangular
    ButcherTableau impl;  ///< lower triangular (DIRK)

    Eigen::Index stages() const { return impl.stages(); }
};

struct Violation {
    std::string what;
    double magnitude = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

enum class TableauClass { TypeA, TypeCK, ARS };

struct Classification {
    TableauClass kind;
    std::string diagnostic;
};

struct PropertyReport {
    bool stiffly_accurate = false;
    bool globally_stiffly_accurate = false;
    int satisfied_order = 0;
    bool nonstandard_coupling = false;  ///< c-tilde differs from c
    std::vector<Violation> failed_conditions;
};

/// Thrown on shape mismatch between the two halves of a pair.
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnclassifiableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kRowSumTol = 1e-12;
inline constexpr double kStiffTol = 1e-12;
inline constexpr double kOrderTol = 1e-10;
inline constexpr double kPivotTol = 1e-14;

ValidationReport validate(const ImexTableau& t);
Classification classify(const ImexTableau& t);
bool is_stiffly_accurate(const ButcherTableau& t);
bool is_globally_stiffly_accurate(const ImexTableau& t);
PropertyReport check_order_conditions(const ImexTableau& t, int target_order);

/// Parses a single registry block; validation failures raise ParseError.
ImexTableau load_tableau(const std::string& text);

/// Parses every block of a registry file, keyed by scheme name. Empty
/// slots (stages 0) are kept as names only and raise when fetched.
class TableauRegistry {
public:
    static TableauRegistry from_text(const std::string& text);
    static TableauRegistry from_file(const std::string& path);

    bool contains(const std::string& name) const;
    ImexTableau get(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, std::string> blocks_;
    std::vector<std::string> order_;
};

/// Writes t in registry format with round-trip decimal precision.
std::string serialize(const ImexTableau& t);

/// Registry shipped with the library, located at build time.
std::string default_registry_path();

}  // namespace imexrelax
