#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rfheat/bounds.hpp"
#include "rfheat/geometry.hpp"
#include "rfheat/sobolev.hpp"
#include "rfheat/spectral.hpp"

namespace rfheat::harness {

struct TimePair {
    double s = 0.0;
    double t = 0.0;
};

struct ProfileSpec {
    enum class Kind { fit, constant, table };
    Kind kind = Kind::fit;
    double A = 1.0;
    double B = 1.0;
    std::vector<double> table_t, table_A, table_B;
    FitOptions fit{};
    double eps_fraction = 0.01;
};

struct CheckSpec {
    std::string id;
    double tol = 0.0;
};

struct Scenario {
    std::string name = "scenario";
    std::vector<RoundFactor> factors;
    ProfileSpec profile;
    AConvention a_convention = AConvention::squared;
    std::vector<TimePair> times;
    std::vector<std::vector<double>> angles;  ///< one tuple (angle per factor) per entry
    SeriesConfig series{};
    int quad_nodes = 400;
    int fd_nodes = 512;
    double fd_bump_width = 0.025;
    double time_margin = 0.99;
    std::vector<CheckSpec> checks;
    std::filesystem::path out_dir = "out";
    int threads = 0;  ///< 0 selects hardware concurrency

    ProductGeometry geometry() const { return ProductGeometry(factors); }
};

/// Parses and validates a scenario. Throws ConfigError naming the field.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::filesystem::path& path);

/// Ids accepted in a scenario's check list.
std::vector<std::string> known_checks();

/// Default tolerance of a check id (identity checks: relative residual;
/// inequality checks: allowed negative slack).
double default_tolerance(const std::string& id);

struct CheckResult {
    std::string check_id;
    std::string geometry;
    std::string kind;  ///< "identity" or "inequality"
    double s = 0.0;
    double t = 0.0;
    std::vector<double> theta;  ///< empty for checks that do not depend on angles
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  ///< rhs - lhs (inequality) or relative residual (identity)
    double tol = 0.0;
    bool pass = false;
    std::string note;
};

struct RunOptions {
    double tol_scale = 1.0;
    std::optional<AConvention> a_convention;
    std::optional<int> threads;
};

struct RunOutcome {
    Scenario scenario;
    SobolevProfile profile = SobolevProfile::constant(1.0, 1.0);
    std::optional<ProfileFit> fit;
    std::vector<CheckResult> results;
    bool success = true;
};

/// Resolves the scenario's Sobolev profile, fitting it when requested.
SobolevProfile resolve_profile(const Scenario& sc, std::optional<ProfileFit>* fit = nullptr);

/// Runs every listed check at every sample point. Failures (including thrown
/// numeric errors) are recorded per result and never abort other checks.
/// Results keep declaration order regardless of thread scheduling.
RunOutcome run(Scenario sc, const RunOptions& opts = {});

/// Writes <out>/<name>_checks.csv and <out>/<name>_summary.json.
void write_reports(const RunOutcome& outcome, const std::filesystem::path& out_dir);

nlohmann::json summary_json(const RunOutcome& outcome);
std::string results_csv(const std::vector<CheckResult>& results, std::size_t factor_count);

nlohmann::json to_json(const BoundReport& r);
std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& r);

}  // namespace rfheat::harness
