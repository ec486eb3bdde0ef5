#pragma once

#include "tsengflow/integrator.hpp"
#include "tsengflow/problems.hpp"
#include "tsengflow/schedules.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsengflow::cli {

/// Malformed or inconsistent experiment configuration (exit status 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProblemConfig {
    std::string kind = "interval_toy";  // interval_toy | linear_1d | saddle | gnep
    double lo = 1.0;
    double hi = 2.0;
    double slope = 1.0;
    double shift = 0.0;
    SaddleSpec saddle;
    GnepSpec gnep;
};

struct ScheduleConfig {
    std::string kind = "power_law";  // power_law | constant | custom
    PowerLawParams power_law;
    double eps = 1.0;
    double beta = 1.0;
    std::optional<double> lambda;  // constant kind only; default sigma / L
    double sigma = 0.5;
    std::vector<ScheduleKnot> table;
};

struct IntegratorSettings {
    Method method = Method::RK4;
    double t_end = 200.0;
    double step = 0.01;
    int record_stride = 100;
    std::optional<std::vector<double>> initial_point;
    double initial_fill = 0.0;
};

struct OracleSettings {
    bool attach_oracle_distance = false;
    bool verify_prop1 = true;
    bool verify_prop2 = true;
    double tol = 1e-8;
    double rho = 0.5;
    int n_max = 20;
    double decay_target = 1e-6;
    int pairs = 20;
    std::uint64_t seed = 5;
    double eps_lo = 1e-3;
    double eps_hi = 1e-1;
    double beta_lo = 1.0;
    double beta_hi = 100.0;
};

struct ValidationSettings {
    double horizon = 1e4;
    int grid = 400;
};

struct SweepSettings {
    double q_max = 0.5;
    double r_max = 0.5;
    int n_q = 100;
    int n_r = 100;
};

struct ExperimentConfig {
    ProblemConfig problem;
    ScheduleConfig schedule;
    IntegratorSettings integrator;
    OracleSettings oracle;
    ValidationSettings validation;
    SweepSettings sweep;
    std::filesystem::path output_dir = "out";
    bool allow_invalid_schedule = false;
};

/// Every key is optional; unknown keys are rejected with their JSON pointer.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Replaces the problem generator seed (saddle and gnep kinds).
void override_seed(ExperimentConfig& config, std::uint64_t seed);

ProblemInstance build_problem(const ProblemConfig& config);
Schedule build_schedule(const ScheduleConfig& config, const ProblemInstance& problem);
Vector build_initial_point(const IntegratorSettings& settings, Index dim);

}  // namespace tsengflow::cli
