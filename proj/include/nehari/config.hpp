#pragma once

#include <string>
#include <vector>

#include "nehari/geometry.hpp"
#include "nehari/solvers.hpp"

namespace nehari {

/// Fully resolved run configuration. Parsed from a flat `key = value`
/// text file; every optional key has a documented default and unknown
/// keys are rejected with their line number.
struct RunConfig {
    // domain / grid
    int ell = 1;
    CrossKind cross_kind = CrossKind::disk;
    std::vector<double> cross_params{1.0};
    Family family = Family::straight;
    double m = 0.0;
    double a0 = 0.0;
    double a1 = 0.0;
    double T = 0.0; // 0 = auto: smallest T with exp(-sqrt(lambda1) T) < 1e-6
    double h = 0.1;
    long long max_points = 40'000'000;

    // problem
    int N = 0; // 0 = ell + cross dim
    double p = 0.0; // 0 = critical 2N/(N-2)
    double q = 0.0; // 0 = (p+2)/2
    double mu = 1.0;
    double lambda = 0.0;

    // solver
    SolveConfig solver;
    int seed = 12345;

    // gap experiment
    std::vector<double> eps_list;
    std::vector<double> R_list;
    int tau_grid = 41;
    double gap_M = 0.0;     // 0 = smallest valid M
    double gap_center = 0.0; // axial coordinate of the (H)0 bubble center

    // decay analysis
    double window_R1 = 0.0; // 0 = T/3
    double window_R2 = 0.0; // 0 = 2T/3
    int with_prefactor = -1; // -1 = auto (ell > 1)
    double eta = -1.0;
    std::string decay_field;

    // eigen
    std::vector<double> eigen_h_list;

    // shoot
    double R_ball = 1.0;

    // instanton study
    double instanton_eps = 1.0;
    double instanton_h = 0.2;
    std::vector<double> instanton_boxes{4.0, 8.0, 16.0};

    // --- resolved helpers -------------------------------------------------
    CrossSection cross_section() const;
    DomainSpec domain() const;           // resolves auto T via lambda1(F)
    ProblemParams problem() const;
    double resolved_T() const;

    /// Serialized resolved configuration (sorted keys, deterministic).
    std::string to_json_object() const;
};

struct ConfigError {
    int line = 0; // 0 = post-parse validation, -1 = override
    std::string message;
};

/// Parses and validates. On any error throws Error(parse_error) whose
/// message lists every problem with its line number. `overrides` are
/// `key=value` strings applied after the file content.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::string>& overrides = {});

/// Non-throwing variant collecting all errors.
bool try_parse_config(const std::string& text, const std::vector<std::string>& overrides,
                      RunConfig& out, std::vector<ConfigError>& errors);

} // namespace nehari
