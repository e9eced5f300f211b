#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hahn::cli {

inline constexpr const char* kVersion = "hahn 1.0.0";

/// One CLI invocation, fully decoded. run() never throws: failures are
/// encoded in the exit code (0 success, 2 validation, 3 numerical) and the
/// structured report.
struct JobSpec {
    std::string command;  // deriv|integral|exp|el-check|solve|leitmann-check|ramsey|fixtures
    double q = 0.5;
    double omega = 0.5;

    std::vector<double> poly;   // coefficients c0,c1,... of sum c_i t^i
    std::string builtin_name;   // alternative to poly

    std::optional<double> t;
    double z = 0.0;
    double a = 0.0;
    double b = 1.0;
    double alpha = 0.0;
    double beta = 1.0;

    double tol = 1e-12;
    int depth = 20;
    int max_terms = 10000;

    std::string fixture_name;
    std::string check = "el";  // fixtures: el|value|solve

    double p = 0.05;  // ramsey discount rate
    double r = 0.03;  // ramsey rate of yield
    double horizon = 1.0;
    std::string utility = "quadratic";  // quadratic|log

    double s = -1.0;  // leitmann-check family parameter

    std::string format = "json";  // json|csv
};

struct RunResult {
    int exit_code = 0;
    std::string report;  // serialized JSON or CSV, trailing newline included
};

RunResult run(const JobSpec& spec);

}  // namespace hahn::cli
