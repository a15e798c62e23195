#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mlab {

struct CheckResult {
    int id = 0;
    std::string name;
    enum class Status { Pass, Fail, Skip } status = Status::Fail;
    std::string detail;
    double seconds = 0.0;

    bool passed() const { return status == Status::Pass; }
    std::string status_name() const;
};

struct AcceptanceConfig {
    int k = 3;
    double tol = 1e-10;  // transport tolerance, capped at 1e-10 (1e-14 for the four-pole checks)
    double rmin = 0.2;
    unsigned seed = 20240917;
    double scan_step = 0.5;  // t grid for the family criteria
};

// Runs the fourteen acceptance checks in order. on_result is called as each
// check finishes.
std::vector<CheckResult> run_acceptance(const AcceptanceConfig& cfg,
                                        const std::function<void(const CheckResult&)>& on_result = {});

bool all_passed(const std::vector<CheckResult>& results);
std::string format_line(const CheckResult& r);
nlohmann::json to_json(const std::vector<CheckResult>& results);

}  // namespace mlab
