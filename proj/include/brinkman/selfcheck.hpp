#pragma once

#include <string>
#include <vector>

namespace brinkman {

struct CheckResult {
    std::string name;
    bool pass = false;
    double qoi = 0.0;       // the measured quantity
    double threshold = 0.0; // what it was held against
};

/// Closed-form growth-law identities: inverse-map slope window, explicit
/// logistic ODE solution against an RK4 oracle, the reaction sandwich on
/// random linear laws, and the penalization-kernel derivative bound.
std::vector<CheckResult> growth_law_checks();

/// Flow-map regularity checks on synthetic velocity fields: exactness on
/// constants, forward-backward inversion, the Holder pair bound, and the
/// start-time-shift bound.
std::vector<CheckResult> flow_map_checks();

}  // namespace brinkman
