#pragma once

#include <string>
#include <vector>

#include "qie/trotter.hpp"

namespace qie {

struct CheckResult {
    std::string name;
    bool pass = false;
    double deviation = 0.0; ///< measured worst deviation, units per check
    std::string detail;
};

struct VerifyOptions {
    EngineParams params;                     ///< T_M is overridden per T_Ms entry
    std::vector<double> taus = {1.0, 5.0, 10.0};
    std::vector<double> T_Ms = {100.0, 300.0};
    TrotterConfig trotter;
    QuadratureConfig quad;
    bool coupling_off = false; ///< g = 0 run: distribution must stay the initial one
};

/// The full oracle suite: distribution match, mean momentum, three-way
/// energy agreement, unitarity, Trotter convergence, W_th closed form vs
/// direct temperature integral, and the W_tot = T_S I identity.
std::vector<CheckResult> run_verification(const VerifyOptions& opts);

} // namespace qie
