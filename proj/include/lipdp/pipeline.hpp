#pragma once

#include <string>

#include "lipdp/dp.hpp"
#include "lipdp/implicit_function.hpp"
#include "lipdp/run_config.hpp"

namespace lipdp {

/// solve: writes one CSV per stage (state coordinates, value, policy) into
/// the output directory.
void run_solve(const RunConfig& cfg);

/// certify: solves, builds the Lipschitz certificate chain, probes the
/// multifunction regularity, writes certificate.txt and returns the verdict.
struct CertifyOutcome {
    LipschitzCertificate certificate;
    std::vector<ProbeReport> probes;   // per stage
    bool probes_ok = true;
    bool pass = false;                 // certificate + probes
    std::string report;                // certificate.txt content
};
CertifyOutcome run_certify(const RunConfig& cfg);

/// ift: verifies the radius conditions of the configured problem, prints the
/// margins, and tabulates the implicit map over a grid in the state ball.
struct IftOutcome {
    RadiiReport radii;
    bool ok = false;
    std::string summary;  // margin report, also printed on stdout
};
IftOutcome run_ift(const RunConfig& cfg);

/// The implicit problems reachable from a config: affine F = v - y and
/// square F = v^2 - y.
ImplicitProblem make_ift_problem(const IftConfig& cfg);

}  // namespace lipdp
