#pragma once

// JSON and CSV forms of verification reports.
//
// Report document:
//   {"identity_id": "theorem-a", "params": {"mu": 0, "nu": 0}, "j": 0 | null, "tolerance": 1e-08,
//    "samples": [{"label": "", "point": {"theta": 0, "phi": 0}, "lhs": .., "rhs": .., "rel_residual": ..,
//                 "error": ".."}],
//    "max_rel_residual": .., "passed": true}
// Infinite residuals (failed samples) serialize as null. "error" is present only on failure.

#include <string>
#include <vector>

#include "quartic/identities.hpp"

namespace quartic {

std::string report_to_json(const VerificationReport& report, int indent = 2);

/// Throws DomainError on malformed input.
VerificationReport report_from_json(const std::string& text);

/// Header "identity_id,params,j,tolerance,max_rel_residual,passed", one row per report, numbers in %.17g.
std::string summary_csv(const std::vector<VerificationReport>& reports);

/// %.17g.
std::string format_number(double v);

}  // namespace quartic
