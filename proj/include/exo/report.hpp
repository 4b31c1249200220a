#pragma once

#include <string>
#include <vector>

#include "exo/synthesis.hpp"

/**
 * JSON reports. Every floating-point value is rounded to 15 significant
 * digits before serialisation so identical runs give identical bytes.
 * Matrices are row-major lists of rows, each entry a {"re", "im"} object.
 */
namespace exo {

/// x rounded to 15 significant digits, with -0 mapped to 0.
double round15(double x);

/// "%.15g" rendering of round15(x), independent of locale.
std::string format_number(double x);

std::string checks_report(const std::vector<NamedCheck>& checks, bool ok);
std::string gate_report(const GateReport& gate, const SequenceStats& stats);
std::string derivation_report(const DerivationReport& rep);
std::string comparison_report(const ComparisonReport& rep);

/// Full register unitary, for `simulate --matrix`.
std::string unitary_report(const Matrix& u, int n_spins);

}  // namespace exo
