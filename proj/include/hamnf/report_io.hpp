#pragma once

#include "hamnf/analysis.hpp"
#include "hamnf/continuation.hpp"

#include <string>

namespace hamnf {

enum class ReportFormat { Structured, Human };

std::string emit_report(const AnalysisReport& report, ReportFormat format);

/// Inverse of emit_report(.., Structured). Throws ParseError.
AnalysisReport parse_report(const std::string& text);

/// index,lambda,amplitude,residual,energy_drift,x0_0,...; 17 significant
/// digits.
std::string branch_csv(const Branch& branch);

/// One line per frequency with o+, o-, e+, e-, kappa and gamma.
std::string verdict_line(const ConditionReport& c);

}  // namespace hamnf
