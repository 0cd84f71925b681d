// Structured validation results shared by every validator.
#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stoptime {

enum class ViolationKind {
  ShapeMismatch,
  NonPositiveProb,
  ProbsNotSummingToOne,
  GridNotIncreasing,
  NotAPartition,
  RefinementViolated,
  IndexOutOfRange,
  NotAdapted,
  NotStoppingTime,
  MalformedSection,
  NotMeasurable,
  ValueOutOfRange,
  NotMonotone,
  TerminalNotOne,
  NegativeMass,
  MarginalMismatch,
  DensityNotAdapted,
};

constexpr std::string_view name_of(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::ShapeMismatch: return "ShapeMismatch";
    case ViolationKind::NonPositiveProb: return "NonPositiveProb";
    case ViolationKind::ProbsNotSummingToOne: return "ProbsNotSummingToOne";
    case ViolationKind::GridNotIncreasing: return "GridNotIncreasing";
    case ViolationKind::NotAPartition: return "NotAPartition";
    case ViolationKind::RefinementViolated: return "RefinementViolated";
    case ViolationKind::IndexOutOfRange: return "IndexOutOfRange";
    case ViolationKind::NotAdapted: return "NotAdapted";
    case ViolationKind::NotStoppingTime: return "NotStoppingTime";
    case ViolationKind::MalformedSection: return "MalformedSection";
    case ViolationKind::NotMeasurable: return "NotMeasurable";
    case ViolationKind::ValueOutOfRange: return "ValueOutOfRange";
    case ViolationKind::NotMonotone: return "NotMonotone";
    case ViolationKind::TerminalNotOne: return "TerminalNotOne";
    case ViolationKind::NegativeMass: return "NegativeMass";
    case ViolationKind::MarginalMismatch: return "MarginalMismatch";
    case ViolationKind::DensityNotAdapted: return "DensityNotAdapted";
  }
  return "Unknown";
}

struct Violation {
  ViolationKind kind;
  std::optional<std::size_t> level;   // grid index, when the violation is tied to one
  std::vector<std::size_t> outcomes;  // offending outcomes (a block, or a single atom)
  std::string detail;

  std::string describe() const {
    std::ostringstream os;
    os << name_of(kind);
    if (level) os << " at j=" << *level;
    if (!outcomes.empty()) {
      os << " {";
      for (std::size_t i = 0; i < outcomes.size(); ++i) os << (i ? "," : "") << outcomes[i];
      os << '}';
    }
    if (!detail.empty()) os << ": " << detail;
    return os.str();
  }
};

using Report = std::vector<Violation>;

inline bool has(const Report& report, ViolationKind kind) {
  for (const auto& v : report)
    if (v.kind == kind) return true;
  return false;
}

// Thrown when a constructor or conversion receives input that fails validation.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(Report report)
      : std::invalid_argument(summarize(report)), report_(std::move(report)) {}

  const Report& report() const noexcept { return report_; }

 private:
  static std::string summarize(const Report& report) {
    std::string out = "validation failed";
    for (const auto& v : report) out += "; " + v.describe();
    return out;
  }

  Report report_;
};

inline void require_valid(Report report) {
  if (!report.empty()) throw ValidationError(std::move(report));
}

}  // namespace stoptime
