#pragma once

#include <cstdint>
#include <string>

namespace mlcf {

/// The lists and Moore case studies end to end: reduction to container form,
/// generated theories, approximant tables, axiom reports on finite models
/// and a randomized rule-soundness run. Returns a JSON report whose
/// top-level "passed" is false if any check failed.
std::string demo_report(const std::string& which, std::uint64_t seed, std::uint64_t budget);

}  // namespace mlcf
