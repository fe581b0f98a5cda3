#pragma once

#include <span>
#include <string>

#include "kamnf/diophantine.hpp"
#include "kamnf/kam.hpp"
#include "kamnf/toeplitz.hpp"
#include "kamnf/verify.hpp"

namespace kamnf::io {

// 17 significant digits; inf and nan spelled out.
std::string fmt17(double x);

// Each table starts with a "# schema=<name>/<version>" line, then the column header.
std::string steps_csv(std::span<const kam::StepReport> reports);
std::string measure_csv(std::span<const dioph::MeasureEstimate> rows);
// seconds column is 0 unless timing is set.
std::string lemma_csv(std::span<const verify::LemmaCase> cases, bool timing = false);
std::string tl_csv(const kam::TlTable& table);

}  // namespace kamnf::io
