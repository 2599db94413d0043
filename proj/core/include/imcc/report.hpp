/*!
  \file report.hpp
  \brief JSON reports of compilation runs and resubstitution statistics

  A compile report (format "imcc-report/1") records the configuration, the
  cost model, the baseline, every frontier design with its EDP estimate,
  the selected design, the per-round log and the memory-usage trace of the
  selected design.  Writing is deterministic, so equal runs give
  byte-identical reports.
*/

#pragma once

#include <imcc/compiler.hpp>
#include <imcc/edp_model.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace imcc
{

inline constexpr std::string_view report_format = "imcc-report/1";
inline constexpr std::string_view resub_report_format = "imcc-mfresub/1";

struct report_design
{
  std::uint32_t size = 0;
  std::uint32_t mf = 0;
  std::uint64_t hash = 0;
  std::string origin;
  edp_estimate edp;
};

struct compile_report
{
  std::string name;
  compiler_config config;
  cost_model model;
  report_design baseline;
  std::vector<report_design> frontier;
  std::size_t selected = 0;
  std::uint32_t rows_available = 0;
  std::vector<round_record> rounds;
  std::vector<std::uint32_t> usage; ///< trace of the selected design
};

/*! \brief Summarizes a run; `selected` must be a member of `result.frontier`. */
compile_report make_report( compile_result const& result, design const& selected, compiler_config const& cfg,
                            cost_model const& model );

std::string write_report( compile_report const& r );

/*! \brief Throws `std::invalid_argument` on malformed input or a foreign format tag. */
compile_report parse_report( std::string_view json_text );

using resub_counts = std::array<std::uint32_t, 6>; ///< indexed like `all_resub_outcomes`

/*! \brief Per-benchmark outcome counts of MF-oriented resubstitution. */
std::string write_resub_report( std::vector<std::pair<std::string, resub_counts>> const& rows );

} // namespace imcc
