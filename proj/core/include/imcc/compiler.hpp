/*!
  \file compiler.hpp
  \brief The iterative synthesis and scheduling loop

  The baseline is the cleaned-up input netlist, scheduled.  Every round
  picks a frontier design uniformly, cuts out the operations of its peak
  window, optimizes them with K random passes, schedules the result under
  an MF bound derived from the frontier, splices it back, applies
  MF-oriented resubstitution and offers the results to the frontier.
*/

#pragma once

#include <imcc/critical_subnet.hpp>
#include <imcc/mf_resub.hpp>
#include <imcc/pareto.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace imcc
{

struct compiler_config
{
  std::uint32_t rounds = 20u;
  double lambda = 0.6;
  double beta = 1.1;
  std::uint32_t k_cmds = 10u;
  std::uint64_t n_trial = default_n_trial;
  std::uint32_t rows_per_array = 256u;
  std::uint64_t seed = 1u;
  std::uint32_t exact_threshold = 16u; ///< sub-netlists up to this many gates are scheduled exactly
  std::uint32_t jobs = 1u;             ///< rounds run concurrently against one frontier snapshot

  /*! \brief Throws `std::invalid_argument` on out-of-range values. */
  void validate() const;
};

enum class round_status : std::uint8_t
{
  empty_design,   ///< the picked design has no gates
  bound_exceeded, ///< the optimized window cannot meet the MF bound
  evaluated       ///< the round produced candidate designs
};

std::string_view to_string( round_status s );

struct round_record
{
  std::uint32_t round = 0;
  std::uint32_t base_size = 0;
  std::uint32_t base_mf = 0;
  peak_window window;
  std::uint32_t sub_size = 0;
  std::uint32_t sub_optimized_size = 0;
  std::optional<std::uint32_t> mf_bound;
  round_status status = round_status::empty_design;
  std::uint32_t size = 0;         ///< spliced design after sweeping
  std::uint32_t window_mf = 0;    ///< MF keeping the outer schedule
  std::uint32_t mf = 0;           ///< MF after the optional full reschedule
  std::uint32_t resub_size = 0;
  std::uint32_t resub_mf = 0;
  resub_outcome resub = resub_outcome::no_resub;
  bool inserted = false;          ///< some design of this round joined the frontier
};

struct compile_result
{
  design baseline;
  pareto_set frontier;
  std::vector<round_record> rounds;
};

/*! \brief Cleanup and scheduling of the input netlist. */
design baseline_design( xmg_network const& source, compiler_config const& cfg );

compile_result compile( xmg_network const& source, compiler_config const& cfg );

/*! \brief Rows left for operations in one array. */
inline std::uint32_t rows_available( xmg_network const& net, std::uint32_t rows_per_array )
{
  return rows_per_array > net.num_pis() ? rows_per_array - net.num_pis() : 0u;
}

} // namespace imcc
