/*!
  \file mf_resub.hpp
  \brief Resubstitution aimed at the first memory peak of a schedule

  Case 1 merges two results stored at the peak that compute the same
  function up to complement.  Case 2 frees the row of a peak result `j`
  whose only pending consumer `f` can be rebuilt as one gate over other
  values: the other peak results, the results computed between the peak
  and `f`, PIs `f` depends on and the constant.

  Both cases keep the relative order of the surviving gates, so the new
  netlist is still scheduled and only its liveness is recomputed.
*/

#pragma once

#include <imcc/scheduler.hpp>

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

namespace imcc
{

struct peak_set
{
  std::uint32_t p = 0;          ///< first cycle with maximum usage
  std::vector<node_id> members; ///< values in memory after cycle p, ascending
};

/*! \brief Throws `std::invalid_argument` for a design without gates. */
peak_set first_peak( scheduled_netlist const& design );

/*! \brief First merge of two equivalent peak members, or nullopt. */
std::optional<scheduled_netlist> mfresub_case1( scheduled_netlist const& design );

inline constexpr std::uint64_t default_n_trial = 500000u;

/*! \brief First rebuild of a pending consumer that frees a peak row, or nullopt.

  At most `n_trial` divisor triples are tried per peak member; above that
  count the triples are sampled without replacement from a stream seeded
  with `seed`.
*/
std::optional<scheduled_netlist> mfresub_case2( scheduled_netlist const& design, std::uint64_t n_trial,
                                                std::uint64_t seed );

enum class resub_outcome : std::uint8_t
{
  no_resub,
  no_change,
  trade_off,
  less_mf,
  less_size,
  both_less
};

inline constexpr std::array<resub_outcome, 6> all_resub_outcomes{
    resub_outcome::no_resub, resub_outcome::no_change, resub_outcome::trade_off,
    resub_outcome::less_mf,  resub_outcome::less_size, resub_outcome::both_less };

std::string_view to_string( resub_outcome o );

/*! \brief Outcome category from the size and MF before and after.

  Any MF increase is a trade-off.
*/
resub_outcome classify( std::uint32_t resubs, std::uint32_t size_before, std::uint32_t mf_before,
                        std::uint32_t size_after, std::uint32_t mf_after );

struct mfresub_result
{
  scheduled_netlist design;
  std::uint32_t case1 = 0;
  std::uint32_t case2 = 0;
  resub_outcome outcome = resub_outcome::no_resub;
};

/*! \brief Applies case 1, else case 2, until neither fires. */
mfresub_result mfresub( scheduled_netlist const& design, std::uint64_t n_trial = default_n_trial,
                        std::uint64_t seed = 0u );

} // namespace imcc
