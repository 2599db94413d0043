/*!
  \file scheduler.hpp
  \brief Liveness analysis, memory-footprint scheduling and peak windows

  A schedule is a topological order of the gates.  Executing a gate writes
  its result to the lowest free row; a result is released right after the
  cycle of its last consumer, so that consumer may overwrite it in place.
  PO results are never released.  Primary inputs live in rows of their own
  and are not counted, except for *temporary inputs*: PI-like values that
  already sit in operation rows and may be released once dead.

  Cycles are 1-based; `usage[c - 1]` is the number of occupied rows after
  cycle `c`.
*/

#pragma once

#include <imcc/xmg.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace imcc
{

inline constexpr std::uint32_t no_row = ~std::uint32_t{ 0 };

struct liveness_result
{
  std::uint32_t mf = 0;
  std::vector<std::uint32_t> usage;
  std::vector<std::uint32_t> row_of; ///< per node id; `no_row` for the constant and ordinary PIs
};

/*! \brief Liveness and greedy row assignment for an explicit gate order.

  `order` must be a permutation of the gate ids in topological order,
  otherwise `std::invalid_argument` is thrown.  Temporary inputs occupy
  rows 0..T-1 (in the given order) before the first cycle.
*/
liveness_result liveness_mf( xmg_network const& net, std::span<node_id const> order,
                             std::span<node_id const> temporary_inputs = {} );

/*! \brief Liveness in the netlist's own gate order. */
liveness_result liveness_in_gate_order( xmg_network const& net, std::span<node_id const> temporary_inputs = {} );

/*! \brief A netlist whose gate order is its execution order. */
struct scheduled_netlist
{
  xmg_network net;
  std::vector<node_id> temporary_inputs;
  std::uint32_t mf = 0;
  std::vector<std::uint32_t> usage;
  std::vector<std::uint32_t> row_of;
};

/*! \brief Wraps `net` as-is, computing its liveness in gate order. */
scheduled_netlist make_scheduled( xmg_network net, std::vector<node_id> temporary_inputs = {} );

struct schedule_request
{
  xmg_network const& netlist;
  std::span<node_id const> temporary_inputs = {};
  std::optional<std::uint32_t> mf_bound = std::nullopt;
};

/*! \brief Returned instead of a schedule when no order can meet the bound. */
struct bound_exceeded
{
  std::uint32_t lower_bound = 0;
};

using schedule_result = std::variant<scheduled_netlist, bound_exceeded>;

inline bool is_bound_exceeded( schedule_result const& r ) noexcept
{
  return std::holds_alternative<bound_exceeded>( r );
}

/*! \brief Admissible lower bound on the MF of any order.

  Maximum of the number of distinct gate POs and, per gate, the number of
  distinct gate or temporary-input fan-ins that must be live together in
  the cycle before it.
*/
std::uint32_t mf_lower_bound( xmg_network const& net, std::span<node_id const> temporary_inputs = {} );

/*! \brief Greedy scheduling.

  Among the ready gates, picks the one leading to the fewest live results
  (equivalently: killing the most), ties broken by smallest index.
  `bound_exceeded` is returned only when `mf_lower_bound` already exceeds
  the bound; a greedy result above the bound is returned as is.
*/
schedule_result schedule_heuristic( schedule_request const& req );

inline constexpr std::uint32_t default_exact_node_limit = 24u;

/*! \brief Minimum-MF scheduling by iterative-deepening search over downsets.

  Throws `std::invalid_argument` if the netlist has more than `node_limit`
  gates (hard maximum 64).  Returns `bound_exceeded` iff the optimum MF is
  larger than the bound.
*/
schedule_result schedule_exact( schedule_request const& req, std::uint32_t node_limit = default_exact_node_limit );

/*! \brief Exact engine up to `exact_threshold` gates, greedy above. */
schedule_result schedule( schedule_request const& req, std::uint32_t exact_threshold );

struct peak_window
{
  std::uint32_t m = 0;  ///< first cycle of the window
  std::uint32_t p = 0;  ///< first cycle reaching the maximum
  std::uint32_t n = 0;  ///< last cycle of the window
  std::uint32_t mf = 0;
};

/*! \brief Expands the peak period while usage stays at or above `lambda * mf`.

  Starting from the first and the last cycle with maximum usage, `m` moves
  left and `n` moves right as long as the next cycle still has usage
  `>= lambda * mf`.  Throws `std::invalid_argument` on an empty trace or
  lambda outside (0, 1).
*/
peak_window find_peak_window( std::span<std::uint32_t const> usage, double lambda );

} // namespace imcc
