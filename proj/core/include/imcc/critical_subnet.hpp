/*!
  \file critical_subnet.hpp
  \brief Extraction and re-insertion of the operations in a peak window

  The sub-netlist of window [m, n] holds the gates executed in cycles m..n,
  in that order.  Its PIs are the values those gates read from outside the
  window: parent PIs and earlier results (ascending parent id).  Its POs are
  the window gates read after the window or driving parent POs.

  Earlier results that die inside the window become temporary inputs of the
  sub-netlist.  Earlier results that outlive the window occupy their rows
  during the whole window; their count is `resident_rows`, so that parent
  usage in a window cycle equals `resident_rows` plus the sub-netlist usage
  in the matching cycle.
*/

#pragma once

#include <imcc/pareto.hpp>
#include <imcc/scheduler.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace imcc
{

struct sub_netlist
{
  xmg_network net;
  std::vector<node_id> boundary_pis;     ///< parent node of sub PI k (sub node k + 1)
  std::vector<node_id> boundary_pos;     ///< parent node of sub PO k
  std::vector<node_id> temporary_inputs; ///< sub PI node ids
  std::uint32_t resident_rows = 0;
  peak_window window;
};

/*! \brief Cuts the gates of cycles `window.m..window.n` out of `design`.

  Throws `std::invalid_argument` for an empty or out-of-range window.
*/
sub_netlist extract( scheduled_netlist const& design, peak_window const& window );

/*! \brief Splices `optimized` in place of the window gates.

  The result holds the pre-window gates, the optimized gates in their
  scheduled order and the post-window gates, in this order, so its size is
  `Size(G) - Size(H) + Size(H')`.  Dangling gates are kept.  Throws
  `std::runtime_error` if `optimized` is not proven equivalent to
  `sub.net` on every boundary PO.
*/
xmg_network reinsert( scheduled_netlist const& design, sub_netlist const& sub, xmg_network const& optimized );

/*! \brief MF bound for a candidate of `new_size` gates.

  Takes the frontier design D with size <= `new_size` closest to it (the
  smaller MF on ties) and returns `ceil(beta * (MF(D) - 1))`; nullopt if no
  such design exists.
*/
std::optional<std::uint32_t> pareto_mf_bound( pareto_set const& frontier, std::uint32_t new_size, double beta );

} // namespace imcc
