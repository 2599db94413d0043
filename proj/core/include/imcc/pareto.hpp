/*!
  \file pareto.hpp
  \brief Designs, the size/MF Pareto frontier and final selection
*/

#pragma once

#include <imcc/edp_model.hpp>
#include <imcc/scheduler.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace imcc
{

struct design
{
  scheduled_netlist scheduled;
  std::uint32_t size = 0;
  std::uint32_t mf = 0;
  std::size_t hash = 0;
  std::string origin; ///< "baseline" or "round <r>" plus the step that produced it
};

design make_design( scheduled_netlist s, std::string origin );

/*! \brief Size and MF both no larger, at least one strictly smaller. */
inline bool dominates( design const& a, design const& b ) noexcept
{
  return a.size <= b.size && a.mf <= b.mf && ( a.size < b.size || a.mf < b.mf );
}

/*! \brief Mutually non-dominating designs, kept sorted by (size, mf, hash). */
class pareto_set
{
public:
  /*! \brief Adds `d` unless it is dominated or a design with the same
             (size, mf, hash) is present; removes incumbents it dominates.
             Returns whether `d` was added. */
  bool insert( design d );

  std::vector<design> const& designs() const noexcept { return designs_; }
  std::size_t size() const noexcept { return designs_.size(); }
  bool empty() const noexcept { return designs_.empty(); }

  /*! \brief True if some member dominates or equals `d` in (size, mf). */
  bool covers( std::uint32_t size, std::uint32_t mf ) const noexcept;

private:
  std::vector<design> designs_;
};

/*! \brief Least-size design with `mf <= rows_available`; if none fits,
           the design with the smallest estimated EDP.

  Throws `std::invalid_argument` on an empty frontier.
*/
design const& select_final( pareto_set const& frontier, std::uint32_t rows_available, cost_model const& model );

} // namespace imcc
