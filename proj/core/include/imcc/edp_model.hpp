/*!
  \file edp_model.hpp
  \brief Array placement and energy-delay estimation

  Logical rows are numbered PIs first (one row per PI), then the operation
  rows of the schedule.  If everything fits into one array no copies are
  needed.  Otherwise the logical rows are cut into consecutive chunks of
  `rows_per_array - 3` rows; the last three rows of every array are scratch
  rows that receive COPYs of foreign operands right before an operation.

  Global rows are 1-based: logical row `l` of array `a` at local offset `o`
  is row `a * rows_per_array + o + 1`.
*/

#pragma once

#include <imcc/scheduler.hpp>

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

namespace imcc
{

struct cost_model
{
  double energy_op = 1.0;
  double energy_copy = 10.0;
  double delay_op = 1.0;
  double delay_copy = 1.0;
  std::uint32_t rows_per_array = 256u;
};

/*! \brief Parses a JSON object with the five cost-model fields.

  Missing fields keep their defaults; unknown fields, negative values,
  `energy_copy <= energy_op` and `rows_per_array < 2` are rejected with
  `std::invalid_argument`.
*/
cost_model parse_cost_model( std::string_view json_text );
cost_model load_cost_model( std::filesystem::path const& path );

inline constexpr std::uint32_t scratch_rows_per_array = 3u;

struct array_placement
{
  std::uint32_t rows_per_array = 0;
  std::uint32_t num_arrays = 1;
  std::uint32_t logical_capacity = 0;     ///< data rows per array
  std::vector<std::uint32_t> global_row;  ///< per node id; `no_row` for the constant
  std::uint32_t copies = 0;

  std::uint32_t array_of_row( std::uint32_t row ) const { return ( row - 1u ) / rows_per_array; }
  std::uint32_t scratch_row( std::uint32_t array, std::uint32_t k ) const
  {
    return array * rows_per_array + logical_capacity + k + 1u;
  }
};

/*! \brief Distinct non-constant fan-ins of `n` whose rows lie outside the destination array. */
std::vector<node_id> foreign_fanins( scheduled_netlist const& design, array_placement const& placement, node_id n );

/*! \brief Places PIs and operation rows into arrays.

  Throws `std::invalid_argument` if `rows_per_array` cannot hold all PIs
  plus one operation row, or if a multi-array placement is needed with
  fewer than four rows per array.
*/
array_placement place( scheduled_netlist const& design, std::uint32_t rows_per_array );
array_placement place( scheduled_netlist const& design, cost_model const& model );

struct edp_estimate
{
  std::uint32_t operations = 0;
  std::uint32_t copies = 0;
  std::uint32_t arrays = 1;
  double energy = 0.0;
  double delay = 0.0;
  double edp = 0.0;
};

/*! \brief EDP from raw instruction counts. */
edp_estimate estimate_edp( std::uint32_t operations, std::uint32_t copies, cost_model const& model );

edp_estimate estimate_edp( scheduled_netlist const& design, cost_model const& model );

} // namespace imcc
