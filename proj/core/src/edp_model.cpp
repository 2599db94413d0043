#include <imcc/edp_model.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace imcc
{

cost_model parse_cost_model( std::string_view json_text )
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse( json_text );
  }
  catch ( nlohmann::json::parse_error const& e )
  {
    throw std::invalid_argument( std::string( "cost model: " ) + e.what() );
  }
  if ( !j.is_object() )
  {
    throw std::invalid_argument( "cost model: expected a JSON object" );
  }
  cost_model m;
  for ( auto const& [key, value] : j.items() )
  {
    if ( key == "rows_per_array" )
    {
      if ( !value.is_number_unsigned() )
      {
        throw std::invalid_argument( "cost model: rows_per_array must be a non-negative integer" );
      }
      m.rows_per_array = value.get<std::uint32_t>();
      continue;
    }
    double* field = key == "energy_op"     ? &m.energy_op
                    : key == "energy_copy" ? &m.energy_copy
                    : key == "delay_op"    ? &m.delay_op
                    : key == "delay_copy"  ? &m.delay_copy
                                           : nullptr;
    if ( field == nullptr )
    {
      throw std::invalid_argument( "cost model: unknown field '" + key + "'" );
    }
    if ( !value.is_number() || value.get<double>() < 0.0 )
    {
      throw std::invalid_argument( "cost model: '" + key + "' must be a non-negative number" );
    }
    *field = value.get<double>();
  }
  if ( !( m.energy_copy > m.energy_op ) )
  {
    throw std::invalid_argument( "cost model: energy_copy must exceed energy_op" );
  }
  if ( m.rows_per_array < 2u )
  {
    throw std::invalid_argument( "cost model: rows_per_array must be at least 2" );
  }
  return m;
}

cost_model load_cost_model( std::filesystem::path const& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw std::invalid_argument( "cannot open cost model '" + path.string() + "'" );
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_cost_model( ss.str() );
}

std::vector<node_id> foreign_fanins( scheduled_netlist const& design, array_placement const& placement, node_id n )
{
  std::vector<node_id> foreign;
  auto const dest = placement.array_of_row( placement.global_row[n] );
  for ( auto const& f : design.net.gate_of( n ).fanins )
  {
    if ( f.index == 0u || placement.array_of_row( placement.global_row[f.index] ) == dest )
    {
      continue;
    }
    if ( std::find( foreign.begin(), foreign.end(), f.index ) == foreign.end() )
    {
      foreign.push_back( f.index );
    }
  }
  return foreign;
}

array_placement place( scheduled_netlist const& design, std::uint32_t rows_per_array )
{
  auto const& net = design.net;
  auto const num_pis = net.num_pis();
  if ( rows_per_array < num_pis + 1u )
  {
    throw std::invalid_argument( "place: an array cannot hold all PIs plus one operation row" );
  }
  std::uint32_t op_rows = 0;
  for ( node_id n = net.gate_at( 0 ); n < net.num_nodes(); ++n )
  {
    op_rows = std::max( op_rows, design.row_of[n] + 1u );
  }
  for ( auto const t : design.temporary_inputs )
  {
    op_rows = std::max( op_rows, design.row_of[t] + 1u );
  }

  array_placement pl;
  pl.rows_per_array = rows_per_array;
  auto const logical_rows = num_pis + op_rows;
  if ( logical_rows <= rows_per_array )
  {
    pl.num_arrays = 1;
    pl.logical_capacity = rows_per_array;
  }
  else
  {
    if ( rows_per_array < scratch_rows_per_array + 1u )
    {
      throw std::invalid_argument( "place: too few rows per array for a multi-array placement" );
    }
    pl.logical_capacity = rows_per_array - scratch_rows_per_array;
    pl.num_arrays = ( logical_rows + pl.logical_capacity - 1u ) / pl.logical_capacity;
  }

  auto const global = [&]( std::uint32_t logical ) {
    return ( logical / pl.logical_capacity ) * rows_per_array + logical % pl.logical_capacity + 1u;
  };
  pl.global_row.assign( net.num_nodes(), no_row );
  for ( node_id n = 1; n < net.num_nodes(); ++n )
  {
    auto const is_temp = std::find( design.temporary_inputs.begin(), design.temporary_inputs.end(), n ) !=
                         design.temporary_inputs.end();
    if ( net.is_pi( n ) && !is_temp )
    {
      pl.global_row[n] = global( n - 1u );
    }
    else
    {
      pl.global_row[n] = global( num_pis + design.row_of[n] );
    }
  }
  if ( pl.num_arrays > 1u )
  {
    for ( node_id n = net.gate_at( 0 ); n < net.num_nodes(); ++n )
    {
      pl.copies += static_cast<std::uint32_t>( foreign_fanins( design, pl, n ).size() );
    }
  }
  return pl;
}

array_placement place( scheduled_netlist const& design, cost_model const& model )
{
  return place( design, model.rows_per_array );
}

edp_estimate estimate_edp( std::uint32_t operations, std::uint32_t copies, cost_model const& model )
{
  edp_estimate e;
  e.operations = operations;
  e.copies = copies;
  e.energy = operations * model.energy_op + copies * model.energy_copy;
  e.delay = operations * model.delay_op + copies * model.delay_copy;
  e.edp = e.energy * e.delay;
  return e;
}

edp_estimate estimate_edp( scheduled_netlist const& design, cost_model const& model )
{
  auto const pl = place( design, model );
  auto e = estimate_edp( design.net.size(), pl.copies, model );
  e.arrays = pl.num_arrays;
  return e;
}

} // namespace imcc
