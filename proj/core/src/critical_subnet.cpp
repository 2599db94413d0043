#include <imcc/critical_subnet.hpp>

#include <imcc/simulation.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace imcc
{

namespace
{

/* Cycle of the last consuming gate per node, 0 if unused. */
std::vector<std::uint32_t> last_use( xmg_network const& net )
{
  std::vector<std::uint32_t> last( net.num_nodes(), 0u );
  for ( auto i = 0u; i < net.size(); ++i )
  {
    auto const n = net.gate_at( i );
    for ( auto const& f : net.gate_of( n ).fanins )
    {
      last[f.index] = std::max( last[f.index], net.cycle_of( n ) );
    }
  }
  return last;
}

signal copy_gate( xmg_network& out, gate const& g, std::vector<signal> const& map )
{
  return out.create_gate( g.kind, map[g.fanins[0].index] ^ g.fanins[0].complemented,
                          map[g.fanins[1].index] ^ g.fanins[1].complemented,
                          map[g.fanins[2].index] ^ g.fanins[2].complemented );
}

} // namespace

sub_netlist extract( scheduled_netlist const& design, peak_window const& window )
{
  auto const& net = design.net;
  if ( window.m == 0u || window.m > window.n || window.n > net.size() )
  {
    throw std::invalid_argument( "peak window is empty or outside the schedule" );
  }
  auto const first = net.node_at_cycle( window.m );
  auto const last = net.node_at_cycle( window.n );
  auto const po = po_flags( net );
  auto const last_cycle = last_use( net );

  std::vector<bool> parent_temp( net.num_nodes(), false );
  for ( auto const t : design.temporary_inputs )
  {
    parent_temp[t] = true;
  }
  auto const earlier_result = [&]( node_id v ) { return parent_temp[v] || ( net.is_gate( v ) && v < first ); };

  sub_netlist sub;
  sub.window = window;
  for ( auto n = first; n <= last; ++n )
  {
    for ( auto const& f : net.gate_of( n ).fanins )
    {
      if ( f.index != 0u && f.index < first )
      {
        sub.boundary_pis.push_back( f.index );
      }
    }
  }
  std::sort( sub.boundary_pis.begin(), sub.boundary_pis.end() );
  sub.boundary_pis.erase( std::unique( sub.boundary_pis.begin(), sub.boundary_pis.end() ), sub.boundary_pis.end() );

  sub.net = xmg_network( static_cast<std::uint32_t>( sub.boundary_pis.size() ), net.name() );
  std::vector<signal> map( net.num_nodes() );
  for ( auto k = 0u; k < sub.boundary_pis.size(); ++k )
  {
    map[sub.boundary_pis[k]] = signal{ sub.net.pi_at( k ), false };
    auto const v = sub.boundary_pis[k];
    if ( earlier_result( v ) && !po[v] && last_cycle[v] <= window.n )
    {
      sub.temporary_inputs.push_back( sub.net.pi_at( k ) );
    }
  }
  for ( auto n = first; n <= last; ++n )
  {
    map[n] = copy_gate( sub.net, net.gate_of( n ), map );
  }
  for ( auto n = first; n <= last; ++n )
  {
    if ( po[n] || last_cycle[n] > window.n )
    {
      sub.boundary_pos.push_back( n );
      sub.net.create_po( map[n] );
    }
  }

  for ( node_id v = 1u; v < first; ++v )
  {
    if ( !earlier_result( v ) )
    {
      continue;
    }
    auto const live_before = po[v] || last_cycle[v] >= window.m;
    auto const live_after = po[v] || last_cycle[v] > window.n;
    if ( live_before && live_after )
    {
      ++sub.resident_rows;
    }
  }
  return sub;
}

xmg_network reinsert( scheduled_netlist const& design, sub_netlist const& sub, xmg_network const& optimized )
{
  if ( optimized.num_pis() != sub.net.num_pis() || optimized.num_pos() != sub.net.num_pos() )
  {
    throw std::runtime_error( "optimized sub-netlist does not match the boundary" );
  }
  if ( check_equivalence( sub.net, optimized ) != validation::equivalent )
  {
    throw std::runtime_error( "optimized sub-netlist is not equivalent on its boundary outputs" );
  }

  auto const& net = design.net;
  auto const first = net.node_at_cycle( sub.window.m );
  auto const last = net.node_at_cycle( sub.window.n );
  xmg_network out( net.num_pis(), net.name() );
  out.reserve( net.size() - sub.net.size() + optimized.size() );

  std::vector<signal> map( net.num_nodes() );
  for ( node_id v = 0; v <= net.num_pis(); ++v )
  {
    map[v] = signal{ v, false };
  }
  for ( auto n = net.gate_at( 0 ); n < first; ++n )
  {
    map[n] = copy_gate( out, net.gate_of( n ), map );
  }

  std::vector<signal> omap( optimized.num_nodes() );
  for ( auto k = 0u; k < sub.boundary_pis.size(); ++k )
  {
    omap[optimized.pi_at( k )] = map[sub.boundary_pis[k]];
  }
  for ( auto i = 0u; i < optimized.size(); ++i )
  {
    omap[optimized.gate_at( i )] = copy_gate( out, optimized.gates()[i], omap );
  }
  for ( auto k = 0u; k < sub.boundary_pos.size(); ++k )
  {
    auto const po = optimized.pos()[k];
    map[sub.boundary_pos[k]] = omap[po.index] ^ po.complemented;
  }

  for ( auto n = last + 1u; n < net.num_nodes(); ++n )
  {
    map[n] = copy_gate( out, net.gate_of( n ), map );
  }
  for ( auto const& po : net.pos() )
  {
    out.create_po( map[po.index] ^ po.complemented );
  }
  return out;
}

std::optional<std::uint32_t> pareto_mf_bound( pareto_set const& frontier, std::uint32_t new_size, double beta )
{
  design const* ref = nullptr;
  for ( auto const& d : frontier.designs() )
  {
    if ( d.size <= new_size && ( !ref || d.size > ref->size || ( d.size == ref->size && d.mf < ref->mf ) ) )
    {
      ref = &d;
    }
  }
  if ( !ref )
  {
    return std::nullopt;
  }
  if ( ref->mf == 0u )
  {
    return 0u;
  }
  /* the epsilon keeps exact products such as 1.1 * 7 from rounding up */
  return static_cast<std::uint32_t>( std::ceil( beta * static_cast<double>( ref->mf - 1u ) - 1e-9 ) );
}

} // namespace imcc
