#include <imcc/pareto.hpp>

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace imcc
{

design make_design( scheduled_netlist s, std::string origin )
{
  design d;
  d.size = s.net.size();
  d.mf = s.mf;
  d.hash = structural_hash( s.net );
  d.scheduled = std::move( s );
  d.origin = std::move( origin );
  return d;
}

bool pareto_set::insert( design d )
{
  for ( auto const& e : designs_ )
  {
    if ( dominates( e, d ) || ( e.size == d.size && e.mf == d.mf && e.hash == d.hash ) )
    {
      return false;
    }
  }
  std::erase_if( designs_, [&]( design const& e ) { return dominates( d, e ); } );
  auto const key = []( design const& x ) { return std::tuple{ x.size, x.mf, x.hash }; };
  auto const pos = std::upper_bound( designs_.begin(), designs_.end(), d,
                                     [&]( design const& a, design const& b ) { return key( a ) < key( b ); } );
  designs_.insert( pos, std::move( d ) );
  return true;
}

bool pareto_set::covers( std::uint32_t size, std::uint32_t mf ) const noexcept
{
  return std::any_of( designs_.begin(), designs_.end(), [&]( design const& e ) { return e.size <= size && e.mf <= mf; } );
}

design const& select_final( pareto_set const& frontier, std::uint32_t rows_available, cost_model const& model )
{
  if ( frontier.empty() )
  {
    throw std::invalid_argument( "cannot select from an empty frontier" );
  }
  auto const& ds = frontier.designs();
  /* sorted by size, so the first fitting design has the least size */
  for ( auto const& d : ds )
  {
    if ( d.mf <= rows_available )
    {
      return d;
    }
  }
  auto const* best = &ds.front();
  auto best_edp = estimate_edp( best->scheduled, model ).edp;
  for ( auto const& d : ds )
  {
    auto const e = estimate_edp( d.scheduled, model ).edp;
    if ( e < best_edp )
    {
      best = &d;
      best_edp = e;
    }
  }
  return *best;
}

} // namespace imcc
