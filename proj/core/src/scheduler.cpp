#include <imcc/scheduler.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace imcc
{

namespace
{

/* Distinct fan-in nodes of a gate. */
std::vector<node_id> distinct_fanins( gate const& g )
{
  std::vector<node_id> v;
  for ( auto const& f : g.fanins )
  {
    if ( std::find( v.begin(), v.end(), f.index ) == v.end() )
    {
      v.push_back( f.index );
    }
  }
  return v;
}

std::vector<bool> temp_flags( xmg_network const& net, std::span<node_id const> temps )
{
  std::vector<bool> flags( net.num_nodes(), false );
  for ( auto const t : temps )
  {
    if ( !net.is_pi( t ) )
    {
      throw std::invalid_argument( "temporary input is not a PI" );
    }
    flags[t] = true;
  }
  return flags;
}

/* Shared bookkeeping of the search-based engines: which values are
   deletable, who consumes them, and how many consumers are pending. */
struct live_model
{
  live_model( xmg_network const& net, std::span<node_id const> temps ) : net( net ), is_temp( temp_flags( net, temps ) )
  {
    fanouts = fanout_lists( net );
    is_po = po_flags( net );
    fanins.resize( net.num_nodes() );
    for ( node_id n = 0; n < net.num_nodes(); ++n )
    {
      if ( net.is_gate( n ) )
      {
        fanins[n] = distinct_fanins( net.gate_of( n ) );
      }
    }
  }

  /* tracked: gate or temporary input, i.e. a value occupying an op row */
  bool tracked( node_id n ) const { return net.is_gate( n ) || is_temp[n]; }

  /* a gate result that is still needed right after it is computed */
  bool alive_after( node_id n ) const { return is_po[n] || !fanouts[n].empty(); }

  xmg_network const& net;
  std::vector<bool> is_temp;
  std::vector<std::vector<node_id>> fanouts;
  std::vector<std::vector<node_id>> fanins;
  std::vector<bool> is_po;
};

scheduled_netlist build_scheduled( xmg_network const& net, std::span<node_id const> order, std::span<node_id const> temps )
{
  return make_scheduled( reorder( net, order ), std::vector<node_id>( temps.begin(), temps.end() ) );
}

/* Greedy order; returns the gate ids in execution order. */
std::vector<node_id> greedy_order( live_model const& lm )
{
  auto const& net = lm.net;
  std::vector<std::uint32_t> pending( net.num_nodes(), 0u ); /* unscheduled distinct consumers */
  std::vector<std::uint32_t> missing( net.num_nodes(), 0u ); /* unscheduled gate fan-ins */
  std::vector<std::int32_t> kills( net.num_nodes(), 0 );
  std::vector<bool> done( net.num_nodes(), false );

  for ( node_id n = 0; n < net.num_nodes(); ++n )
  {
    pending[n] = static_cast<std::uint32_t>( lm.fanouts[n].size() );
  }
  for ( node_id n = 0; n < net.num_nodes(); ++n )
  {
    if ( !net.is_gate( n ) )
    {
      continue;
    }
    for ( auto const f : lm.fanins[n] )
    {
      if ( net.is_gate( f ) )
      {
        ++missing[n];
      }
      if ( lm.tracked( f ) && !lm.is_po[f] && pending[f] == 1u )
      {
        ++kills[n];
      }
    }
  }

  auto delta = [&]( node_id n ) { return ( lm.alive_after( n ) ? 1 : 0 ) - kills[n]; };
  std::set<std::pair<std::int32_t, node_id>> ready;
  for ( node_id n = 0; n < net.num_nodes(); ++n )
  {
    if ( net.is_gate( n ) && missing[n] == 0u )
    {
      ready.emplace( delta( n ), n );
    }
  }

  std::vector<node_id> order;
  order.reserve( net.size() );
  while ( !ready.empty() )
  {
    auto const v = ready.begin()->second;
    ready.erase( ready.begin() );
    done[v] = true;
    order.push_back( v );

    for ( auto const f : lm.fanins[v] )
    {
      --pending[f];
      if ( pending[f] == 1u && lm.tracked( f ) && !lm.is_po[f] )
      {
        for ( auto const w : lm.fanouts[f] )
        {
          if ( !done[w] )
          {
            if ( missing[w] == 0u )
            {
              ready.erase( { delta( w ), w } );
              ++kills[w];
              ready.emplace( delta( w ), w );
            }
            else
            {
              ++kills[w];
            }
            break;
          }
        }
      }
    }
    for ( auto const w : lm.fanouts[v] )
    {
      if ( --missing[w] == 0u )
      {
        ready.emplace( delta( w ), w );
      }
    }
  }
  return order;
}

/* Decides whether some order keeps the usage at or below `limit`. */
class feasibility_search
{
public:
  feasibility_search( live_model const& lm ) : lm_( lm ), n_( lm.net.size() )
  {
    auto const& net = lm.net;
    pred_mask_.assign( n_, 0u );
    for ( auto i = 0u; i < n_; ++i )
    {
      auto const g = net.gate_at( i );
      for ( auto const f : lm.fanins[g] )
      {
        if ( net.is_gate( f ) )
        {
          pred_mask_[i] |= std::uint64_t{ 1 } << net.gate_index( f );
        }
      }
    }
  }

  bool run( std::uint32_t limit, std::vector<node_id>& order )
  {
    auto const& net = lm_.net;
    limit_ = limit;
    pending_.assign( net.num_nodes(), 0u );
    live_ = 0;
    for ( node_id n = 0; n < net.num_nodes(); ++n )
    {
      pending_[n] = static_cast<std::uint32_t>( lm_.fanouts[n].size() );
    }
    for ( node_id n = 1; n <= net.num_pis(); ++n )
    {
      if ( lm_.is_temp[n] && ( pending_[n] > 0u || lm_.is_po[n] ) )
      {
        ++live_;
      }
    }
    dense_ = n_ <= 26u;
    if ( dense_ )
    {
      failed_dense_.assign( std::size_t{ 1 } << n_, false );
    }
    else
    {
      failed_sparse_.clear();
    }
    order_.clear();
    bool const ok = dfs( 0u );
    if ( ok )
    {
      order.clear();
      for ( auto const i : order_ )
      {
        order.push_back( net.gate_at( i ) );
      }
    }
    return ok;
  }

private:
  bool failed( std::uint64_t s ) const { return dense_ ? failed_dense_[s] : failed_sparse_.count( s ) > 0u; }

  void mark_failed( std::uint64_t s )
  {
    if ( dense_ )
    {
      failed_dense_[s] = true;
    }
    else
    {
      failed_sparse_.insert( s );
    }
  }

  /* live count after executing gate i on top of the current state */
  std::int64_t after( std::uint32_t i ) const
  {
    auto const g = lm_.net.gate_at( i );
    std::int64_t v = live_ + ( lm_.alive_after( g ) ? 1 : 0 );
    for ( auto const f : lm_.fanins[g] )
    {
      if ( lm_.tracked( f ) && !lm_.is_po[f] && pending_[f] == 1u )
      {
        --v;
      }
    }
    return v;
  }

  void apply( std::uint32_t i, std::int64_t new_live )
  {
    for ( auto const f : lm_.fanins[lm_.net.gate_at( i )] )
    {
      --pending_[f];
    }
    live_ = new_live;
    order_.push_back( i );
  }

  void undo( std::uint32_t i, std::int64_t old_live )
  {
    for ( auto const f : lm_.fanins[lm_.net.gate_at( i )] )
    {
      ++pending_[f];
    }
    live_ = old_live;
    order_.pop_back();
  }

  bool dfs( std::uint64_t state )
  {
    if ( order_.size() == n_ )
    {
      return true;
    }
    if ( failed( state ) )
    {
      return false;
    }
    auto const old_live = live_;

    std::vector<std::pair<std::int64_t, std::uint32_t>> moves;
    for ( auto i = 0u; i < n_; ++i )
    {
      auto const bit = std::uint64_t{ 1 } << i;
      if ( ( state & bit ) || ( pred_mask_[i] & ~state ) )
      {
        continue;
      }
      auto const a = after( i );
      if ( a > static_cast<std::int64_t>( limit_ ) )
      {
        continue;
      }
      if ( a <= live_ )
      {
        /* a non-increasing step can always be taken first */
        moves.assign( 1u, { a, i } );
        break;
      }
      moves.emplace_back( a, i );
    }
    std::stable_sort( moves.begin(), moves.end(), []( auto const& x, auto const& y ) { return x.first < y.first; } );
    for ( auto const& [a, i] : moves )
    {
      apply( i, a );
      if ( dfs( state | ( std::uint64_t{ 1 } << i ) ) )
      {
        return true;
      }
      undo( i, old_live );
    }
    mark_failed( state );
    return false;
  }

  live_model const& lm_;
  std::uint32_t n_;
  std::vector<std::uint64_t> pred_mask_;
  std::vector<std::uint32_t> pending_;
  std::int64_t live_ = 0;
  std::uint32_t limit_ = 0;
  bool dense_ = true;
  std::vector<bool> failed_dense_;
  std::unordered_set<std::uint64_t> failed_sparse_;
  std::vector<std::uint32_t> order_;
};

} // namespace

liveness_result liveness_mf( xmg_network const& net, std::span<node_id const> order, std::span<node_id const> temporary_inputs )
{
  auto const is_temp = temp_flags( net, temporary_inputs );
  if ( order.size() != net.size() )
  {
    throw std::invalid_argument( "liveness_mf: order is not a permutation of the gates" );
  }
  std::vector<std::uint32_t> position( net.num_nodes(), no_row );
  for ( auto t = 0u; t < order.size(); ++t )
  {
    if ( !net.is_gate( order[t] ) || position[order[t]] != no_row )
    {
      throw std::invalid_argument( "liveness_mf: order is not a permutation of the gates" );
    }
    position[order[t]] = t;
  }

  constexpr auto never = ~std::uint32_t{ 0 };
  std::vector<std::uint32_t> last_use( net.num_nodes(), no_row ); /* no_row: no consumer */
  for ( auto t = 0u; t < order.size(); ++t )
  {
    for ( auto const& f : net.gate_of( order[t] ).fanins )
    {
      if ( net.is_gate( f.index ) && position[f.index] >= t )
      {
        throw std::invalid_argument( "liveness_mf: order is not topological" );
      }
      last_use[f.index] = last_use[f.index] == no_row ? t : std::max( last_use[f.index], t );
    }
  }
  for ( auto const& po : net.pos() )
  {
    last_use[po.index] = never - 1u;
  }

  liveness_result res;
  res.row_of.assign( net.num_nodes(), no_row );
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> free_rows;
  std::uint32_t next_row = 0;
  std::uint32_t live = 0;
  auto allocate = [&]() {
    if ( !free_rows.empty() )
    {
      auto const r = free_rows.top();
      free_rows.pop();
      return r;
    }
    return next_row++;
  };

  for ( auto const t : temporary_inputs )
  {
    res.row_of[t] = allocate();
    ++live;
  }
  for ( auto const t : temporary_inputs )
  {
    if ( last_use[t] == no_row )
    {
      free_rows.push( res.row_of[t] );
      --live;
    }
  }

  res.usage.reserve( order.size() );
  for ( auto t = 0u; t < order.size(); ++t )
  {
    auto const n = order[t];
    /* fan-ins whose last use is this cycle free their rows first */
    std::array<node_id, 3> seen{ 0, 0, 0 };
    auto num_seen = 0u;
    for ( auto const& f : net.gate_of( n ).fanins )
    {
      auto const u = f.index;
      if ( !( net.is_gate( u ) || is_temp[u] ) || last_use[u] != t )
      {
        continue;
      }
      if ( std::find( seen.begin(), seen.begin() + num_seen, u ) != seen.begin() + num_seen )
      {
        continue;
      }
      seen[num_seen++] = u;
      free_rows.push( res.row_of[u] );
      --live;
    }
    res.row_of[n] = allocate();
    ++live;
    if ( last_use[n] == no_row )
    {
      /* dangling: written and immediately dead */
      free_rows.push( res.row_of[n] );
      --live;
    }
    res.usage.push_back( live );
    res.mf = std::max( res.mf, live );
  }
  return res;
}

liveness_result liveness_in_gate_order( xmg_network const& net, std::span<node_id const> temporary_inputs )
{
  std::vector<node_id> order( net.size() );
  for ( auto i = 0u; i < net.size(); ++i )
  {
    order[i] = net.gate_at( i );
  }
  return liveness_mf( net, order, temporary_inputs );
}

scheduled_netlist make_scheduled( xmg_network net, std::vector<node_id> temporary_inputs )
{
  auto lr = liveness_in_gate_order( net, temporary_inputs );
  scheduled_netlist s;
  s.net = std::move( net );
  s.temporary_inputs = std::move( temporary_inputs );
  s.mf = lr.mf;
  s.usage = std::move( lr.usage );
  s.row_of = std::move( lr.row_of );
  return s;
}

std::uint32_t mf_lower_bound( xmg_network const& net, std::span<node_id const> temporary_inputs )
{
  auto const is_temp = temp_flags( net, temporary_inputs );
  std::vector<node_id> po_gates;
  for ( auto const& po : net.pos() )
  {
    if ( net.is_gate( po.index ) )
    {
      po_gates.push_back( po.index );
    }
  }
  std::sort( po_gates.begin(), po_gates.end() );
  po_gates.erase( std::unique( po_gates.begin(), po_gates.end() ), po_gates.end() );
  auto lb = static_cast<std::uint32_t>( po_gates.size() );
  if ( net.size() > 0u )
  {
    lb = std::max( lb, 1u );
  }
  for ( auto i = 0u; i < net.size(); ++i )
  {
    auto const fis = distinct_fanins( net.gate_of( net.gate_at( i ) ) );
    auto gates = 0u, temps = 0u;
    for ( auto const f : fis )
    {
      gates += net.is_gate( f ) ? 1u : 0u;
      temps += is_temp[f] ? 1u : 0u;
    }
    /* with a gate fan-in there is an earlier cycle after which all of them are live */
    if ( gates > 0u )
    {
      lb = std::max( lb, gates + temps );
    }
  }
  return lb;
}

schedule_result schedule_heuristic( schedule_request const& req )
{
  auto const& net = req.netlist;
  if ( req.mf_bound )
  {
    auto const lb = mf_lower_bound( net, req.temporary_inputs );
    if ( lb > *req.mf_bound )
    {
      return bound_exceeded{ lb };
    }
  }
  live_model const lm( net, req.temporary_inputs );
  auto const order = greedy_order( lm );
  return build_scheduled( net, order, req.temporary_inputs );
}

schedule_result schedule_exact( schedule_request const& req, std::uint32_t node_limit )
{
  auto const& net = req.netlist;
  if ( net.size() > node_limit || net.size() > 64u )
  {
    throw std::invalid_argument( "schedule_exact: netlist exceeds the node limit" );
  }
  live_model const lm( net, req.temporary_inputs );
  auto const greedy = greedy_order( lm );
  auto const greedy_mf = liveness_mf( net, greedy, req.temporary_inputs ).mf;
  auto const lb = mf_lower_bound( net, req.temporary_inputs );

  auto cap = greedy_mf; /* search for strictly better than the greedy result */
  if ( req.mf_bound && *req.mf_bound < greedy_mf )
  {
    cap = *req.mf_bound + 1u;
  }
  feasibility_search search( lm );
  std::vector<node_id> order;
  for ( auto limit = lb; limit < cap; ++limit )
  {
    if ( search.run( limit, order ) )
    {
      return build_scheduled( net, order, req.temporary_inputs );
    }
  }
  if ( req.mf_bound && *req.mf_bound < greedy_mf )
  {
    return bound_exceeded{ std::max( lb, *req.mf_bound + 1u ) };
  }
  return build_scheduled( net, greedy, req.temporary_inputs );
}

schedule_result schedule( schedule_request const& req, std::uint32_t exact_threshold )
{
  if ( req.netlist.size() <= exact_threshold && req.netlist.size() <= 64u )
  {
    return schedule_exact( req, std::max( exact_threshold, req.netlist.size() ) );
  }
  return schedule_heuristic( req );
}

peak_window find_peak_window( std::span<std::uint32_t const> usage, double lambda )
{
  if ( usage.empty() )
  {
    throw std::invalid_argument( "find_peak_window: empty trace" );
  }
  if ( !( lambda > 0.0 && lambda < 1.0 ) )
  {
    throw std::invalid_argument( "find_peak_window: lambda must lie in (0, 1)" );
  }
  peak_window w;
  w.mf = *std::max_element( usage.begin(), usage.end() );
  std::size_t first = 0, last = 0;
  for ( std::size_t i = 0; i < usage.size(); ++i )
  {
    if ( usage[i] == w.mf )
    {
      if ( w.p == 0u )
      {
        first = i;
        w.p = static_cast<std::uint32_t>( i + 1u );
      }
      last = i;
    }
  }
  auto const threshold = lambda * static_cast<double>( w.mf );
  while ( first > 0u && static_cast<double>( usage[first - 1u] ) >= threshold )
  {
    --first;
  }
  while ( last + 1u < usage.size() && static_cast<double>( usage[last + 1u] ) >= threshold )
  {
    ++last;
  }
  w.m = static_cast<std::uint32_t>( first + 1u );
  w.n = static_cast<std::uint32_t>( last + 1u );
  return w;
}

} // namespace imcc
