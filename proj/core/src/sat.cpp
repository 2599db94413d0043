#include <imcc/sat.hpp>

#include <algorithm>
#include <cmath>

namespace imcc
{

namespace
{

constexpr sat_solver::literal no_literal = ~sat_solver::literal{ 0 };

double luby( double y, std::uint64_t x )
{
  std::uint64_t size = 1;
  std::uint64_t seq = 0;
  while ( size < x + 1 )
  {
    ++seq;
    size = 2 * size + 1;
  }
  while ( size - 1 != x )
  {
    size = ( size - 1 ) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow( y, static_cast<double>( seq ) );
}

} // namespace

std::uint32_t sat_solver::new_variable()
{
  auto const v = num_variables();
  assigns_.push_back( undef );
  phase_.push_back( false );
  levels_.push_back( 0 );
  reasons_.push_back( -1 );
  activity_.push_back( 0.0 );
  seen_.push_back( false );
  heap_pos_.push_back( -1 );
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert( v );
  return v;
}

std::int8_t sat_solver::value( literal l ) const
{
  auto const a = assigns_[l >> 1];
  return ( l & 1u ) ? static_cast<std::int8_t>( -a ) : a;
}

void sat_solver::enqueue( literal l, std::int32_t reason )
{
  auto const v = l >> 1;
  assigns_[v] = ( l & 1u ) ? -1 : 1;
  levels_[v] = level();
  reasons_[v] = reason;
  trail_.push_back( l );
}

bool sat_solver::add_clause( std::span<literal const> lits )
{
  if ( !ok_ )
  {
    return false;
  }
  cancel_until( 0 );
  std::vector<literal> c( lits.begin(), lits.end() );
  std::sort( c.begin(), c.end() );
  c.erase( std::unique( c.begin(), c.end() ), c.end() );
  std::vector<literal> kept;
  for ( auto i = 0u; i < c.size(); ++i )
  {
    if ( i + 1 < c.size() && ( c[i] ^ 1u ) == c[i + 1] )
    {
      return true; /* tautology */
    }
    auto const v = value( c[i] );
    if ( v == 1 )
    {
      return true;
    }
    if ( v == 0 )
    {
      kept.push_back( c[i] );
    }
  }
  if ( kept.empty() )
  {
    ok_ = false;
    return false;
  }
  if ( kept.size() == 1u )
  {
    enqueue( kept[0], -1 );
    ok_ = propagate() == -1;
    return ok_;
  }
  auto const ci = static_cast<std::uint32_t>( clauses_.size() );
  clauses_.push_back( clause{ std::move( kept ), false } );
  watches_[clauses_[ci].lits[0]].push_back( ci );
  watches_[clauses_[ci].lits[1]].push_back( ci );
  return true;
}

std::int32_t sat_solver::propagate()
{
  while ( qhead_ < trail_.size() )
  {
    literal const p = trail_[qhead_++];
    literal const false_lit = p ^ 1u;
    auto& ws = watches_[false_lit];
    std::size_t i = 0, j = 0;
    while ( i < ws.size() )
    {
      auto const ci = ws[i];
      auto& c = clauses_[ci].lits;
      if ( c[0] == false_lit )
      {
        std::swap( c[0], c[1] );
      }
      if ( value( c[0] ) == 1 )
      {
        ws[j++] = ws[i++];
        continue;
      }
      bool moved = false;
      for ( auto k = 2u; k < c.size(); ++k )
      {
        if ( value( c[k] ) != -1 )
        {
          std::swap( c[1], c[k] );
          watches_[c[1]].push_back( ci );
          moved = true;
          break;
        }
      }
      if ( moved )
      {
        ++i;
        continue;
      }
      ws[j++] = ws[i++];
      if ( value( c[0] ) == -1 )
      {
        while ( i < ws.size() )
        {
          ws[j++] = ws[i++];
        }
        ws.resize( j );
        qhead_ = trail_.size();
        return static_cast<std::int32_t>( ci );
      }
      enqueue( c[0], static_cast<std::int32_t>( ci ) );
    }
    ws.resize( j );
  }
  return -1;
}

void sat_solver::analyze( std::int32_t conflict, std::vector<literal>& learnt, std::uint32_t& backtrack_level )
{
  learnt.clear();
  learnt.push_back( no_literal );
  int path_count = 0;
  literal p = no_literal;
  auto index = static_cast<std::int64_t>( trail_.size() ) - 1;
  auto ci = conflict;
  do
  {
    auto const& c = clauses_[static_cast<std::size_t>( ci )].lits;
    for ( auto j = ( p == no_literal ? 0u : 1u ); j < c.size(); ++j )
    {
      auto const q = c[j];
      auto const v = q >> 1;
      if ( !seen_[v] && levels_[v] > 0 )
      {
        seen_[v] = true;
        bump( v );
        if ( levels_[v] >= level() )
        {
          ++path_count;
        }
        else
        {
          learnt.push_back( q );
        }
      }
    }
    while ( !seen_[trail_[static_cast<std::size_t>( index )] >> 1] )
    {
      --index;
    }
    p = trail_[static_cast<std::size_t>( index )];
    --index;
    ci = reasons_[p >> 1];
    seen_[p >> 1] = false;
    --path_count;
  } while ( path_count > 0 );
  learnt[0] = p ^ 1u;

  backtrack_level = 0;
  std::size_t max_i = 1;
  for ( auto i = 1u; i < learnt.size(); ++i )
  {
    if ( levels_[learnt[i] >> 1] > backtrack_level )
    {
      backtrack_level = levels_[learnt[i] >> 1];
      max_i = i;
    }
  }
  if ( learnt.size() > 1u )
  {
    std::swap( learnt[1], learnt[max_i] );
  }
  for ( auto const l : learnt )
  {
    seen_[l >> 1] = false;
  }
}

void sat_solver::cancel_until( std::uint32_t lvl )
{
  if ( level() <= lvl )
  {
    return;
  }
  for ( auto i = trail_.size(); i-- > trail_lim_[lvl]; )
  {
    auto const v = trail_[i] >> 1;
    phase_[v] = ( trail_[i] & 1u ) == 0u;
    assigns_[v] = undef;
    reasons_[v] = -1;
    heap_insert( v );
  }
  trail_.resize( trail_lim_[lvl] );
  trail_lim_.resize( lvl );
  qhead_ = trail_.size();
}

void sat_solver::bump( std::uint32_t var )
{
  activity_[var] += var_inc_;
  if ( activity_[var] > 1e100 )
  {
    for ( auto& a : activity_ )
    {
      a *= 1e-100;
    }
    var_inc_ *= 1e-100;
  }
  if ( heap_pos_[var] >= 0 )
  {
    heap_up( static_cast<std::uint32_t>( heap_pos_[var] ) );
  }
}

void sat_solver::heap_insert( std::uint32_t var )
{
  if ( heap_pos_[var] >= 0 )
  {
    return;
  }
  heap_pos_[var] = static_cast<std::int32_t>( heap_.size() );
  heap_.push_back( var );
  heap_up( static_cast<std::uint32_t>( heap_.size() - 1 ) );
}

void sat_solver::heap_up( std::uint32_t pos )
{
  auto const v = heap_[pos];
  while ( pos > 0 )
  {
    auto const parent = ( pos - 1 ) / 2;
    if ( activity_[heap_[parent]] >= activity_[v] )
    {
      break;
    }
    heap_[pos] = heap_[parent];
    heap_pos_[heap_[pos]] = static_cast<std::int32_t>( pos );
    pos = parent;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<std::int32_t>( pos );
}

void sat_solver::heap_down( std::uint32_t pos )
{
  auto const v = heap_[pos];
  auto const n = static_cast<std::uint32_t>( heap_.size() );
  while ( true )
  {
    auto child = 2 * pos + 1;
    if ( child >= n )
    {
      break;
    }
    if ( child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]] )
    {
      ++child;
    }
    if ( activity_[heap_[child]] <= activity_[v] )
    {
      break;
    }
    heap_[pos] = heap_[child];
    heap_pos_[heap_[pos]] = static_cast<std::int32_t>( pos );
    pos = child;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<std::int32_t>( pos );
}

std::uint32_t sat_solver::heap_pop()
{
  auto const top = heap_.front();
  heap_pos_[top] = -1;
  heap_.front() = heap_.back();
  heap_.pop_back();
  if ( !heap_.empty() )
  {
    heap_pos_[heap_.front()] = 0;
    heap_down( 0 );
  }
  return top;
}

sat_solver::literal sat_solver::pick_branch()
{
  while ( !heap_.empty() )
  {
    auto const v = heap_pop();
    if ( assigns_[v] == undef )
    {
      return make_literal( v, !phase_[v] );
    }
  }
  return no_literal;
}

sat_solver::result sat_solver::solve( std::uint64_t conflict_limit )
{
  if ( !ok_ )
  {
    return result::unsatisfiable;
  }
  cancel_until( 0 );
  if ( propagate() != -1 )
  {
    ok_ = false;
    return result::unsatisfiable;
  }

  std::uint64_t const start = conflicts_;
  std::vector<literal> learnt;
  for ( std::uint64_t restart = 0;; ++restart )
  {
    auto const budget = static_cast<std::uint64_t>( luby( 2.0, restart ) * 100.0 );
    std::uint64_t local = 0;
    while ( true )
    {
      auto const conflict = propagate();
      if ( conflict != -1 )
      {
        ++conflicts_;
        ++local;
        if ( level() == 0 )
        {
          ok_ = false;
          return result::unsatisfiable;
        }
        std::uint32_t bt = 0;
        analyze( conflict, learnt, bt );
        cancel_until( bt );
        if ( learnt.size() == 1u )
        {
          enqueue( learnt[0], -1 );
        }
        else
        {
          auto const ci = static_cast<std::uint32_t>( clauses_.size() );
          clauses_.push_back( clause{ learnt, true } );
          watches_[learnt[0]].push_back( ci );
          watches_[learnt[1]].push_back( ci );
          enqueue( learnt[0], static_cast<std::int32_t>( ci ) );
        }
        var_inc_ /= 0.95;
        continue;
      }
      if ( conflicts_ - start >= conflict_limit )
      {
        cancel_until( 0 );
        return result::unknown;
      }
      if ( local >= budget )
      {
        cancel_until( 0 );
        break;
      }
      auto const next = pick_branch();
      if ( next == no_literal )
      {
        model_ = assigns_;
        cancel_until( 0 );
        return result::satisfiable;
      }
      trail_lim_.push_back( static_cast<std::uint32_t>( trail_.size() ) );
      enqueue( next, -1 );
    }
  }
}

} // namespace imcc
