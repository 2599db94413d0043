#include <imcc/mf_resub.hpp>

#include <imcc/random.hpp>
#include <imcc/simulation.hpp>

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace imcc
{

namespace
{

constexpr std::uint64_t pattern_seed = 0x6d66726573756231ull;

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

/* Bit i set: function i of the triple matches the target.  Bits 0/1 are
   XOR with plain/complemented output; bits 2 + 2c (+1) are MAJ with
   complement class c (none, first, second, third fan-in). */
std::uint32_t match_triple( sim_vector const& t, sim_vector const& a, sim_vector const& b, sim_vector const& c )
{
  std::uint32_t alive = 0x3ffu;
  auto const words = t.bits.size();
  for ( std::size_t w = 0; w < words && alive != 0u; ++w )
  {
    auto const mask = w + 1u == words ? t.tail_mask() : ~std::uint64_t{ 0 };
    auto const tw = t.bits[w];
    auto const x = a.bits[w] ^ b.bits[w] ^ c.bits[w];
    std::uint32_t ok = 0;
    ok |= ( ( x ^ tw ) & mask ) == 0u ? 1u : 0u;
    ok |= ( ( ~x ^ tw ) & mask ) == 0u ? 2u : 0u;
    for ( auto cls = 0u; cls < 4u; ++cls )
    {
      auto const A = cls == 1u ? ~a.bits[w] : a.bits[w];
      auto const B = cls == 2u ? ~b.bits[w] : b.bits[w];
      auto const C = cls == 3u ? ~c.bits[w] : c.bits[w];
      auto const m = ( A & B ) | ( A & C ) | ( B & C );
      ok |= ( ( m ^ tw ) & mask ) == 0u ? ( 4u << ( 2u * cls ) ) : 0u;
      ok |= ( ( ~m ^ tw ) & mask ) == 0u ? ( 8u << ( 2u * cls ) ) : 0u;
    }
    alive &= ok;
  }
  return alive;
}

gate gate_of_match( std::uint32_t bit, std::array<signal, 3> const& s )
{
  if ( bit < 2u )
  {
    bool const out = bit == 1u;
    return gate{ gate_kind::xor3, { s[0] ^ out, s[1], s[2] } };
  }
  auto const cls = ( bit - 2u ) / 2u;
  bool const out = ( bit - 2u ) % 2u == 1u;
  /* !M(a,b,c) = M(!a,!b,!c) */
  return gate{ gate_kind::maj,
               { s[0] ^ ( ( cls == 1u ) != out ), s[1] ^ ( ( cls == 2u ) != out ), s[2] ^ ( ( cls == 3u ) != out ) } };
}

class support_cache
{
public:
  explicit support_cache( xmg_network const& net ) : net_( net ), cache_( net.num_nodes() ), done_( net.num_nodes(), false ) {}

  std::vector<node_id> const& operator()( node_id n )
  {
    if ( !done_[n] )
    {
      cache_[n] = dependent_pis( net_, n );
      done_[n] = true;
    }
    return cache_[n];
  }

private:
  xmg_network const& net_;
  std::vector<std::vector<node_id>> cache_;
  std::vector<bool> done_;
};

/* Lexicographic (i < j < k) enumeration or seeded sampling without replacement. */
template<class Visit>
bool for_each_triple( std::size_t d, std::uint64_t n_trial, std::uint64_t seed, Visit&& visit )
{
  if ( d < 3u )
  {
    return false;
  }
  auto const total = static_cast<std::uint64_t>( d ) * ( d - 1u ) * ( d - 2u ) / 6u;
  if ( total <= n_trial )
  {
    for ( std::size_t i = 0; i < d; ++i )
    {
      for ( std::size_t j = i + 1u; j < d; ++j )
      {
        for ( std::size_t k = j + 1u; k < d; ++k )
        {
          if ( visit( i, j, k ) )
          {
            return true;
          }
        }
      }
    }
    return false;
  }
  std::mt19937_64 rng( seed );
  std::uniform_int_distribution<std::size_t> pick( 0u, d - 1u );
  std::unordered_set<std::uint64_t> seen;
  seen.reserve( static_cast<std::size_t>( n_trial ) );
  while ( seen.size() < n_trial )
  {
    std::array<std::size_t, 3> t{ pick( rng ), pick( rng ), pick( rng ) };
    if ( t[0] == t[1] || t[0] == t[2] || t[1] == t[2] )
    {
      continue;
    }
    std::sort( t.begin(), t.end() );
    auto const key = ( static_cast<std::uint64_t>( t[0] ) * d + t[1] ) * d + t[2];
    if ( !seen.insert( key ).second )
    {
      continue;
    }
    if ( visit( t[0], t[1], t[2] ) )
    {
      return true;
    }
  }
  return false;
}

} // namespace

peak_set first_peak( scheduled_netlist const& design )
{
  auto const& net = design.net;
  if ( design.usage.empty() )
  {
    throw std::invalid_argument( "first_peak needs a design with at least one gate" );
  }
  peak_set ps;
  auto const it = std::max_element( design.usage.begin(), design.usage.end() );
  ps.p = static_cast<std::uint32_t>( it - design.usage.begin() ) + 1u;

  auto const po = po_flags( net );
  auto const last = last_use( net );
  auto const live_after_p = [&]( node_id v ) { return po[v] || last[v] > ps.p; };
  for ( auto const t : design.temporary_inputs )
  {
    if ( live_after_p( t ) )
    {
      ps.members.push_back( t );
    }
  }
  for ( auto n = net.gate_at( 0 ); n <= net.node_at_cycle( ps.p ); ++n )
  {
    if ( live_after_p( n ) )
    {
      ps.members.push_back( n );
    }
  }
  std::sort( ps.members.begin(), ps.members.end() );
  return ps;
}

std::optional<scheduled_netlist> mfresub_case1( scheduled_netlist const& design )
{
  auto const& net = design.net;
  if ( net.size() == 0u )
  {
    return std::nullopt;
  }
  auto const peak = first_peak( design );
  auto const sims = simulate( net, make_patterns( net.num_pis(), pattern_seed ) );
  for ( auto jt = peak.members.begin(); jt != peak.members.end(); ++jt )
  {
    auto const j = *jt;
    if ( !net.is_gate( j ) )
    {
      continue;
    }
    auto const cone = mffc( net, j );
    for ( auto it = peak.members.begin(); it != jt; ++it )
    {
      auto const i = *it;
      auto const m = check_candidate_equal( sims[j], sims[i] );
      if ( m == match::neither || std::binary_search( cone.begin(), cone.end(), i ) )
      {
        continue;
      }
      signal const s{ i, m == match::complement_equal };
      if ( validate_equivalence( net, signal{ j, false }, candidate{ s } ) == validation::equivalent )
      {
        return make_scheduled( substitute( net, j, s ), design.temporary_inputs );
      }
    }
  }
  return std::nullopt;
}

std::optional<scheduled_netlist> mfresub_case2( scheduled_netlist const& design, std::uint64_t n_trial,
                                                std::uint64_t seed )
{
  auto const& net = design.net;
  if ( net.size() == 0u )
  {
    return std::nullopt;
  }
  auto const peak = first_peak( design );
  auto const peak_node = net.node_at_cycle( peak.p );
  auto const po = po_flags( net );
  auto const fo = fanout_lists( net );
  auto const sims = simulate( net, make_patterns( net.num_pis(), pattern_seed ) );
  support_cache support( net );

  for ( auto const j : peak.members )
  {
    if ( po[j] )
    {
      continue;
    }
    std::vector<node_id> pending;
    for ( auto const c : fo[j] )
    {
      if ( c > peak_node )
      {
        pending.push_back( c );
      }
    }
    if ( pending.size() != 1u )
    {
      continue;
    }
    auto const f = pending.front();
    auto const& f_support = support( f );

    std::vector<node_id> divisors{ 0u };
    divisors.insert( divisors.end(), f_support.begin(), f_support.end() );
    auto const admit = [&]( node_id d ) {
      auto const& s = support( d );
      if ( std::includes( f_support.begin(), f_support.end(), s.begin(), s.end() ) )
      {
        divisors.push_back( d );
      }
    };
    for ( auto const d : peak.members )
    {
      if ( d != j )
      {
        admit( d );
      }
    }
    for ( auto d = peak_node + 1u; d < f; ++d )
    {
      admit( d );
    }
    std::sort( divisors.begin(), divisors.end() );
    divisors.erase( std::unique( divisors.begin(), divisors.end() ), divisors.end() );

    std::optional<gate> found;
    for_each_triple( divisors.size(), n_trial, derive_seed( seed, { j } ), [&]( std::size_t a, std::size_t b, std::size_t c ) {
      auto hits = match_triple( sims[f], sims[divisors[a]], sims[divisors[b]], sims[divisors[c]] );
      std::array<signal, 3> const s{ signal{ divisors[a], false }, signal{ divisors[b], false }, signal{ divisors[c], false } };
      while ( hits != 0u )
      {
        auto const bit = static_cast<std::uint32_t>( std::countr_zero( hits ) );
        hits &= hits - 1u;
        auto const g = gate_of_match( bit, s );
        if ( validate_equivalence( net, signal{ f, false }, candidate{ gate_candidate{ g.kind, g.fanins, false } } ) ==
             validation::equivalent )
        {
          found = g;
          return true;
        }
      }
      return false;
    } );
    if ( found )
    {
      return make_scheduled( replace_gate( net, f, *found ), design.temporary_inputs );
    }
  }
  return std::nullopt;
}

std::string_view to_string( resub_outcome o )
{
  switch ( o )
  {
  case resub_outcome::no_resub:
    return "no resub";
  case resub_outcome::no_change:
    return "no change";
  case resub_outcome::trade_off:
    return "trade off";
  case resub_outcome::less_mf:
    return "less MF";
  case resub_outcome::less_size:
    return "less size";
  default:
    return "both less";
  }
}

resub_outcome classify( std::uint32_t resubs, std::uint32_t size_before, std::uint32_t mf_before,
                        std::uint32_t size_after, std::uint32_t mf_after )
{
  if ( resubs == 0u )
  {
    return resub_outcome::no_resub;
  }
  if ( mf_after > mf_before )
  {
    return resub_outcome::trade_off;
  }
  auto const smaller = size_after < size_before;
  auto const lower = mf_after < mf_before;
  if ( smaller && lower )
  {
    return resub_outcome::both_less;
  }
  if ( smaller )
  {
    return resub_outcome::less_size;
  }
  return lower ? resub_outcome::less_mf : resub_outcome::no_change;
}

mfresub_result mfresub( scheduled_netlist const& design, std::uint64_t n_trial, std::uint64_t seed )
{
  mfresub_result r{ design };
  /* each step frees a peak row or removes gates; the cap only guards
     against cycling between equally good schedules */
  auto const max_steps = 4u * design.net.size() + 16u;
  for ( auto step = 0u; step < max_steps && r.design.net.size() > 0u; ++step )
  {
    if ( auto next = mfresub_case1( r.design ) )
    {
      r.design = std::move( *next );
      ++r.case1;
      continue;
    }
    if ( auto next = mfresub_case2( r.design, n_trial, derive_seed( seed, { step } ) ) )
    {
      r.design = std::move( *next );
      ++r.case2;
      continue;
    }
    break;
  }
  r.outcome = classify( r.case1 + r.case2, design.net.size(), design.mf, r.design.net.size(), r.design.mf );
  return r;
}

} // namespace imcc
