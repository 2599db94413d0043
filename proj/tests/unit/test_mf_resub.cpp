#include <catch2/catch.hpp>

#include <imcc/critical_subnet.hpp>
#include <imcc/mf_resub.hpp>

#include "oracles.hpp"

#include <random>

using namespace imcc;

namespace
{

std::vector<node_id> gate_order( xmg_network const& net )
{
  std::vector<node_id> v;
  for ( auto i = 0u; i < net.size(); ++i )
  {
    v.push_back( net.gate_at( i ) );
  }
  return v;
}

/* Values in memory after `cycle`, recounted from the fan-out lists. */
std::vector<node_id> live_after( scheduled_netlist const& d, std::uint32_t cycle )
{
  std::vector<node_id> live;
  auto const& net = d.net;
  for ( auto const t : d.temporary_inputs )
  {
    auto const fo = fanouts( net, t );
    if ( fo.is_po || ( !fo.nodes.empty() && net.cycle_of( fo.nodes.back() ) > cycle ) )
    {
      live.push_back( t );
    }
  }
  for ( auto c = 1u; c <= cycle; ++c )
  {
    auto const n = net.node_at_cycle( c );
    auto const fo = fanouts( net, n );
    if ( fo.is_po || ( !fo.nodes.empty() && net.cycle_of( fo.nodes.back() ) > cycle ) )
    {
      live.push_back( n );
    }
  }
  return live;
}

scheduled_netlist random_design( std::uint64_t seed, std::uint32_t pis, std::uint32_t gates )
{
  std::mt19937_64 rng( seed );
  auto const net = test::random_xmg( rng, { .num_pis = pis, .num_gates = gates, .num_pos = 3, .locality = 8 } );
  return std::get<scheduled_netlist>( schedule_heuristic( { net } ) );
}

/* Peak of four rows after cycle 4; j (cycle 1) is read once more by f
   (cycle 7), and b (cycle 6) recomputes j's function after the peak. */
scheduled_netlist freeable_peak( bool j_is_po )
{
  xmg_network net( 4u );
  signal const x1{ 1u, false }, x2{ 2u, false }, x3{ 3u, false }, x4{ 4u, false };
  auto const j = net.create_maj( x1, x2, x3 );
  auto const u = net.create_xor( x1, x3, x4 );
  auto const v = net.create_maj( x2, x3, x4 );
  auto const w = net.create_xor( x1, x2, x4 );
  if ( j_is_po )
  {
    /* every peak member is an output, so no member can be freed */
    net.create_po( u );
    net.create_po( v );
    net.create_po( w );
    net.create_po( j );
  }
  else
  {
    net.create_po( net.create_maj( u, v, w ) );
  }
  auto const b = net.create_maj( !x1, !x2, !x3 );
  net.create_po( !b );
  net.create_po( net.create_xor( j, x4, constant_zero ) );
  return make_scheduled( net );
}

} // namespace

TEST_CASE( "the first peak is the first maximum of the trace", "[mf-resub]" )
{
  xmg_network net( 4u );
  signal const x1{ 1u, false }, x2{ 2u, false }, x3{ 3u, false }, x4{ 4u, false };
  auto const g1 = net.create_maj( x1, x2, x3 );
  auto const g2 = net.create_maj( x1, x2, x4 );
  auto const g3 = net.create_maj( x1, x3, x4 );
  net.create_po( net.create_xor( g1, x2, x3 ) );
  net.create_po( net.create_xor( g2, g3, x1 ) );
  auto const d = make_scheduled( net );
  REQUIRE( d.usage == std::vector<std::uint32_t>{ 1u, 2u, 3u, 3u, 2u } );
  auto const ps = first_peak( d );
  CHECK( ps.p == 3u );
  CHECK( ps.members == std::vector<node_id>{ g1.index, g2.index, g3.index } );
}

TEST_CASE( "the first peak of the three-input example holds N1 and N2", "[mf-resub]" )
{
  auto const d = make_scheduled( test::three_input_example() );
  auto const ps = first_peak( d );
  CHECK( ps.p == 2u );
  CHECK( ps.members == std::vector<node_id>{ 4u, 5u } );
}

TEST_CASE( "peak members match the MF and a recount of live values", "[mf-resub]" )
{
  for ( std::uint64_t s = 0; s < 60u; ++s )
  {
    auto const d = random_design( s, 6u, 30u );
    auto const ps = first_peak( d );
    CHECK( ps.members.size() == d.mf );
    CHECK( ps.members == live_after( d, ps.p ) );
    CHECK( test::reference_usage( d.net, gate_order( d.net ) )[ps.p - 1u] == d.mf );

    /* also on extracted windows with temporary inputs */
    auto const sub = extract( d, find_peak_window( d.usage, 0.6 ) );
    auto const sd = make_scheduled( sub.net, sub.temporary_inputs );
    auto const sp = first_peak( sd );
    CHECK( sp.members.size() == sd.mf );
    CHECK( sp.members == live_after( sd, sp.p ) );
  }
}

TEST_CASE( "first_peak rejects an empty design", "[mf-resub]" )
{
  xmg_network net( 2u );
  net.create_po( { 1u, false } );
  CHECK_THROWS_AS( first_peak( make_scheduled( net ) ), std::invalid_argument );
}

TEST_CASE( "case 1 merges duplicate peak members", "[mf-resub]" )
{
  xmg_network net( 3u );
  signal const x1{ 1u, false }, x2{ 2u, false }, x3{ 3u, false };
  auto const a = net.create_maj( x1, x2, constant_zero );
  auto const b = net.create_maj( x1, x2, constant_zero );
  net.create_po( net.create_xor( a, x3, constant_zero ) );
  net.create_po( net.create_xor( b, x1, x3 ) );
  auto const d = make_scheduled( net );
  auto const r = mfresub_case1( d );
  REQUIRE( r.has_value() );
  CHECK( r->net.size() == d.net.size() - 1u );
  CHECK( r->net.gates()[1].fanins[0].index != b.index );
  CHECK( test::exhaustive_po_values( r->net ) == test::exhaustive_po_values( net ) );
}

TEST_CASE( "case 1 uses a complemented edge for a negated duplicate", "[mf-resub]" )
{
  xmg_network net( 3u );
  signal const x1{ 1u, false }, x2{ 2u, false }, x3{ 3u, false };
  auto const a = net.create_maj( x1, x2, x3 );
  auto const b = net.create_maj( !x1, !x2, !x3 );
  net.create_po( net.create_xor( a, x3, constant_zero ) );
  net.create_po( net.create_xor( b, x1, x2 ) );
  auto const d = make_scheduled( net );
  auto const r = mfresub_case1( d );
  REQUIRE( r.has_value() );
  CHECK( r->net.size() == 3u );
  bool complemented_use = false;
  for ( auto const& g : r->net.gates() )
  {
    for ( auto const& f : g.fanins )
    {
      complemented_use = complemented_use || ( f.index == a.index && f.complemented );
    }
  }
  CHECK( complemented_use );
  CHECK( test::exhaustive_po_values( r->net ) == test::exhaustive_po_values( net ) );
}

TEST_CASE( "case 1 leaves distinct peak members alone", "[mf-resub]" )
{
  auto const d = make_scheduled( test::three_input_example() );
  CHECK_FALSE( mfresub_case1( d ).has_value() );
}

TEST_CASE( "case 2 rebuilds the pending consumer and frees the peak row", "[mf-resub]" )
{
  auto const d = freeable_peak( false );
  REQUIRE( d.mf == 4u );
  CHECK_FALSE( mfresub_case1( d ).has_value() );
  auto const r = mfresub_case2( d, default_n_trial, 1u );
  REQUIRE( r.has_value() );
  CHECK( r->net.size() <= d.net.size() );
  CHECK( test::reference_mf( r->net, gate_order( r->net ) ) == 3u );
  CHECK( r->mf == 3u );
  CHECK( test::exhaustive_po_values( r->net ) == test::exhaustive_po_values( d.net ) );
}

TEST_CASE( "case 2 skips peak members that are POs", "[mf-resub]" )
{
  auto const d = freeable_peak( true );
  CHECK_FALSE( mfresub_case2( d, default_n_trial, 1u ).has_value() );
}

TEST_CASE( "case 2 respects a small trial budget deterministically", "[mf-resub]" )
{
  auto const d = freeable_peak( false );
  auto const a = mfresub_case2( d, 3u, 9u );
  auto const b = mfresub_case2( d, 3u, 9u );
  CHECK( a.has_value() == b.has_value() );
  if ( a && b )
  {
    CHECK( a->net == b->net );
  }
  CHECK_FALSE( mfresub_case2( d, 0u, 9u ).has_value() );
}

TEST_CASE( "outcome categories", "[mf-resub]" )
{
  CHECK( classify( 0u, 10u, 5u, 10u, 5u ) == resub_outcome::no_resub );
  CHECK( classify( 2u, 10u, 5u, 10u, 5u ) == resub_outcome::no_change );
  CHECK( classify( 1u, 10u, 5u, 9u, 6u ) == resub_outcome::trade_off );
  CHECK( classify( 1u, 10u, 5u, 10u, 6u ) == resub_outcome::trade_off );
  CHECK( classify( 1u, 10u, 5u, 10u, 4u ) == resub_outcome::less_mf );
  CHECK( classify( 1u, 10u, 5u, 9u, 5u ) == resub_outcome::less_size );
  CHECK( classify( 1u, 10u, 5u, 9u, 4u ) == resub_outcome::both_less );
  CHECK( to_string( resub_outcome::both_less ) == "both less" );
}

TEST_CASE( "mfresub without equivalences returns the input", "[mf-resub]" )
{
  xmg_network net( 3u );
  net.create_po( net.create_maj( { 1u, false }, { 2u, false }, { 3u, false } ) );
  auto const d = make_scheduled( net );
  auto const r = mfresub( d );
  CHECK( r.outcome == resub_outcome::no_resub );
  CHECK( r.design.net == d.net );
}

TEST_CASE( "mfresub shrinks duplicated logic", "[mf-resub]" )
{
  std::mt19937_64 rng( 5u );
  auto base = test::random_xmg( rng, { .num_pis = 6, .num_gates = 12, .num_pos = 2 } );
  /* duplicate every gate and drive a second set of POs from the copies */
  auto net = base;
  std::vector<signal> copy( base.num_nodes() );
  for ( node_id n = 0; n <= base.num_pis(); ++n )
  {
    copy[n] = { n, false };
  }
  for ( auto i = 0u; i < base.size(); ++i )
  {
    auto const& g = base.gates()[i];
    copy[base.gate_at( i )] = net.create_gate( g.kind, copy[g.fanins[0].index] ^ g.fanins[0].complemented,
                                               copy[g.fanins[1].index] ^ g.fanins[1].complemented,
                                               copy[g.fanins[2].index] ^ g.fanins[2].complemented );
  }
  for ( auto const& po : base.pos() )
  {
    net.create_po( copy[po.index] ^ po.complemented );
  }
  auto const d = make_scheduled( net );
  auto const r = mfresub( d );
  CHECK( r.design.net.size() < d.net.size() );
  CHECK( r.case1 > 0u );
  CHECK( test::exhaustive_po_values( r.design.net ) == test::exhaustive_po_values( net ) );
}

TEST_CASE( "mfresub preserves functions and flags every MF increase", "[mf-resub]" )
{
  for ( std::uint64_t s = 0; s < 60u; ++s )
  {
    auto const d = random_design( 700u + s, 5u + static_cast<std::uint32_t>( s % 8u ), 20u + static_cast<std::uint32_t>( s % 25u ) );
    auto const r = mfresub( d, 20000u, s );
    INFO( "seed " << s );
    CHECK( r.design.net.size() <= d.net.size() );
    CHECK( test::exhaustive_po_values( r.design.net ) == test::exhaustive_po_values( d.net ) );
    CHECK( r.design.mf == test::reference_mf( r.design.net, gate_order( r.design.net ) ) );
    if ( r.design.mf > d.mf )
    {
      CHECK( r.outcome == resub_outcome::trade_off );
    }
    CHECK( r.outcome == classify( r.case1 + r.case2, d.net.size(), d.mf, r.design.net.size(), r.design.mf ) );
  }
}

TEST_CASE( "case 2 finds the plain majority hidden in the three-input example", "[mf-resub]" )
{
  auto const d = make_scheduled( test::three_input_example() );
  auto const r = mfresub_case2( d, default_n_trial, 0u );
  REQUIRE( r.has_value() );
  CHECK( r->mf < d.mf );
  CHECK( test::exhaustive_po_values( r->net ) == test::exhaustive_po_values( d.net ) );
}
