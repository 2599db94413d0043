#include <catch2/catch.hpp>

#include <imcc/critical_subnet.hpp>
#include <imcc/passes.hpp>

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

scheduled_netlist random_design( std::uint64_t seed, std::uint32_t pis, std::uint32_t gates )
{
  std::mt19937_64 rng( seed );
  auto const net = test::random_xmg( rng, { .num_pis = pis, .num_gates = gates, .num_pos = 3, .locality = 8 } );
  return std::get<scheduled_netlist>( schedule_heuristic( { net } ) );
}

design point( std::uint32_t size, std::uint32_t mf )
{
  design d;
  d.size = size;
  d.mf = mf;
  d.hash = size * 1000u + mf;
  return d;
}

/* Window [21, 25] of a netlist shaped like the peak example: five window
   operations reading two PIs and two earlier operations, two of them read
   afterwards. */
scheduled_netlist peak_example()
{
  xmg_network net( 8u );
  auto x = [&]( std::uint32_t i ) { return signal{ net.pi_at( i - 1u ), false }; };
  std::vector<signal> early;
  early.push_back( net.create_maj( x( 1 ), x( 2 ), x( 4 ) ) );
  for ( auto c = 2u; c <= 20u; ++c )
  {
    early.push_back( net.create_xor( early.back(), x( 1 + c % 8u ), x( 1 + ( c + 3u ) % 8u ) ) );
  }
  auto const op15 = early[14];
  auto const op20 = early[19];
  auto const w21 = net.create_maj( x( 3 ), op15, x( 6 ) );
  auto const w22 = net.create_xor( w21, op20, constant_zero );
  auto const w23 = net.create_maj( w22, x( 3 ), !op15 );
  auto const w24 = net.create_xor( w23, x( 6 ), w21 );
  auto const w25 = net.create_maj( w24, w22, op20 );
  auto const p1 = net.create_xor( w25, w23, x( 7 ) );
  net.create_po( p1 );
  net.create_po( w23 );
  return make_scheduled( net );
}

} // namespace

TEST_CASE( "extracting the whole schedule gives an isomorphic sub-netlist", "[critical-subnet]" )
{
  for ( std::uint64_t s = 0; s < 20u; ++s )
  {
    auto const d = random_design( s, 6u, 25u );
    auto const sub = extract( d, { 1u, 1u, d.net.size(), d.mf } );
    CHECK( sub.net.size() == d.net.size() );
    CHECK( sub.temporary_inputs.empty() );
    CHECK( sub.resident_rows == 0u );
    std::vector<node_id> used;
    for ( node_id pi = 1u; pi <= d.net.num_pis(); ++pi )
    {
      if ( !fanouts( d.net, pi ).nodes.empty() )
      {
        used.push_back( pi );
      }
    }
    CHECK( sub.boundary_pis == used );
    for ( auto i = 0u; i < sub.net.size(); ++i )
    {
      CHECK( sub.net.gates()[i].kind == d.net.gates()[i].kind );
    }
  }
}

TEST_CASE( "a one-gate window reads exactly the gate's fan-ins", "[critical-subnet]" )
{
  auto const d = make_scheduled( test::nine_input_example() );
  auto const sub = extract( d, { 4u, 4u, 4u, d.mf } ); // N4 = MAJ(N1, !N2, x8)
  CHECK( sub.net.size() == 1u );
  CHECK( sub.boundary_pis == std::vector<node_id>{ 8u, 10u, 11u } );
  CHECK( sub.boundary_pos == std::vector<node_id>{ 13u } );
  /* N1 and N2 are both read for the last time by N4 */
  CHECK( sub.temporary_inputs == std::vector<node_id>{ 2u, 3u } );
  CHECK( sub.resident_rows == 1u ); // N3
}

TEST_CASE( "the peak example window has two PI and two operation inputs and two outputs", "[critical-subnet]" )
{
  auto const d = peak_example();
  auto const sub = extract( d, { 21u, 21u, 25u, d.mf } );
  CHECK( sub.net.size() == 5u );
  auto const& net = d.net;
  CHECK( sub.boundary_pis ==
         std::vector<node_id>{ net.pi_at( 2 ), net.pi_at( 5 ), net.node_at_cycle( 15 ), net.node_at_cycle( 20 ) } );
  CHECK( sub.boundary_pos == std::vector<node_id>{ net.node_at_cycle( 23 ), net.node_at_cycle( 25 ) } );
}

TEST_CASE( "extract rejects empty windows", "[critical-subnet]" )
{
  auto const d = make_scheduled( test::nine_input_example() );
  CHECK_THROWS_AS( extract( d, { 3u, 3u, 2u, 1u } ), std::invalid_argument );
  CHECK_THROWS_AS( extract( d, { 0u, 1u, 1u, 1u } ), std::invalid_argument );
  CHECK_THROWS_AS( extract( d, { 5u, 5u, 6u, 1u } ), std::invalid_argument );
}

TEST_CASE( "boundary invariants hold on random windows", "[critical-subnet]" )
{
  std::mt19937_64 rng( 7u );
  for ( std::uint64_t s = 0; s < 60u; ++s )
  {
    auto const d = random_design( 100u + s, 7u, 30u );
    auto const size = d.net.size();
    std::uniform_int_distribution<std::uint32_t> pick( 1u, size );
    auto a = pick( rng ), b = pick( rng );
    if ( a > b )
    {
      std::swap( a, b );
    }
    auto const sub = extract( d, { a, a, b, d.mf } );
    auto const first = d.net.node_at_cycle( a );
    auto const last = d.net.node_at_cycle( b );
    for ( auto const v : sub.boundary_pis )
    {
      CHECK( ( d.net.is_pi( v ) || v < first ) );
    }
    auto const po = po_flags( d.net );
    for ( auto n = first; n <= last; ++n )
    {
      if ( std::find( sub.boundary_pos.begin(), sub.boundary_pos.end(), n ) != sub.boundary_pos.end() )
      {
        continue;
      }
      CHECK_FALSE( po[n] );
      for ( auto const c : fanouts( d.net, n ).nodes )
      {
        CHECK( c <= last );
      }
    }

    /* parent usage in the window = resident rows + sub usage, recounted from scratch */
    auto const parent = test::reference_usage( d.net, gate_order( d.net ) );
    auto const inner = test::reference_usage( sub.net, gate_order( sub.net ), sub.temporary_inputs );
    for ( auto c = a; c <= b; ++c )
    {
      CHECK( parent[c - 1u] == sub.resident_rows + inner[c - a] );
    }
  }
}

TEST_CASE( "splicing the unmodified sub-netlist reproduces the design", "[critical-subnet]" )
{
  for ( std::uint64_t s = 0; s < 30u; ++s )
  {
    auto const d = random_design( 200u + s, 6u, 24u );
    auto const w = find_peak_window( d.usage, 0.6 );
    auto const sub = extract( d, w );
    CHECK( reinsert( d, sub, sub.net ) == d.net );
  }
}

TEST_CASE( "splicing a smaller equivalent window removes exactly the saved gates", "[critical-subnet]" )
{
  /* window of three gates where the third duplicates the first */
  xmg_network net( 4u );
  signal const a{ 1u, false }, b{ 2u, false }, c{ 3u, false }, e{ 4u, false };
  auto const g0 = net.create_xor( a, b, e );
  auto const g1 = net.create_maj( a, b, c );
  auto const g2 = net.create_xor( g0, c, constant_zero );
  auto const g3 = net.create_maj( c, a, b );
  auto const g4 = net.create_xor( g1, g3, g2 );
  net.create_po( g4 );
  net.create_po( g2 );
  auto const d = make_scheduled( net );
  auto const sub = extract( d, { 2u, 2u, 4u, d.mf } );
  REQUIRE( sub.net.size() == 3u );
  auto const optimized = cleanup( sub.net );
  REQUIRE( optimized.size() == 2u );
  auto const out = reinsert( d, sub, optimized );
  CHECK( out.size() == net.size() - 1u );
  CHECK( test::exhaustive_po_values( out ) == test::exhaustive_po_values( net ) );
}

TEST_CASE( "spliced size is the parent size minus the window plus its replacement", "[critical-subnet]" )
{
  for ( std::uint64_t s = 0; s < 40u; ++s )
  {
    auto const d = random_design( 300u + s, 8u, 40u );
    auto const w = find_peak_window( d.usage, 0.5 );
    auto const sub = extract( d, w );
    auto const optimized = run_random_sequence( sub.net, 6u, s );
    auto const out = reinsert( d, sub, optimized );
    CHECK( out.size() == d.net.size() - sub.net.size() + optimized.size() );
    CHECK( test::exhaustive_po_values( out ) == test::exhaustive_po_values( d.net ) );
  }
}

TEST_CASE( "reinsert refuses a non-equivalent replacement", "[critical-subnet]" )
{
  auto const d = make_scheduled( test::nine_input_example() );
  auto const sub = extract( d, { 4u, 4u, 4u, d.mf } );
  xmg_network wrong( sub.net.num_pis() );
  wrong.create_po( wrong.create_xor( { 1u, false }, { 2u, false }, { 3u, false } ) );
  CHECK_THROWS_AS( reinsert( d, sub, wrong ), std::runtime_error );
}

TEST_CASE( "MF bounds come from the closest smaller frontier design", "[critical-subnet]" )
{
  pareto_set f;
  f.insert( point( 41u, 9u ) );
  f.insert( point( 42u, 8u ) );
  f.insert( point( 45u, 7u ) );
  CHECK( pareto_mf_bound( f, 43u, 1.0 ) == 7u );
  CHECK( pareto_mf_bound( f, 43u, 1.1 ) == 8u );
  CHECK( pareto_mf_bound( f, 45u, 1.0 ) == 6u );
  CHECK( pareto_mf_bound( f, 41u, 1.0 ) == 8u );
  CHECK_FALSE( pareto_mf_bound( f, 40u, 1.1 ).has_value() );
}
