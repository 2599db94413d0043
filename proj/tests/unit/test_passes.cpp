#include <catch2/catch.hpp>

#include <imcc/passes.hpp>

#include "oracles.hpp"

#include <random>

using namespace imcc;

namespace
{

xmg_network random_net( std::uint64_t seed, std::uint32_t pis, std::uint32_t gates )
{
  std::mt19937_64 rng( seed );
  return test::random_xmg( rng, { .num_pis = pis, .num_gates = gates, .num_pos = 2, .locality = 6 } );
}

} // namespace

TEST_CASE( "pass names round-trip", "[passes]" )
{
  for ( auto const id : all_passes )
  {
    CHECK( parse_pass_id( to_string( id ) ) == id );
  }
  CHECK_FALSE( parse_pass_id( "balance" ).has_value() );
}

TEST_CASE( "every pass preserves the function and never grows the netlist", "[passes]" )
{
  for ( std::uint64_t s = 0; s < 40u; ++s )
  {
    auto const net = random_net( s, 3u + static_cast<std::uint32_t>( s % 6u ), 8u + static_cast<std::uint32_t>( s % 17u ) );
    auto const expected = test::exhaustive_po_values( net );
    for ( auto const id : all_passes )
    {
      auto const out = run_pass( net, id, s * 31u + 7u );
      INFO( "seed " << s << " pass " << to_string( id ) );
      CHECK( out.size() <= net.size() );
      CHECK( out.num_pis() == net.num_pis() );
      CHECK( test::exhaustive_po_values( out ) == expected );
    }
  }
}

TEST_CASE( "constant propagation folds trivial gates", "[passes]" )
{
  xmg_network net( 2u );
  auto const a = signal{ 1u, false }, b = signal{ 2u, false };
  auto const g1 = net.create_maj( a, !a, b );             // b
  auto const g2 = net.create_xor( g1, b, constant_zero ); // 0
  auto const g3 = net.create_maj( g2, a, constant_one );  // a
  net.create_po( g3 );
  auto const out = run_pass( net, pass_id::constant_propagate, 0u );
  CHECK( out.size() == 0u );
  REQUIRE( out.num_pos() == 1u );
  CHECK( out.pos()[0] == a );
}

TEST_CASE( "structural hashing merges duplicates", "[passes]" )
{
  xmg_network net( 3u );
  signal const a{ 1u, false }, b{ 2u, false }, c{ 3u, false };
  auto const g1 = net.create_maj( a, b, c );
  auto const g2 = net.create_maj( c, a, b );
  net.create_po( net.create_xor( g1, g2, a ) );
  auto const out = run_pass( net, pass_id::dedup_strash, 0u );
  CHECK( out.size() == 2u );
}

TEST_CASE( "maj-rewrite applies absorption", "[passes]" )
{
  xmg_network net( 3u );
  signal const a{ 1u, false }, b{ 2u, false }, z{ 3u, false };
  auto const inner = net.create_maj( a, !b, z );
  net.create_po( net.create_maj( a, b, inner ) );
  auto const out = run_pass( net, pass_id::maj_rewrite, 0u );
  CHECK( out.size() == 0u );
  CHECK( out.pos()[0] == a );
}

TEST_CASE( "maj-rewrite applies distributivity", "[passes]" )
{
  xmg_network net( 5u );
  signal const x{ 1u, false }, y{ 2u, false }, u{ 3u, false }, v{ 4u, false }, z{ 5u, false };
  auto const c1 = net.create_maj( x, y, u );
  auto const c2 = net.create_maj( x, y, v );
  net.create_po( net.create_maj( c1, c2, z ) );
  auto const expected = test::exhaustive_po_values( net );
  auto const out = run_pass( net, pass_id::maj_rewrite, 0u );
  CHECK( out.size() == 2u );
  CHECK( test::exhaustive_po_values( out ) == expected );
}

TEST_CASE( "xor-rewrite cancels shared leaves", "[passes]" )
{
  xmg_network net( 4u );
  signal const a{ 1u, false }, b{ 2u, false }, d{ 3u, false }, e{ 4u, false };
  auto const inner = net.create_xor( a, d, e );
  net.create_po( net.create_xor( a, b, inner ) );
  auto const out = run_pass( net, pass_id::xor_rewrite, 0u );
  CHECK( out.size() == 1u );
  CHECK( test::exhaustive_po_values( out ) == test::exhaustive_po_values( net ) );
}

TEST_CASE( "xor-rewrite extracts XOR from a majority cone", "[passes]" )
{
  xmg_network net( 2u );
  signal const a{ 1u, false }, b{ 2u, false };
  auto const p = net.create_maj( a, !b, constant_zero );  // a & !b
  auto const q = net.create_maj( !a, b, constant_zero );  // !a & b
  net.create_po( net.create_maj( p, q, constant_one ) ); // p | q
  auto const out = run_pass( net, pass_id::xor_rewrite, 0u );
  CHECK( out.size() == 1u );
  CHECK( out.gates()[0].kind == gate_kind::xor3 );
  CHECK( test::exhaustive_po_values( out ) == test::exhaustive_po_values( net ) );
}

TEST_CASE( "window-resub-0 replaces a gate by an equivalent divisor", "[passes]" )
{
  xmg_network net( 3u );
  signal const a{ 1u, false }, b{ 2u, false }, c{ 3u, false };
  auto const g = net.create_maj( a, b, c );
  net.create_po( g );
  auto const both = net.create_maj( a, b, constant_zero );
  auto const either = net.create_maj( a, b, constant_one );
  net.create_po( net.create_maj( g, both, either ) ); // equals g
  auto const out = run_pass( net, pass_id::window_resub_0, 1u );
  CHECK( out.size() < net.size() );
  CHECK( test::exhaustive_po_values( out ) == test::exhaustive_po_values( net ) );
}

TEST_CASE( "window-resub-1 finds a smaller single-gate replacement", "[passes]" )
{
  xmg_network net( 3u );
  signal const a{ 1u, false }, b{ 2u, false }, c{ 3u, false };
  /* a & (b | c) | (b & c) spelled out with four gates equals MAJ(a, b, c) */
  auto const bc_or = net.create_maj( b, c, constant_one );
  auto const bc_and = net.create_maj( b, c, constant_zero );
  auto const t = net.create_maj( a, bc_or, constant_zero );
  net.create_po( net.create_maj( t, bc_and, constant_one ) );
  auto const out = run_pass( net, pass_id::window_resub_1, 3u );
  CHECK( out.size() == 1u );
  CHECK( test::exhaustive_po_values( out ) == test::exhaustive_po_values( net ) );
}

TEST_CASE( "passes are deterministic in their seed", "[passes]" )
{
  auto const net = random_net( 99u, 7u, 30u );
  for ( auto const id : all_passes )
  {
    CHECK( run_pass( net, id, 5u ) == run_pass( net, id, 5u ) );
  }
  CHECK( run_random_sequence( net, 10u, 42u ) == run_random_sequence( net, 10u, 42u ) );
}

TEST_CASE( "cleanup is idempotent", "[passes]" )
{
  for ( std::uint64_t s = 0; s < 20u; ++s )
  {
    auto const net = random_net( 1000u + s, 5u, 20u );
    auto const once = cleanup( net );
    CHECK( cleanup( once ) == once );
    CHECK( test::exhaustive_po_values( once ) == test::exhaustive_po_values( net ) );
  }
}

TEST_CASE( "random sequences preserve the function on wide netlists", "[passes]" )
{
  for ( std::uint64_t s = 0; s < 10u; ++s )
  {
    auto const net = random_net( 500u + s, 12u, 40u );
    auto const out = run_random_sequence( net, 10u, s );
    CHECK( out.size() <= net.size() );
    CHECK( test::exhaustive_po_values( out ) == test::exhaustive_po_values( net ) );
  }
}
