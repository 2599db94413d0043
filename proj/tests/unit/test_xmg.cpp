#include <catch2/catch.hpp>

#include <imcc/xmg.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <random>

using namespace imcc;
using imcc::test::exhaustive_po_values;

namespace
{

signal pi( xmg_network const& net, std::uint32_t k ) { return { net.pi_at( k - 1u ), false }; }

/* Iteratively delete gates without references, starting from a disconnected root. */
std::vector<node_id> dead_after_disconnect( xmg_network const& net, node_id root )
{
  std::vector<std::uint32_t> refs( net.num_nodes(), 0u );
  for ( auto const& g : net.gates() )
  {
    for ( auto const& f : g.fanins )
    {
      ++refs[f.index];
    }
  }
  for ( auto const& po : net.pos() )
  {
    ++refs[po.index];
  }
  std::vector<bool> dead( net.num_nodes(), false );
  dead[root] = true;
  bool changed = true;
  while ( changed )
  {
    changed = false;
    std::vector<std::uint32_t> live_refs( net.num_nodes(), 0u );
    for ( node_id n = net.gate_at( 0 ); n < net.num_nodes(); ++n )
    {
      if ( dead[n] )
      {
        continue;
      }
      for ( auto const& f : net.gate_of( n ).fanins )
      {
        ++live_refs[f.index];
      }
    }
    for ( auto const& po : net.pos() )
    {
      if ( po.index != root )
      {
        ++live_refs[po.index];
      }
    }
    for ( node_id n = net.gate_at( 0 ); n < net.num_nodes(); ++n )
    {
      if ( !dead[n] && live_refs[n] == 0u && refs[n] > 0u )
      {
        dead[n] = true;
        changed = true;
      }
    }
  }
  std::vector<node_id> out;
  for ( node_id n = 0; n < net.num_nodes(); ++n )
  {
    if ( dead[n] )
    {
      out.push_back( n );
    }
  }
  return out;
}

} // namespace

TEST_CASE( "gates reference only earlier nodes", "[xmg]" )
{
  xmg_network net( 2u );
  auto const a = net.create_maj( pi( net, 1 ), pi( net, 2 ), constant_zero );
  CHECK( a.index == 3u );
  CHECK( net.size() == 1u );
  CHECK_THROWS_AS( net.create_maj( a, signal{ 4u, false }, constant_zero ), std::invalid_argument );
  CHECK_THROWS_AS( net.gate_of( 1u ), std::out_of_range );
}

TEST_CASE( "fanouts of a two-gate chain", "[xmg]" )
{
  xmg_network net( 3u );
  auto const n1 = net.create_maj( pi( net, 1 ), pi( net, 2 ), constant_zero );
  auto const n2 = net.create_xor( n1, pi( net, 3 ), constant_zero );
  net.create_po( n2 );

  auto const f1 = fanouts( net, n1.index );
  CHECK( f1.nodes == std::vector<node_id>{ n2.index } );
  CHECK_FALSE( f1.is_po );
  auto const f2 = fanouts( net, n2.index );
  CHECK( f2.nodes.empty() );
  CHECK( f2.is_po );
  CHECK_THROWS_AS( fanouts( net, 99u ), std::out_of_range );
}

TEST_CASE( "fanouts agree with a scan of all fan-in lists", "[xmg]" )
{
  std::mt19937_64 rng( 11u );
  for ( auto trial = 0; trial < 50; ++trial )
  {
    auto const net = test::random_xmg( rng, { .num_pis = 4, .num_gates = 12, .num_pos = 2 } );
    auto const lists = fanout_lists( net );
    for ( node_id n = 0; n < net.num_nodes(); ++n )
    {
      std::vector<node_id> scan;
      for ( node_id g = net.gate_at( 0 ); g < net.num_nodes(); ++g )
      {
        auto const& fi = net.gate_of( g ).fanins;
        if ( std::any_of( fi.begin(), fi.end(), [n]( signal s ) { return s.index == n; } ) )
        {
          scan.push_back( g );
        }
      }
      CHECK( fanouts( net, n ).nodes == scan );
      CHECK( lists[n] == scan );
    }
  }
}

TEST_CASE( "mffc of a chain and of a shared fan-in", "[xmg]" )
{
  xmg_network chain( 3u );
  auto const c1 = chain.create_maj( pi( chain, 1 ), pi( chain, 2 ), constant_zero );
  auto const c2 = chain.create_maj( c1, pi( chain, 3 ), constant_zero );
  auto const c3 = chain.create_xor( c2, pi( chain, 1 ), constant_zero );
  chain.create_po( c3 );
  CHECK( mffc( chain, c3.index ) == std::vector<node_id>{ c1.index, c2.index, c3.index } );

  xmg_network shared( 3u );
  auto const s1 = shared.create_maj( pi( shared, 1 ), pi( shared, 2 ), constant_zero );
  auto const s2 = shared.create_xor( s1, pi( shared, 3 ), constant_zero );
  auto const s3 = shared.create_maj( s1, pi( shared, 3 ), constant_zero );
  shared.create_po( s2 );
  shared.create_po( s3 );
  CHECK( mffc( shared, s2.index ) == std::vector<node_id>{ s2.index } );
  CHECK_THROWS_AS( mffc( shared, 1u ), std::invalid_argument );
}

TEST_CASE( "mffc matches an iterative dereference oracle", "[xmg]" )
{
  std::mt19937_64 rng( 12u );
  for ( auto trial = 0; trial < 100; ++trial )
  {
    auto const net = test::random_xmg( rng, { .num_pis = 4, .num_gates = 12, .num_pos = 2 } );
    for ( node_id root = net.gate_at( 0 ); root < net.num_nodes(); ++root )
    {
      auto const cone = mffc( net, root );
      CHECK( std::binary_search( cone.begin(), cone.end(), root ) );
      CHECK( cone == dead_after_disconnect( net, root ) );
    }
  }
}

TEST_CASE( "substitute merges duplicate gates", "[xmg]" )
{
  xmg_network net( 3u );
  auto const n1 = net.create_maj( pi( net, 1 ), pi( net, 2 ), constant_zero );
  auto const n2 = net.create_maj( pi( net, 1 ), pi( net, 2 ), constant_zero );
  auto const n3 = net.create_xor( n2, pi( net, 3 ), constant_zero );
  net.create_po( n3 );
  net.create_po( n1 );
  REQUIRE( net.size() == 3u );

  auto const merged = substitute( net, n2.index, n1 );
  CHECK( merged.size() == 2u );
  CHECK( merged.gate_of( 5u ).fanins[0] == n1 );
  CHECK( exhaustive_po_values( merged ) == exhaustive_po_values( net ) );

  CHECK( substitute( net, n2.index, n2 ) == net );
  CHECK_THROWS_AS( substitute( net, n3.index, n2 ), std::invalid_argument );
}

TEST_CASE( "substitute composes complemented edges", "[xmg]" )
{
  /* N5 = !N4 functionally; replace N5 by the complement of N4 */
  xmg_network net( 3u );
  auto const n4 = net.create_maj( pi( net, 1 ), pi( net, 2 ), pi( net, 3 ) );
  auto const n5 = net.create_maj( !pi( net, 1 ), !pi( net, 2 ), !pi( net, 3 ) );
  auto const n6 = net.create_xor( !n5, pi( net, 1 ), constant_zero );
  net.create_po( n6 );
  net.create_po( !n5 );
  net.create_po( n4 );
  auto const merged = substitute( net, n5.index, !n4 );
  CHECK( merged.size() == 2u );
  CHECK( exhaustive_po_values( merged ) == exhaustive_po_values( net ) );
}

TEST_CASE( "substitute keeps the relative order of survivors", "[xmg]" )
{
  std::mt19937_64 rng( 13u );
  auto checked = 0;
  for ( auto trial = 0; trial < 200 && checked < 40; ++trial )
  {
    auto const net = test::random_xmg( rng, { .num_pis = 4, .num_gates = 12, .num_pos = 2 } );
    auto const tts = exhaustive_po_values( net );
    /* look for a later gate functionally equal to an earlier one */
    for ( node_id j = net.gate_at( 1 ); j < net.num_nodes(); ++j )
    {
      for ( node_id i = net.gate_at( 0 ); i < j; ++i )
      {
        bool same = true, opposite = true;
        for ( std::uint64_t a = 0; a < 16u; ++a )
        {
          auto const v = test::evaluate( net, test::assignment( 4u, a ) );
          same = same && v[i] == v[j];
          opposite = opposite && v[i] != v[j];
        }
        if ( !same && !opposite )
        {
          continue;
        }
        auto const cone = mffc( net, j );
        if ( std::binary_search( cone.begin(), cone.end(), i ) )
        {
          continue;
        }
        auto const out = substitute( net, j, signal{ i, opposite } );
        CHECK( exhaustive_po_values( out ) == tts );
        CHECK( out.size() == net.size() - cone.size() );
        /* survivors appear in the same relative order: compare kinds */
        std::vector<gate_kind> before, after;
        for ( node_id n = net.gate_at( 0 ); n < net.num_nodes(); ++n )
        {
          if ( !std::binary_search( cone.begin(), cone.end(), n ) )
          {
            before.push_back( net.gate_of( n ).kind );
          }
        }
        for ( auto const& g : out.gates() )
        {
          after.push_back( g.kind );
        }
        CHECK( before == after );
        ++checked;
      }
    }
  }
  CHECK( checked > 0 );
}

TEST_CASE( "strash merges structural duplicates", "[xmg]" )
{
  xmg_network net( 3u );
  auto const a = net.create_maj( pi( net, 1 ), pi( net, 2 ), constant_zero );
  auto const b = net.create_maj( pi( net, 2 ), constant_zero, pi( net, 1 ) );
  auto const c = net.create_xor( !pi( net, 1 ), pi( net, 3 ), constant_zero );
  auto const d = net.create_xor( pi( net, 1 ), !pi( net, 3 ), constant_zero );
  net.create_po( net.create_maj( a, b, c ) );
  net.create_po( d );

  auto const h = strash( net );
  CHECK( h.size() == 3u );
  CHECK( exhaustive_po_values( h ) == exhaustive_po_values( net ) );
  CHECK( strash( h ).size() == h.size() );
}

TEST_CASE( "strash, sweep and reorder preserve functions", "[xmg]" )
{
  std::mt19937_64 rng( 14u );
  for ( auto trial = 0; trial < 100; ++trial )
  {
    auto const net = test::random_xmg( rng, { .num_pis = 5, .num_gates = 12, .num_pos = 3 } );
    auto const tts = exhaustive_po_values( net );
    auto const h = strash( net );
    CHECK( h.size() <= net.size() );
    CHECK( exhaustive_po_values( h ) == tts );
    CHECK( exhaustive_po_values( sweep_dangling( h ) ) == tts );

    std::vector<node_id> identity;
    for ( node_id n = net.gate_at( 0 ); n < net.num_nodes(); ++n )
    {
      identity.push_back( n );
    }
    CHECK( reorder( net, identity ) == net );
  }
}

TEST_CASE( "reorder rejects non-topological orders", "[xmg]" )
{
  auto const net = test::three_input_example();
  std::vector<node_id> const bad{ 6u, 5u, 4u };
  CHECK_THROWS_AS( reorder( net, bad ), std::invalid_argument );
  std::vector<node_id> const swapped{ 5u, 4u, 6u };
  auto const r = reorder( net, swapped );
  CHECK( exhaustive_po_values( r ) == exhaustive_po_values( net ) );
  CHECK( r.gate_of( 4u ).kind == gate_kind::xor3 );
}

TEST_CASE( "replace_gate drops the unreferenced old cone", "[xmg]" )
{
  xmg_network net( 3u );
  auto const a = net.create_maj( pi( net, 1 ), pi( net, 2 ), constant_zero );
  auto const b = net.create_maj( a, pi( net, 3 ), constant_zero );
  auto const c = net.create_xor( pi( net, 1 ), pi( net, 2 ), constant_zero );
  auto const f = net.create_xor( b, c, constant_zero );
  net.create_po( f );
  net.create_po( c );
  auto const out = replace_gate( net, f.index, gate{ gate_kind::maj, { c, pi( net, 3 ), constant_zero } } );
  CHECK( out.size() == 2u );
  CHECK( out.gate_of( 4u ).kind == gate_kind::xor3 );
  CHECK_THROWS_AS( replace_gate( net, b.index, gate{ gate_kind::maj, { c, c, c } } ), std::invalid_argument );
}

TEST_CASE( "normalize_gate canonical forms", "[xmg]" )
{
  auto const [m, mo] = normalize_gate( gate{ gate_kind::maj, { signal{ 3u, true }, signal{ 1u, true }, signal{ 2u, false } } } );
  CHECK( mo );
  CHECK( m.fanins == std::array{ signal{ 1u, false }, signal{ 2u, true }, signal{ 3u, false } } );
  auto const [x, xo] = normalize_gate( gate{ gate_kind::xor3, { signal{ 3u, true }, signal{ 1u, true }, signal{ 2u, true } } } );
  CHECK( xo );
  CHECK( x.fanins == std::array{ signal{ 1u, false }, signal{ 2u, false }, signal{ 3u, false } } );
}
