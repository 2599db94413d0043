#include <imcc/compiler.hpp>
#include <imcc/edp_model.hpp>
#include <imcc/instructions.hpp>
#include <imcc/mf_resub.hpp>
#include <imcc/netlist_io.hpp>
#include <imcc/passes.hpp>
#include <imcc/scheduler.hpp>

#include <benchmark/benchmark.h>

#include <map>
#include <string>

using namespace imcc;

namespace
{

xmg_network const& circuit( std::string const& name )
{
  static std::map<std::string, xmg_network> cache;
  auto it = cache.find( name );
  if ( it == cache.end() )
  {
    auto const path = std::string( IMCC_CIRCUIT_DIR ) + "/" + name + ".aag";
    it = cache.emplace( name, parse_aiger( read_text_file( path ), name ) ).first;
  }
  return it->second;
}

void bm_cleanup( benchmark::State& state, std::string const& name )
{
  auto const& net = circuit( name );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( cleanup( net ) );
  }
}

void bm_random_sequence( benchmark::State& state, std::string const& name )
{
  auto const net = cleanup( circuit( name ) );
  std::uint64_t seed = 0;
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( run_random_sequence( net, 10u, seed++ ) );
  }
}

void bm_schedule_heuristic( benchmark::State& state, std::string const& name )
{
  auto const net = cleanup( circuit( name ) );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( schedule_heuristic( { net } ) );
  }
}

void bm_schedule_exact( benchmark::State& state )
{
  /* the first `gates` gates of the multiplier, closed off with POs */
  auto const full = cleanup( circuit( "mult3" ) );
  auto const gates = static_cast<std::uint32_t>( state.range( 0 ) );
  xmg_network net( full.num_pis() );
  std::vector<signal> map( full.num_nodes() );
  for ( node_id n = 0; n <= full.num_pis(); ++n )
  {
    map[n] = { n, false };
  }
  std::vector<bool> used( full.num_nodes() );
  for ( auto i = 0u; i < gates && i < full.size(); ++i )
  {
    auto const n = full.gate_at( i );
    auto const& g = full.gate_of( n );
    auto const fi = [&]( signal s ) { used[s.index] = true; return map[s.index] ^ s.complemented; };
    map[n] = net.create_gate( g.kind, fi( g.fanins[0] ), fi( g.fanins[1] ), fi( g.fanins[2] ) );
  }
  for ( auto i = 0u; i < gates && i < full.size(); ++i )
  {
    if ( !used[full.gate_at( i )] )
    {
      net.create_po( map[full.gate_at( i )] );
    }
  }
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( schedule_exact( { net } ) );
  }
  state.counters["gates"] = static_cast<double>( net.size() );
}

void bm_mfresub( benchmark::State& state, std::string const& name )
{
  auto const d = std::get<scheduled_netlist>( schedule_heuristic( { cleanup( circuit( name ) ) } ) );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( mfresub( d, 20000u, 1u ) );
  }
}

void bm_emit( benchmark::State& state, std::string const& name )
{
  auto const d = std::get<scheduled_netlist>( schedule_heuristic( { cleanup( circuit( name ) ) } ) );
  auto const rows = d.net.num_pis() + d.mf / 2u + 2u;
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( emit_instructions( d, place( d, rows ) ) );
  }
}

void bm_compile( benchmark::State& state, std::string const& name )
{
  compiler_config cfg;
  cfg.rounds = static_cast<std::uint32_t>( state.range( 0 ) );
  cfg.n_trial = 20000u;
  auto const& net = circuit( name );
  for ( auto _ : state )
  {
    benchmark::DoNotOptimize( compile( net, cfg ) );
  }
}

} // namespace

BENCHMARK_CAPTURE( bm_cleanup, mult4, std::string( "mult4" ) );
BENCHMARK_CAPTURE( bm_cleanup, popcount9, std::string( "popcount9" ) );
BENCHMARK_CAPTURE( bm_random_sequence, mult4, std::string( "mult4" ) );
BENCHMARK_CAPTURE( bm_schedule_heuristic, mult4, std::string( "mult4" ) );
BENCHMARK_CAPTURE( bm_schedule_heuristic, dec4, std::string( "dec4" ) );
BENCHMARK( bm_schedule_exact )->DenseRange( 8, 20, 4 )->Unit( benchmark::kMicrosecond );
BENCHMARK_CAPTURE( bm_mfresub, mult4, std::string( "mult4" ) )->Unit( benchmark::kMillisecond );
BENCHMARK_CAPTURE( bm_emit, mult4, std::string( "mult4" ) );
BENCHMARK_CAPTURE( bm_compile, adder6, std::string( "adder6" ) )->Arg( 5 )->Arg( 20 )->Unit( benchmark::kMillisecond );
BENCHMARK_MAIN();
