#include <imcc/compiler.hpp>

#include <imcc/passes.hpp>
#include <imcc/random.hpp>

#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

namespace imcc
{

namespace
{

struct round_output
{
  round_record record;
  std::vector<design> candidates;
};

scheduled_netlist scheduled_of( schedule_result r )
{
  return std::get<scheduled_netlist>( std::move( r ) );
}

round_output run_round( pareto_set const& snapshot, compiler_config const& cfg, std::uint32_t round )
{
  round_output out;
  auto& rec = out.record;
  rec.round = round;

  std::mt19937_64 rng( derive_seed( cfg.seed, { round, 0u } ) );
  std::uniform_int_distribution<std::size_t> pick( 0u, snapshot.size() - 1u );
  auto const& base = snapshot.designs()[pick( rng )];
  rec.base_size = base.size;
  rec.base_mf = base.mf;
  if ( base.size == 0u )
  {
    rec.status = round_status::empty_design;
    return out;
  }

  rec.window = find_peak_window( base.scheduled.usage, cfg.lambda );
  auto const sub = extract( base.scheduled, rec.window );
  auto const optimized = run_random_sequence( sub.net, cfg.k_cmds, derive_seed( cfg.seed, { round, 1u } ) );
  rec.sub_size = sub.net.size();
  rec.sub_optimized_size = optimized.size();

  auto const new_size = base.size - sub.net.size() + optimized.size();
  rec.mf_bound = pareto_mf_bound( snapshot, new_size, cfg.beta );
  std::optional<std::uint32_t> sub_bound;
  if ( rec.mf_bound )
  {
    if ( *rec.mf_bound < sub.resident_rows )
    {
      rec.status = round_status::bound_exceeded;
      return out;
    }
    sub_bound = *rec.mf_bound - sub.resident_rows;
  }
  auto sub_schedule = schedule( { optimized, sub.temporary_inputs, sub_bound }, cfg.exact_threshold );
  if ( is_bound_exceeded( sub_schedule ) )
  {
    rec.status = round_status::bound_exceeded;
    return out;
  }
  rec.status = round_status::evaluated;

  auto const spliced = sweep_dangling( reinsert( base.scheduled, sub, scheduled_of( std::move( sub_schedule ) ).net ) );
  auto g = make_scheduled( spliced );
  rec.window_mf = g.mf;
  if ( !rec.mf_bound || g.mf <= *rec.mf_bound )
  {
    auto full = scheduled_of( schedule( { g.net }, cfg.exact_threshold ) );
    if ( full.mf < g.mf )
    {
      g = std::move( full );
    }
  }
  rec.size = g.net.size();
  rec.mf = g.mf;

  auto resub = mfresub( g, cfg.n_trial, derive_seed( cfg.seed, { round, 2u } ) );
  rec.resub = resub.outcome;
  rec.resub_size = resub.design.net.size();
  rec.resub_mf = resub.design.mf;

  auto const origin = "round " + std::to_string( round );
  out.candidates.push_back( make_design( std::move( g ), origin ) );
  if ( resub.case1 + resub.case2 > 0u )
  {
    out.candidates.push_back( make_design( std::move( resub.design ), origin + " mfresub" ) );
  }
  return out;
}

} // namespace

void compiler_config::validate() const
{
  if ( !( lambda > 0.0 && lambda < 1.0 ) )
  {
    throw std::invalid_argument( "lambda must lie in (0, 1)" );
  }
  if ( !( beta > 1.0 ) )
  {
    throw std::invalid_argument( "beta must be larger than 1" );
  }
  if ( rows_per_array < 2u )
  {
    throw std::invalid_argument( "rows per array must be at least 2" );
  }
  if ( jobs == 0u )
  {
    throw std::invalid_argument( "jobs must be at least 1" );
  }
}

std::string_view to_string( round_status s )
{
  switch ( s )
  {
  case round_status::empty_design:
    return "empty design";
  case round_status::bound_exceeded:
    return "bound exceeded";
  default:
    return "evaluated";
  }
}

design baseline_design( xmg_network const& source, compiler_config const& cfg )
{
  auto const cleaned = cleanup( source );
  return make_design( scheduled_of( schedule( { cleaned }, cfg.exact_threshold ) ), "baseline" );
}

compile_result compile( xmg_network const& source, compiler_config const& cfg )
{
  cfg.validate();
  compile_result result;
  result.baseline = baseline_design( source, cfg );
  result.frontier.insert( result.baseline );

  for ( std::uint32_t start = 0; start < cfg.rounds; start += cfg.jobs )
  {
    auto const count = std::min( cfg.jobs, cfg.rounds - start );
    auto const snapshot = result.frontier;
    std::vector<round_output> outputs( count );
    if ( count == 1u )
    {
      outputs[0] = run_round( snapshot, cfg, start );
    }
    else
    {
      std::vector<std::exception_ptr> errors( count );
      {
        std::vector<std::jthread> workers;
        for ( auto k = 0u; k < count; ++k )
        {
          workers.emplace_back( [&, k] {
            try
            {
              outputs[k] = run_round( snapshot, cfg, start + k );
            }
            catch ( ... )
            {
              errors[k] = std::current_exception();
            }
          } );
        }
      }
      for ( auto const& e : errors )
      {
        if ( e )
        {
          std::rethrow_exception( e );
        }
      }
    }
    /* merged in round order, so the frontier does not depend on thread timing */
    for ( auto& o : outputs )
    {
      for ( auto& d : o.candidates )
      {
        o.record.inserted = result.frontier.insert( std::move( d ) ) || o.record.inserted;
      }
      result.rounds.push_back( std::move( o.record ) );
    }
  }
  return result;
}

} // namespace imcc
