#include <imcc/report.hpp>

#include <nlohmann/json.hpp>

#include <cstdio>
#include <stdexcept>

namespace imcc
{

namespace
{

using json = nlohmann::ordered_json;

std::string hex64( std::uint64_t v )
{
  char buf[19];
  std::snprintf( buf, sizeof( buf ), "0x%016llx", static_cast<unsigned long long>( v ) );
  return buf;
}

std::uint64_t parse_hex64( std::string const& s )
{
  std::size_t used = 0;
  auto const v = std::stoull( s, &used, 16 );
  if ( used != s.size() )
  {
    throw std::invalid_argument( "malformed hash '" + s + "'" );
  }
  return v;
}

json to_json( edp_estimate const& e )
{
  return json{ { "operations", e.operations }, { "copies", e.copies }, { "arrays", e.arrays },
               { "energy", e.energy },         { "delay", e.delay },   { "edp", e.edp } };
}

edp_estimate edp_from_json( json const& j )
{
  edp_estimate e;
  e.operations = j.at( "operations" ).get<std::uint32_t>();
  e.copies = j.at( "copies" ).get<std::uint32_t>();
  e.arrays = j.at( "arrays" ).get<std::uint32_t>();
  e.energy = j.at( "energy" ).get<double>();
  e.delay = j.at( "delay" ).get<double>();
  e.edp = j.at( "edp" ).get<double>();
  return e;
}

json to_json( report_design const& d )
{
  return json{ { "size", d.size }, { "mf", d.mf }, { "hash", hex64( d.hash ) }, { "origin", d.origin }, { "edp", to_json( d.edp ) } };
}

report_design design_from_json( json const& j )
{
  report_design d;
  d.size = j.at( "size" ).get<std::uint32_t>();
  d.mf = j.at( "mf" ).get<std::uint32_t>();
  d.hash = parse_hex64( j.at( "hash" ).get<std::string>() );
  d.origin = j.at( "origin" ).get<std::string>();
  d.edp = edp_from_json( j.at( "edp" ) );
  return d;
}

json to_json( round_record const& r )
{
  json j{ { "round", r.round },
          { "base_size", r.base_size },
          { "base_mf", r.base_mf },
          { "status", std::string( to_string( r.status ) ) },
          { "window", json{ { "m", r.window.m }, { "p", r.window.p }, { "n", r.window.n } } },
          { "sub_size", r.sub_size },
          { "sub_optimized_size", r.sub_optimized_size },
          { "mf_bound", r.mf_bound ? json( *r.mf_bound ) : json( nullptr ) },
          { "size", r.size },
          { "window_mf", r.window_mf },
          { "mf", r.mf },
          { "resub", std::string( to_string( r.resub ) ) },
          { "resub_size", r.resub_size },
          { "resub_mf", r.resub_mf },
          { "inserted", r.inserted } };
  return j;
}

round_record round_from_json( json const& j )
{
  round_record r;
  r.round = j.at( "round" ).get<std::uint32_t>();
  r.base_size = j.at( "base_size" ).get<std::uint32_t>();
  r.base_mf = j.at( "base_mf" ).get<std::uint32_t>();
  auto const status = j.at( "status" ).get<std::string>();
  bool known = false;
  for ( auto const s : { round_status::empty_design, round_status::bound_exceeded, round_status::evaluated } )
  {
    if ( to_string( s ) == status )
    {
      r.status = s;
      known = true;
    }
  }
  if ( !known )
  {
    throw std::invalid_argument( "unknown round status '" + status + "'" );
  }
  auto const& w = j.at( "window" );
  r.window.m = w.at( "m" ).get<std::uint32_t>();
  r.window.p = w.at( "p" ).get<std::uint32_t>();
  r.window.n = w.at( "n" ).get<std::uint32_t>();
  r.window.mf = r.base_mf;
  r.sub_size = j.at( "sub_size" ).get<std::uint32_t>();
  r.sub_optimized_size = j.at( "sub_optimized_size" ).get<std::uint32_t>();
  if ( !j.at( "mf_bound" ).is_null() )
  {
    r.mf_bound = j.at( "mf_bound" ).get<std::uint32_t>();
  }
  r.size = j.at( "size" ).get<std::uint32_t>();
  r.window_mf = j.at( "window_mf" ).get<std::uint32_t>();
  r.mf = j.at( "mf" ).get<std::uint32_t>();
  auto const resub = j.at( "resub" ).get<std::string>();
  known = false;
  for ( auto const o : all_resub_outcomes )
  {
    if ( to_string( o ) == resub )
    {
      r.resub = o;
      known = true;
    }
  }
  if ( !known )
  {
    throw std::invalid_argument( "unknown resubstitution outcome '" + resub + "'" );
  }
  r.resub_size = j.at( "resub_size" ).get<std::uint32_t>();
  r.resub_mf = j.at( "resub_mf" ).get<std::uint32_t>();
  r.inserted = j.at( "inserted" ).get<bool>();
  return r;
}

report_design summarize( design const& d, cost_model const& model )
{
  return report_design{ d.size, d.mf, d.hash, d.origin, estimate_edp( d.scheduled, model ) };
}

} // namespace

compile_report make_report( compile_result const& result, design const& selected, compiler_config const& cfg,
                            cost_model const& model )
{
  compile_report r;
  r.name = result.baseline.scheduled.net.name();
  r.config = cfg;
  r.model = model;
  r.baseline = summarize( result.baseline, model );
  auto const& ds = result.frontier.designs();
  bool found = false;
  for ( std::size_t i = 0; i < ds.size(); ++i )
  {
    r.frontier.push_back( summarize( ds[i], model ) );
    if ( &ds[i] == &selected )
    {
      r.selected = i;
      found = true;
    }
  }
  if ( !found )
  {
    throw std::invalid_argument( "selected design is not a frontier member" );
  }
  r.rows_available = rows_available( selected.scheduled.net, model.rows_per_array );
  r.rounds = result.rounds;
  r.usage = selected.scheduled.usage;
  return r;
}

std::string write_report( compile_report const& r )
{
  json j;
  j["format"] = report_format;
  j["name"] = r.name;
  j["config"] = json{ { "rounds", r.config.rounds },
                      { "lambda", r.config.lambda },
                      { "beta", r.config.beta },
                      { "k_cmds", r.config.k_cmds },
                      { "n_trial", r.config.n_trial },
                      { "rows_per_array", r.config.rows_per_array },
                      { "seed", r.config.seed },
                      { "exact_threshold", r.config.exact_threshold },
                      { "jobs", r.config.jobs } };
  j["cost_model"] = json{ { "energy_op", r.model.energy_op },
                          { "energy_copy", r.model.energy_copy },
                          { "delay_op", r.model.delay_op },
                          { "delay_copy", r.model.delay_copy },
                          { "rows_per_array", r.model.rows_per_array } };
  j["baseline"] = to_json( r.baseline );
  j["frontier"] = json::array();
  for ( auto const& d : r.frontier )
  {
    j["frontier"].push_back( to_json( d ) );
  }
  j["selected"] = r.frontier.empty() ? json( nullptr ) : json( r.selected );
  j["rows_available"] = r.rows_available;
  j["rounds"] = json::array();
  for ( auto const& rr : r.rounds )
  {
    j["rounds"].push_back( to_json( rr ) );
  }
  j["usage"] = r.usage;
  return j.dump( 2 ) + "\n";
}

compile_report parse_report( std::string_view json_text )
{
  try
  {
    auto const j = json::parse( json_text );
    if ( j.at( "format" ).get<std::string>() != report_format )
    {
      throw std::invalid_argument( "not an " + std::string( report_format ) + " report" );
    }
    compile_report r;
    r.name = j.at( "name" ).get<std::string>();
    auto const& c = j.at( "config" );
    r.config.rounds = c.at( "rounds" ).get<std::uint32_t>();
    r.config.lambda = c.at( "lambda" ).get<double>();
    r.config.beta = c.at( "beta" ).get<double>();
    r.config.k_cmds = c.at( "k_cmds" ).get<std::uint32_t>();
    r.config.n_trial = c.at( "n_trial" ).get<std::uint64_t>();
    r.config.rows_per_array = c.at( "rows_per_array" ).get<std::uint32_t>();
    r.config.seed = c.at( "seed" ).get<std::uint64_t>();
    r.config.exact_threshold = c.at( "exact_threshold" ).get<std::uint32_t>();
    r.config.jobs = c.at( "jobs" ).get<std::uint32_t>();
    auto const& m = j.at( "cost_model" );
    r.model.energy_op = m.at( "energy_op" ).get<double>();
    r.model.energy_copy = m.at( "energy_copy" ).get<double>();
    r.model.delay_op = m.at( "delay_op" ).get<double>();
    r.model.delay_copy = m.at( "delay_copy" ).get<double>();
    r.model.rows_per_array = m.at( "rows_per_array" ).get<std::uint32_t>();
    r.baseline = design_from_json( j.at( "baseline" ) );
    for ( auto const& d : j.at( "frontier" ) )
    {
      r.frontier.push_back( design_from_json( d ) );
    }
    /* null marks a report without designs */
    auto const& sel = j.at( "selected" );
    r.selected = sel.is_null() ? 0u : sel.get<std::size_t>();
    if ( sel.is_null() != r.frontier.empty() || ( !sel.is_null() && r.selected >= r.frontier.size() ) )
    {
      throw std::invalid_argument( "selected index outside the frontier" );
    }
    r.rows_available = j.at( "rows_available" ).get<std::uint32_t>();
    for ( auto const& rr : j.at( "rounds" ) )
    {
      r.rounds.push_back( round_from_json( rr ) );
    }
    r.usage = j.at( "usage" ).get<std::vector<std::uint32_t>>();
    return r;
  }
  catch ( json::exception const& e )
  {
    throw std::invalid_argument( std::string( "malformed report: " ) + e.what() );
  }
}

std::string write_resub_report( std::vector<std::pair<std::string, resub_counts>> const& rows )
{
  json j;
  j["format"] = resub_report_format;
  j["categories"] = json::array();
  for ( auto const o : all_resub_outcomes )
  {
    j["categories"].push_back( std::string( to_string( o ) ) );
  }
  j["benchmarks"] = json::array();
  resub_counts total{};
  for ( auto const& [name, counts] : rows )
  {
    json b{ { "name", name } };
    json cj = json::object();
    for ( auto k = 0u; k < all_resub_outcomes.size(); ++k )
    {
      cj[std::string( to_string( all_resub_outcomes[k] ) )] = counts[k];
      total[k] += counts[k];
    }
    b["counts"] = cj;
    j["benchmarks"].push_back( b );
  }
  json tj = json::object();
  for ( auto k = 0u; k < all_resub_outcomes.size(); ++k )
  {
    tj[std::string( to_string( all_resub_outcomes[k] ) )] = total[k];
  }
  j["total"] = tj;
  return j.dump( 2 ) + "\n";
}

} // namespace imcc
