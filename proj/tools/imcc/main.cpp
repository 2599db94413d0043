/* imcc: compiles combinational logic into in-memory computing instruction sequences */

#include <imcc/compiler.hpp>
#include <imcc/edp_model.hpp>
#include <imcc/instructions.hpp>
#include <imcc/interpreter.hpp>
#include <imcc/mf_resub.hpp>
#include <imcc/netlist_io.hpp>
#include <imcc/passes.hpp>
#include <imcc/random.hpp>
#include <imcc/report.hpp>
#include <imcc/scheduler.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace imcc;

namespace
{

constexpr char const* cost_model_env = "IMCC_COST_MODEL";

/* "-" reads standard input */
std::string read_input( fs::path const& path )
{
  if ( path == "-" )
  {
    return { std::istreambuf_iterator<char>( std::cin ), std::istreambuf_iterator<char>() };
  }
  return read_text_file( path );
}

xmg_network load_netlist( fs::path const& path )
{
  auto const text = read_input( path );
  if ( path.extension() == ".aag" || path.extension() == ".aig" || text.starts_with( "aag " ) ||
       text.starts_with( "aig " ) )
  {
    return parse_aiger( text, path == "-" ? "stdin" : path.stem().string() );
  }
  auto net = parse_xmg( text );
  if ( net.name().empty() )
  {
    net.set_name( path.stem().string() );
  }
  return net;
}

/* explicit path first, then the environment, then the built-in defaults */
cost_model load_model( std::string const& path, std::optional<std::uint32_t> rows )
{
  cost_model model;
  if ( !path.empty() )
  {
    model = load_cost_model( path );
  }
  else if ( auto const* env = std::getenv( cost_model_env ); env != nullptr && *env != '\0' )
  {
    model = load_cost_model( env );
  }
  if ( rows )
  {
    model.rows_per_array = *rows;
  }
  return model;
}

std::string format_trace( std::vector<std::uint32_t> const& usage )
{
  std::string out = "# cycle usage\n";
  for ( auto c = 0u; c < usage.size(); ++c )
  {
    out += fmt::format( "{} {}\n", c + 1u, usage[c] );
  }
  return out;
}

void print_seed( std::uint64_t seed )
{
  std::cerr << fmt::format( "imcc: seed {}\n", seed );
}

struct common_options
{
  std::string cost_model_path;
  std::optional<std::uint32_t> rows;
  std::uint64_t seed = compiler_config{}.seed;
};

void add_common( CLI::App& cmd, common_options& opt )
{
  cmd.add_option( "--cost-model", opt.cost_model_path,
                  fmt::format( "Cost model JSON file (default: ${} or built-in)", cost_model_env ) )
      ->check( CLI::ExistingFile );
  cmd.add_option( "--rows", opt.rows, "Rows per memory array" )->check( CLI::Range( 2u, 1u << 30 ) );
  cmd.add_option( "--seed", opt.seed, "Random seed" )->capture_default_str();
}

/* compile */

struct compile_options
{
  common_options common;
  compiler_config cfg;
  std::string input;
  std::string out_prefix;
};

int run_compile( compile_options opt )
{
  auto const model = load_model( opt.common.cost_model_path, opt.common.rows );
  opt.cfg.seed = opt.common.seed;
  opt.cfg.rows_per_array = model.rows_per_array;
  opt.cfg.validate();
  print_seed( opt.cfg.seed );

  auto const net = load_netlist( opt.input );
  auto const result = compile( net, opt.cfg );
  auto const available = rows_available( net, model.rows_per_array );
  auto const& selected = select_final( result.frontier, available, model );
  auto const report = make_report( result, selected, opt.cfg, model );
  auto const seq = emit_instructions( selected.scheduled, place( selected.scheduled, model ) );

  fs::path const prefix = !opt.out_prefix.empty() ? fs::path( opt.out_prefix )
                          : opt.input == "-"      ? fs::path( "stdin" )
                                                  : fs::path( opt.input ).stem();
  auto const with = [&]( std::string_view suffix ) { return fs::path( prefix.string() + std::string( suffix ) ); };
  write_text_file( with( ".report.json" ), write_report( report ) );
  write_text_file( with( ".instr" ), format_instructions( seq ) );
  write_text_file( with( ".instr.json" ), write_instructions_json( seq ) );
  write_text_file( with( ".trace" ), format_trace( selected.scheduled.usage ) );
  write_text_file( with( ".xmg" ), write_xmg( selected.scheduled.net ) );

  auto const& e = report.frontier[report.selected].edp;
  std::cout << fmt::format( "{}: {} PIs, {} POs, baseline size {} MF {}\n", net.name(), net.num_pis(), net.num_pos(),
                            result.baseline.size, result.baseline.mf );
  std::cout << fmt::format( "frontier: {} designs after {} rounds\n", result.frontier.size(), result.rounds.size() );
  std::cout << fmt::format( "selected: size {} MF {} ({} available rows), {} arrays, {} copies, EDP {:.6g}\n",
                            selected.size, selected.mf, available, e.arrays, e.copies, e.edp );
  std::cout << fmt::format( "wrote {}.{{report.json,instr,instr.json,trace,xmg}}\n", prefix.string() );
  return 0;
}

/* schedule */

struct schedule_options
{
  std::string input;
  std::uint32_t exact_threshold = compiler_config{}.exact_threshold;
  std::optional<std::uint32_t> mf_bound;
  bool keep_order = false;
  std::string output;
  std::string trace;
};

int run_schedule( schedule_options const& opt )
{
  print_seed( 0u );
  auto const net = load_netlist( opt.input );
  schedule_result r = opt.keep_order ? schedule_result{ make_scheduled( net ) }
                                     : schedule( { .netlist = net, .mf_bound = opt.mf_bound }, opt.exact_threshold );
  if ( auto const* b = std::get_if<bound_exceeded>( &r ) )
  {
    std::cout << fmt::format( "bound exceeded: no order meets MF {} (lower bound {})\n", *opt.mf_bound, b->lower_bound );
    return 0;
  }
  auto const& d = std::get<scheduled_netlist>( r );
  std::cout << fmt::format( "size {} MF {}\n", d.net.size(), d.mf );
  if ( !opt.output.empty() )
  {
    write_text_file( opt.output, write_xmg( d.net ) );
  }
  if ( !opt.trace.empty() )
  {
    write_text_file( opt.trace, format_trace( d.usage ) );
  }
  return 0;
}

/* mfresub */

struct mfresub_options
{
  std::vector<std::string> inputs;
  std::uint64_t n_trial = default_n_trial;
  std::uint64_t seed = compiler_config{}.seed;
  std::uint32_t variants = 0u;
  std::uint32_t k_cmds = compiler_config{}.k_cmds;
  std::uint32_t exact_threshold = compiler_config{}.exact_threshold;
  std::string output;
  std::string report;
};

int run_mfresub( mfresub_options const& opt )
{
  print_seed( opt.seed );
  if ( !opt.output.empty() && ( opt.inputs.size() != 1u || opt.variants != 0u ) )
  {
    throw std::invalid_argument( "--output needs a single input and no --variants" );
  }
  std::vector<std::pair<std::string, resub_counts>> rows;
  for ( auto const& path : opt.inputs )
  {
    auto const net = load_netlist( path );
    resub_counts counts{};
    auto const run = [&]( scheduled_netlist const& d, std::uint64_t seed, std::string const& label ) {
      auto const r = mfresub( d, opt.n_trial, seed );
      ++counts[static_cast<std::size_t>( r.outcome )];
      std::cout << fmt::format( "{}: size {} -> {}, MF {} -> {}, {} + {} resubs, {}\n", label, d.net.size(),
                                r.design.net.size(), d.mf, r.design.mf, r.case1, r.case2, to_string( r.outcome ) );
      return r;
    };
    if ( opt.variants == 0u )
    {
      auto const r = run( make_scheduled( net ), opt.seed, net.name() );
      if ( !opt.output.empty() )
      {
        write_text_file( opt.output, write_xmg( r.design.net ) );
      }
    }
    else
    {
      auto const base = cleanup( net );
      for ( auto v = 0u; v < opt.variants; ++v )
      {
        auto const variant = run_random_sequence( base, opt.k_cmds, derive_seed( opt.seed, { v, 0u } ) );
        auto const d = std::get<scheduled_netlist>( schedule( { .netlist = variant }, opt.exact_threshold ) );
        run( d, derive_seed( opt.seed, { v, 1u } ), fmt::format( "{}#{}", net.name(), v ) );
      }
    }
    rows.emplace_back( net.name(), counts );
  }
  if ( !opt.report.empty() )
  {
    write_text_file( opt.report, write_resub_report( rows ) );
  }
  return 0;
}

/* pareto-report */

int run_pareto_report( std::string const& input )
{
  auto const report = parse_report( read_text_file( input ) );
  print_seed( report.config.seed );
  std::cout << fmt::format( "{}: {} rows available, {} rounds\n", report.name, report.rows_available,
                            report.rounds.size() );
  std::cout << fmt::format( "  {:>8} {:>6} {:>6} {:>7} {:>12}  {}\n", "size", "MF", "arrays", "copies", "EDP",
                            "origin" );
  for ( auto i = 0u; i < report.frontier.size(); ++i )
  {
    auto const& d = report.frontier[i];
    std::cout << fmt::format( "{} {:>8} {:>6} {:>6} {:>7} {:>12.6g}  {}\n", i == report.selected ? '*' : ' ', d.size,
                              d.mf, d.edp.arrays, d.edp.copies, d.edp.edp, d.origin );
  }
  return 0;
}

/* edp */

struct edp_options
{
  common_options common;
  std::vector<std::string> inputs;
};

void print_edp( std::string const& label, std::uint32_t size, std::uint32_t mf, edp_estimate const& e )
{
  std::cout << fmt::format( "{}: size {} MF {} ops {} copies {} arrays {} energy {:.6g} delay {:.6g} EDP {:.6g}\n", label,
                            size, mf, e.operations, e.copies, e.arrays, e.energy, e.delay, e.edp );
}

int run_edp( edp_options const& opt )
{
  auto const model = load_model( opt.common.cost_model_path, opt.common.rows );
  print_seed( opt.common.seed );
  for ( auto const& path : opt.inputs )
  {
    if ( fs::path( path ).extension() == ".json" )
    {
      /* reports carry the breakdown under the model they were compiled with */
      auto const report = parse_report( read_text_file( path ) );
      for ( auto i = 0u; i < report.frontier.size(); ++i )
      {
        auto const& d = report.frontier[i];
        print_edp( fmt::format( "{}[{}]{}", report.name, i, i == report.selected ? "*" : "" ), d.size, d.mf, d.edp );
      }
      continue;
    }
    auto const d = make_scheduled( load_netlist( path ) );
    print_edp( d.net.name(), d.net.size(), d.mf, estimate_edp( d, model ) );
  }
  return 0;
}

/* interpret */

int run_interpret( std::string const& input, std::string const& bits )
{
  print_seed( 0u );
  auto const text = read_text_file( input );
  auto const seq =
      fs::path( input ).extension() == ".json" ? parse_instructions_json( text ) : parse_instructions( text );
  if ( bits.size() != seq.input_rows.size() || bits.find_first_not_of( "01" ) != std::string::npos )
  {
    throw std::invalid_argument(
        fmt::format( "--pi expects {} binary digits, got \"{}\"", seq.input_rows.size(), bits ) );
  }
  std::vector<bool> values;
  for ( auto const c : bits )
  {
    values.push_back( c == '1' );
  }
  std::string out;
  for ( auto const v : interpret( seq, values ) )
  {
    out += v ? '1' : '0';
  }
  std::cout << out << '\n';
  return 0;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "imcc: logic compiler for in-memory computing" };
  app.require_subcommand( 1 );
  auto const netlist_path = CLI::ExistingFile | CLI::IsMember( { "-" } );

  compile_options copt;
  auto* compile_cmd = app.add_subcommand( "compile", "Explore size/MF trade-offs and emit the selected design" );
  compile_cmd->add_option( "input", copt.input, "AIGER (.aag, .aig) or XMG (.xmg) netlist, - for stdin" )
      ->required()
      ->check( netlist_path );
  compile_cmd->add_option( "-o,--out-prefix", copt.out_prefix, "Output path prefix (default: input stem)" );
  compile_cmd->add_option( "--rounds", copt.cfg.rounds, "Optimization rounds" )->capture_default_str();
  compile_cmd->add_option( "--lambda", copt.cfg.lambda, "Peak window threshold in (0, 1)" )->capture_default_str();
  compile_cmd->add_option( "--beta", copt.cfg.beta, "MF bound relaxation, > 1" )->capture_default_str();
  compile_cmd->add_option( "--k-cmds", copt.cfg.k_cmds, "Random optimization commands per round" )->capture_default_str();
  compile_cmd->add_option( "--n-trial", copt.cfg.n_trial, "Divisor triple budget of resubstitution" )->capture_default_str();
  compile_cmd->add_option( "--exact-threshold", copt.cfg.exact_threshold, "Largest sub-netlist scheduled exactly" )
      ->capture_default_str();
  compile_cmd->add_option( "--jobs", copt.cfg.jobs, "Rounds evaluated concurrently" )->capture_default_str();
  add_common( *compile_cmd, copt.common );

  schedule_options sopt;
  auto* schedule_cmd = app.add_subcommand( "schedule", "Find a low-MF execution order" );
  schedule_cmd->add_option( "input", sopt.input, "Netlist" )->required()->check( netlist_path );
  schedule_cmd->add_option( "--exact-threshold", sopt.exact_threshold, "Largest netlist scheduled exactly" )
      ->capture_default_str();
  schedule_cmd->add_option( "--mf-bound", sopt.mf_bound, "Stop early when no order can meet this MF" );
  schedule_cmd->add_flag( "--keep-order", sopt.keep_order, "Evaluate the netlist's own gate order" );
  schedule_cmd->add_option( "-o,--output", sopt.output, "Write the scheduled netlist (XMG)" );
  schedule_cmd->add_option( "--trace", sopt.trace, "Write the memory-usage trace" );

  mfresub_options mopt;
  auto* mfresub_cmd = app.add_subcommand( "mfresub", "MF-oriented resubstitution in the given gate order" );
  mfresub_cmd->add_option( "inputs", mopt.inputs, "Netlists" )->required()->check( netlist_path );
  mfresub_cmd->add_option( "--n-trial", mopt.n_trial, "Divisor triple budget" )->capture_default_str();
  mfresub_cmd->add_option( "--seed", mopt.seed, "Random seed" )->capture_default_str();
  mfresub_cmd->add_option( "--variants", mopt.variants, "Randomly optimized variants per input (0: input as is)" )
      ->capture_default_str();
  mfresub_cmd->add_option( "--k-cmds", mopt.k_cmds, "Commands per random variant" )->capture_default_str();
  mfresub_cmd->add_option( "--exact-threshold", mopt.exact_threshold, "Largest variant scheduled exactly" )
      ->capture_default_str();
  mfresub_cmd->add_option( "-o,--output", mopt.output, "Write the resulting netlist (XMG)" );
  mfresub_cmd->add_option( "--report", mopt.report, "Write outcome counts as JSON" );

  std::string report_path;
  auto* pareto_cmd = app.add_subcommand( "pareto-report", "Print the frontier of a compile report" );
  pareto_cmd->add_option( "report", report_path, "Compile report (JSON)" )->required()->check( CLI::ExistingFile );

  edp_options eopt;
  auto* edp_cmd = app.add_subcommand( "edp", "Print EDP breakdowns of netlists or compile reports" );
  edp_cmd->add_option( "inputs", eopt.inputs, "Netlists in execution order, or compile reports" )
      ->required()
      ->check( CLI::ExistingFile );
  add_common( *edp_cmd, eopt.common );

  std::string instr_path;
  std::string pi_bits;
  auto* interpret_cmd = app.add_subcommand( "interpret", "Run an instruction file on one input assignment" );
  interpret_cmd->add_option( "instructions", instr_path, "Instruction file (text or .json)" )->required()->check( CLI::ExistingFile );
  interpret_cmd->add_option( "--pi", pi_bits, "PI values, first PI first (e.g. 1011)" )->required();

  CLI11_PARSE( app, argc, argv );

  try
  {
    if ( *compile_cmd )
    {
      return run_compile( copt );
    }
    if ( *schedule_cmd )
    {
      return run_schedule( sopt );
    }
    if ( *mfresub_cmd )
    {
      return run_mfresub( mopt );
    }
    if ( *pareto_cmd )
    {
      return run_pareto_report( report_path );
    }
    if ( *edp_cmd )
    {
      return run_edp( eopt );
    }
    return run_interpret( instr_path, pi_bits );
  }
  catch ( std::exception const& e )
  {
    std::cerr << "imcc: error: " << e.what() << '\n';
    return 1;
  }
}
