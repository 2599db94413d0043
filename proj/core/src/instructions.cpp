#include <imcc/instructions.hpp>

#include "text_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace imcc
{

namespace
{

operand operand_of( array_placement const& pl, signal s )
{
  if ( s.index == 0u )
  {
    return { 0u, s.complemented };
  }
  return { pl.global_row[s.index], s.complemented };
}

void write_operand( std::ostream& os, operand const& o )
{
  if ( o.is_constant() )
  {
    os << ( o.complemented ? '1' : '0' );
    return;
  }
  os << ( o.complemented ? "!R" : "R" ) << o.row;
}

operand parse_operand( std::string_view tok, std::size_t line )
{
  if ( tok == "0" || tok == "1" )
  {
    return { 0u, tok == "1" };
  }
  operand o;
  if ( !tok.empty() && tok.front() == '!' )
  {
    o.complemented = true;
    tok.remove_prefix( 1u );
  }
  if ( tok.empty() || tok.front() != 'R' )
  {
    throw parse_error( line, "expected a row operand, got '" + std::string( tok ) + "'" );
  }
  o.row = detail::parse_u32( tok.substr( 1u ), line, "row number" );
  if ( o.row == 0u )
  {
    throw parse_error( line, "rows are numbered from 1" );
  }
  return o;
}

char const* mnemonic( opcode op )
{
  switch ( op )
  {
  case opcode::maj:
    return "MAJ";
  case opcode::xor3:
    return "XOR";
  default:
    return "COPY";
  }
}

using json = nlohmann::ordered_json;

json operand_json( operand const& o )
{
  return { { "row", o.row }, { "complemented", o.complemented } };
}

operand operand_from_json( json const& j )
{
  return { j.at( "row" ).get<std::uint32_t>(), j.at( "complemented" ).get<bool>() };
}

} // namespace

std::uint32_t instruction_sequence::count( opcode op ) const
{
  return static_cast<std::uint32_t>(
      std::count_if( instructions.begin(), instructions.end(), [op]( auto const& i ) { return i.op == op; } ) );
}

instruction_sequence emit_instructions( scheduled_netlist const& design, array_placement const& placement )
{
  auto const& net = design.net;
  instruction_sequence seq;
  seq.num_arrays = placement.num_arrays;
  seq.rows_per_array = placement.rows_per_array;
  for ( auto i = 0u; i < net.num_pis(); ++i )
  {
    seq.input_rows.push_back( placement.global_row[net.pi_at( i )] );
  }
  for ( auto const& po : net.pos() )
  {
    seq.outputs.push_back( operand_of( placement, po ) );
  }

  std::uint32_t clock = 0;
  for ( auto i = 0u; i < net.size(); ++i )
  {
    auto const n = net.gate_at( i );
    auto const& g = net.gate_of( n );
    auto const dest = placement.global_row[n];

    std::vector<std::pair<node_id, std::uint32_t>> staged;
    if ( placement.num_arrays > 1u )
    {
      auto const array = placement.array_of_row( dest );
      auto const foreign = foreign_fanins( design, placement, n );
      for ( auto k = 0u; k < foreign.size(); ++k )
      {
        auto const scratch = placement.scratch_row( array, k );
        seq.instructions.push_back(
            instruction{ ++clock, opcode::copy, scratch, { operand{ placement.global_row[foreign[k]], false } } } );
        staged.emplace_back( foreign[k], scratch );
      }
    }

    instruction ins{ ++clock, g.kind == gate_kind::maj ? opcode::maj : opcode::xor3, dest, {} };
    for ( auto const& f : g.fanins )
    {
      auto o = operand_of( placement, f );
      for ( auto const& [node, row] : staged )
      {
        if ( node == f.index )
        {
          o.row = row;
        }
      }
      ins.src.push_back( o );
    }
    seq.instructions.push_back( std::move( ins ) );
  }
  return seq;
}

std::string format_instructions( instruction_sequence const& seq )
{
  std::ostringstream os;
  os << ".arrays " << seq.num_arrays << ' ' << seq.rows_per_array << '\n';
  os << ".inputs";
  for ( auto const r : seq.input_rows )
  {
    os << " R" << r;
  }
  os << "\n.outputs";
  for ( auto const& o : seq.outputs )
  {
    os << ' ';
    write_operand( os, o );
  }
  os << '\n';
  for ( auto const& ins : seq.instructions )
  {
    os << ins.clock << ": R" << ins.dest << " <- " << mnemonic( ins.op ) << '(';
    for ( auto k = 0u; k < ins.src.size(); ++k )
    {
      if ( k > 0u )
      {
        os << ", ";
      }
      write_operand( os, ins.src[k] );
    }
    os << ")\n";
  }
  os << ".end\n";
  return os.str();
}

instruction_sequence parse_instructions( std::string_view text )
{
  instruction_sequence seq;
  bool have_arrays = false, have_inputs = false, have_outputs = false, ended = false;
  auto const lines = detail::split_lines( text );
  for ( std::size_t ln = 0; ln < lines.size(); ++ln )
  {
    auto const line_no = ln + 1u;
    auto const line = detail::trim( lines[ln] );
    if ( line.empty() || line.front() == '#' )
    {
      continue;
    }
    if ( ended )
    {
      throw parse_error( line_no, "content after .end" );
    }
    if ( line.front() == '.' )
    {
      auto const tokens = detail::split_ws( line );
      if ( tokens[0] == ".arrays" )
      {
        if ( tokens.size() != 3u )
        {
          throw parse_error( line_no, ".arrays expects the array count and the rows per array" );
        }
        seq.num_arrays = detail::parse_u32( tokens[1], line_no, "array count" );
        seq.rows_per_array = detail::parse_u32( tokens[2], line_no, "rows per array" );
        if ( seq.num_arrays == 0u || seq.rows_per_array == 0u )
        {
          throw parse_error( line_no, ".arrays values must be positive" );
        }
        have_arrays = true;
      }
      else if ( tokens[0] == ".inputs" )
      {
        for ( auto k = 1u; k < tokens.size(); ++k )
        {
          auto const o = parse_operand( tokens[k], line_no );
          if ( o.is_constant() || o.complemented )
          {
            throw parse_error( line_no, "inputs must be plain rows" );
          }
          seq.input_rows.push_back( o.row );
        }
        have_inputs = true;
      }
      else if ( tokens[0] == ".outputs" )
      {
        for ( auto k = 1u; k < tokens.size(); ++k )
        {
          seq.outputs.push_back( parse_operand( tokens[k], line_no ) );
        }
        have_outputs = true;
      }
      else if ( tokens[0] == ".end" )
      {
        ended = true;
      }
      else
      {
        throw parse_error( line_no, "unknown directive '" + std::string( tokens[0] ) + "'" );
      }
      continue;
    }

    /* <clock>: R<d> <- OP(a, b, c) */
    auto const colon = line.find( ':' );
    auto const arrow = line.find( "<-" );
    auto const open = line.find( '(' );
    auto const close = line.rfind( ')' );
    if ( colon == std::string_view::npos || arrow == std::string_view::npos || open == std::string_view::npos ||
         close == std::string_view::npos || !( colon < arrow && arrow < open && open < close ) ||
         !detail::trim( line.substr( close + 1u ) ).empty() )
    {
      throw parse_error( line_no, "malformed instruction" );
    }
    instruction ins;
    ins.clock = detail::parse_u32( detail::trim( line.substr( 0, colon ) ), line_no, "clock cycle" );
    if ( ins.clock != seq.instructions.size() + 1u )
    {
      throw parse_error( line_no, "clock cycles must be consecutive from 1" );
    }
    auto const dest = parse_operand( detail::trim( line.substr( colon + 1u, arrow - colon - 1u ) ), line_no );
    if ( dest.is_constant() || dest.complemented )
    {
      throw parse_error( line_no, "destination must be a plain row" );
    }
    ins.dest = dest.row;
    auto const name = detail::trim( line.substr( arrow + 2u, open - arrow - 2u ) );
    if ( name == "MAJ" )
    {
      ins.op = opcode::maj;
    }
    else if ( name == "XOR" )
    {
      ins.op = opcode::xor3;
    }
    else if ( name == "COPY" )
    {
      ins.op = opcode::copy;
    }
    else
    {
      throw parse_error( line_no, "unknown operation '" + std::string( name ) + "'" );
    }
    for ( auto const arg : detail::split_char( line.substr( open + 1u, close - open - 1u ), ',' ) )
    {
      ins.src.push_back( parse_operand( arg, line_no ) );
    }
    auto const arity = ins.op == opcode::copy ? 1u : 3u;
    if ( ins.src.size() != arity )
    {
      throw parse_error( line_no, std::string( name ) + " expects " + std::to_string( arity ) + " operands" );
    }
    if ( ins.op == opcode::copy && ( ins.src[0].is_constant() || ins.src[0].complemented ) )
    {
      throw parse_error( line_no, "COPY expects a plain row" );
    }
    seq.instructions.push_back( std::move( ins ) );
  }
  if ( !have_arrays || !have_inputs || !have_outputs )
  {
    throw parse_error( lines.size(), "missing .arrays, .inputs or .outputs header" );
  }
  return seq;
}

std::string write_instructions_json( instruction_sequence const& seq )
{
  json j;
  j["format"] = instructions_json_format;
  j["arrays"] = seq.num_arrays;
  j["rows_per_array"] = seq.rows_per_array;
  j["inputs"] = seq.input_rows;
  j["outputs"] = json::array();
  for ( auto const& o : seq.outputs )
  {
    j["outputs"].push_back( operand_json( o ) );
  }
  j["instructions"] = json::array();
  for ( auto const& ins : seq.instructions )
  {
    json src = json::array();
    for ( auto const& o : ins.src )
    {
      src.push_back( operand_json( o ) );
    }
    j["instructions"].push_back(
        { { "clock", ins.clock }, { "op", mnemonic( ins.op ) }, { "dest", ins.dest }, { "src", std::move( src ) } } );
  }
  return j.dump( 2 ) + "\n";
}

instruction_sequence parse_instructions_json( std::string_view json_text )
{
  try
  {
    auto const j = json::parse( json_text );
    if ( j.at( "format" ).get<std::string>() != instructions_json_format )
    {
      throw std::invalid_argument( "not an " + std::string( instructions_json_format ) + " document" );
    }
    instruction_sequence seq;
    seq.num_arrays = j.at( "arrays" ).get<std::uint32_t>();
    seq.rows_per_array = j.at( "rows_per_array" ).get<std::uint32_t>();
    seq.input_rows = j.at( "inputs" ).get<std::vector<std::uint32_t>>();
    for ( auto const& o : j.at( "outputs" ) )
    {
      seq.outputs.push_back( operand_from_json( o ) );
    }
    for ( auto const& ji : j.at( "instructions" ) )
    {
      instruction ins;
      ins.clock = ji.at( "clock" ).get<std::uint32_t>();
      ins.dest = ji.at( "dest" ).get<std::uint32_t>();
      auto const name = ji.at( "op" ).get<std::string>();
      if ( name == "MAJ" )
      {
        ins.op = opcode::maj;
      }
      else if ( name == "XOR" )
      {
        ins.op = opcode::xor3;
      }
      else if ( name == "COPY" )
      {
        ins.op = opcode::copy;
      }
      else
      {
        throw std::invalid_argument( "unknown operation '" + name + "'" );
      }
      for ( auto const& o : ji.at( "src" ) )
      {
        ins.src.push_back( operand_from_json( o ) );
      }
      if ( ins.clock != seq.instructions.size() + 1u || ins.dest == 0u ||
           ins.src.size() != ( ins.op == opcode::copy ? 1u : 3u ) )
      {
        throw std::invalid_argument( "malformed instruction at clock " + std::to_string( ins.clock ) );
      }
      seq.instructions.push_back( std::move( ins ) );
    }
    return seq;
  }
  catch ( json::exception const& e )
  {
    throw std::invalid_argument( std::string( "malformed instruction document: " ) + e.what() );
  }
}

} // namespace imcc
