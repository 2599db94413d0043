#include <imcc/netlist_io.hpp>

#include "text_util.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace imcc
{

namespace
{

struct and_line
{
  std::uint32_t lhs, rhs0, rhs1;
  std::size_t line;
};

void write_ref( std::ostream& os, signal s )
{
  os << ( s.complemented ? "!N" : "N" ) << s.index;
}

signal parse_ref( std::string_view tok, std::size_t line, node_id limit )
{
  signal s;
  if ( !tok.empty() && tok.front() == '!' )
  {
    s.complemented = true;
    tok.remove_prefix( 1u );
  }
  if ( tok.empty() || tok.front() != 'N' )
  {
    throw parse_error( line, "expected a node reference, got '" + std::string( tok ) + "'" );
  }
  s.index = detail::parse_u32( tok.substr( 1u ), line, "node index" );
  if ( s.index >= limit )
  {
    throw parse_error( line, "reference to undefined node N" + std::to_string( s.index ) );
  }
  return s;
}

/* binary AIGER: header and outputs are text, AND gates are pairs of 7-bit varint deltas */
std::string binary_aiger_to_ascii( std::string_view data )
{
  auto const eol = data.find( '\n' );
  if ( eol == std::string_view::npos )
  {
    throw parse_error( 1u, "unexpected end of file" );
  }
  auto const header = detail::split_ws( data.substr( 0u, eol ) );
  if ( header.size() != 6u )
  {
    throw parse_error( 1u, "expected header 'aig M I L O A'" );
  }
  auto const num_inputs = detail::parse_u32( header[2], 1u, "I" );
  auto const num_latches = detail::parse_u32( header[3], 1u, "L" );
  auto const num_outputs = detail::parse_u32( header[4], 1u, "O" );
  auto const num_ands = detail::parse_u32( header[5], 1u, "A" );
  if ( num_latches != 0u )
  {
    throw parse_error( 1u, "latches are not supported" );
  }

  std::string out = "aag " + std::string( data.substr( 4u, eol - 4u ) ) + "\n";
  for ( auto i = 0u; i < num_inputs; ++i )
  {
    out += std::to_string( 2u * ( i + 1u ) ) + "\n";
  }
  auto pos = eol + 1u;
  for ( auto i = 0u; i < num_outputs; ++i )
  {
    auto const next = data.find( '\n', pos );
    if ( next == std::string_view::npos )
    {
      throw parse_error( 2u + i, "unexpected end of file" );
    }
    out += std::string( data.substr( pos, next - pos ) ) + "\n";
    pos = next + 1u;
  }
  auto const line_of_and = [&]( std::uint32_t k ) { return std::size_t{ 2u } + num_inputs + num_outputs + k; };
  auto read_delta = [&]( std::uint32_t k ) {
    std::uint64_t value = 0u;
    for ( auto shift = 0u;; shift += 7u )
    {
      if ( pos >= data.size() || shift > 28u )
      {
        throw parse_error( line_of_and( k ), "truncated or oversized AND delta" );
      }
      auto const byte = static_cast<std::uint8_t>( data[pos++] );
      value |= static_cast<std::uint64_t>( byte & 0x7fu ) << shift;
      if ( ( byte & 0x80u ) == 0u )
      {
        return value;
      }
    }
  };
  for ( auto k = 0u; k < num_ands; ++k )
  {
    auto const lhs = 2ull * ( num_inputs + k + 1u );
    auto const d0 = read_delta( k );
    auto const d1 = read_delta( k );
    if ( d0 == 0u || d0 > lhs || d1 > lhs - d0 )
    {
      throw parse_error( line_of_and( k ), "invalid AND delta" );
    }
    out += std::to_string( lhs ) + " " + std::to_string( lhs - d0 ) + " " + std::to_string( lhs - d0 - d1 ) + "\n";
  }
  return out;
}

} // namespace

xmg_network parse_aiger( std::string_view text, std::string name )
{
  if ( text.starts_with( "aig " ) )
  {
    return parse_aiger( binary_aiger_to_ascii( text ), std::move( name ) );
  }
  auto const lines = detail::split_lines( text );
  if ( lines.empty() )
  {
    throw parse_error( 1u, "empty input" );
  }
  auto const header = detail::split_ws( lines[0] );
  if ( header.size() != 6u || header[0] != "aag" )
  {
    throw parse_error( 1u, "expected header 'aag M I L O A'" );
  }
  auto const max_var = detail::parse_u32( header[1], 1u, "M" );
  auto const num_inputs = detail::parse_u32( header[2], 1u, "I" );
  auto const num_latches = detail::parse_u32( header[3], 1u, "L" );
  auto const num_outputs = detail::parse_u32( header[4], 1u, "O" );
  auto const num_ands = detail::parse_u32( header[5], 1u, "A" );
  if ( num_latches != 0u )
  {
    throw parse_error( 1u, "latches are not supported" );
  }
  if ( static_cast<std::uint64_t>( num_inputs ) + num_ands > max_var )
  {
    throw parse_error( 1u, "M is smaller than I + A" );
  }
  if ( lines.size() < 1u + num_inputs + num_outputs + num_ands )
  {
    throw parse_error( lines.size(), "unexpected end of file" );
  }

  auto const max_lit = 2u * max_var + 1u;
  auto literal_at = [&]( std::size_t ln ) {
    auto const tok = detail::trim( lines[ln] );
    auto const v = detail::parse_u32( tok, ln + 1u, "literal" );
    if ( v > max_lit )
    {
      throw parse_error( ln + 1u, "literal out of range" );
    }
    return v;
  };

  constexpr auto undefined = ~std::uint32_t{ 0 };
  std::vector<std::uint32_t> input_of( max_var + 1u, undefined ); /* var -> PI position */
  std::vector<std::int64_t> and_of( max_var + 1u, -1 );
  std::size_t ln = 1u;
  for ( auto i = 0u; i < num_inputs; ++i, ++ln )
  {
    auto const lit = literal_at( ln );
    if ( lit < 2u || ( lit & 1u ) || input_of[lit >> 1] != undefined )
    {
      throw parse_error( ln + 1u, "invalid input literal" );
    }
    input_of[lit >> 1] = i;
  }
  std::vector<std::uint32_t> outputs;
  for ( auto i = 0u; i < num_outputs; ++i, ++ln )
  {
    outputs.push_back( literal_at( ln ) );
  }
  std::vector<and_line> ands;
  for ( auto i = 0u; i < num_ands; ++i, ++ln )
  {
    auto const tokens = detail::split_ws( lines[ln] );
    if ( tokens.size() != 3u )
    {
      throw parse_error( ln + 1u, "expected 'lhs rhs0 rhs1'" );
    }
    and_line a{ detail::parse_u32( tokens[0], ln + 1u, "literal" ), detail::parse_u32( tokens[1], ln + 1u, "literal" ),
                detail::parse_u32( tokens[2], ln + 1u, "literal" ), ln + 1u };
    if ( a.lhs > max_lit || a.rhs0 > max_lit || a.rhs1 > max_lit )
    {
      throw parse_error( ln + 1u, "literal out of range" );
    }
    if ( a.lhs < 2u || ( a.lhs & 1u ) || input_of[a.lhs >> 1] != undefined || and_of[a.lhs >> 1] != -1 )
    {
      throw parse_error( ln + 1u, "invalid AND output literal" );
    }
    and_of[a.lhs >> 1] = static_cast<std::int64_t>( ands.size() );
    ands.push_back( a );
  }
  /* remaining lines: symbol table and comments are ignored */

  network_builder builder( num_inputs, std::move( name ), { .hash = false, .simplify = false } );
  std::vector<std::optional<signal>> sig( max_var + 1u );
  sig[0] = constant_zero;
  for ( auto v = 0u; v <= max_var; ++v )
  {
    if ( input_of[v] != undefined )
    {
      sig[v] = signal{ builder.network().pi_at( input_of[v] ), false };
    }
  }

  std::vector<std::uint8_t> state( ands.size(), 0u ); /* 0 new, 1 on stack, 2 done */
  auto resolve = [&]( std::uint32_t lit, std::size_t line ) -> signal {
    auto const& s = sig[lit >> 1];
    if ( !s )
    {
      throw parse_error( line, "literal " + std::to_string( lit ) + " is never defined" );
    }
    return *s ^ static_cast<bool>( lit & 1u );
  };
  for ( std::size_t root = 0; root < ands.size(); ++root )
  {
    if ( state[root] == 2u )
    {
      continue;
    }
    std::vector<std::size_t> stack{ root };
    while ( !stack.empty() )
    {
      auto const i = stack.back();
      auto const& a = ands[i];
      if ( state[i] == 2u )
      {
        stack.pop_back();
        continue;
      }
      state[i] = 1u;
      bool pushed = false;
      for ( auto const rhs : { a.rhs0, a.rhs1 } )
      {
        auto const child = and_of[rhs >> 1];
        if ( child < 0 || state[static_cast<std::size_t>( child )] == 2u )
        {
          continue;
        }
        if ( state[static_cast<std::size_t>( child )] == 1u )
        {
          throw parse_error( a.line, "combinational cycle through AND " + std::to_string( a.lhs ) );
        }
        stack.push_back( static_cast<std::size_t>( child ) );
        pushed = true;
      }
      if ( pushed )
      {
        continue;
      }
      sig[a.lhs >> 1] = builder.create( gate_kind::maj, resolve( a.rhs0, a.line ), resolve( a.rhs1, a.line ), constant_zero );
      state[i] = 2u;
      stack.pop_back();
    }
  }
  for ( auto i = 0u; i < outputs.size(); ++i )
  {
    builder.create_po( resolve( outputs[i], 2u + num_inputs + i ) );
  }
  return std::move( builder ).take();
}

std::string write_xmg( xmg_network const& net )
{
  std::ostringstream os;
  if ( !net.name().empty() )
  {
    os << ".name " << net.name() << '\n';
  }
  os << ".pis " << net.num_pis() << '\n';
  os << ".pos " << net.num_pos() << '\n';
  for ( auto i = 0u; i < net.size(); ++i )
  {
    auto const& g = net.gates()[i];
    os << 'N' << net.gate_at( i ) << " = " << ( g.kind == gate_kind::maj ? "MAJ(" : "XOR(" );
    for ( auto k = 0u; k < 3u; ++k )
    {
      if ( k > 0u )
      {
        os << ", ";
      }
      write_ref( os, g.fanins[k] );
    }
    os << ")\n";
  }
  for ( auto i = 0u; i < net.num_pos(); ++i )
  {
    os << 'O' << i << " = ";
    write_ref( os, net.pos()[i] );
    os << '\n';
  }
  os << ".end\n";
  return os.str();
}

xmg_network parse_xmg( std::string_view text )
{
  std::string name;
  std::optional<std::uint32_t> num_pis, num_pos;
  xmg_network net;
  bool ended = false;
  std::uint32_t next_po = 0;
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
      if ( tokens[0] == ".name" && tokens.size() == 2u && !num_pis )
      {
        name = std::string( tokens[1] );
      }
      else if ( tokens[0] == ".pis" && tokens.size() == 2u && !num_pis )
      {
        num_pis = detail::parse_u32( tokens[1], line_no, "PI count" );
        net = xmg_network( *num_pis, name );
      }
      else if ( tokens[0] == ".pos" && tokens.size() == 2u && num_pis && !num_pos )
      {
        num_pos = detail::parse_u32( tokens[1], line_no, "PO count" );
      }
      else if ( tokens[0] == ".end" && tokens.size() == 1u )
      {
        ended = true;
      }
      else
      {
        throw parse_error( line_no, "unexpected directive '" + std::string( line ) + "'" );
      }
      continue;
    }
    if ( !num_pis || !num_pos )
    {
      throw parse_error( line_no, "missing .pis or .pos header" );
    }
    auto const eq = line.find( '=' );
    if ( eq == std::string_view::npos )
    {
      throw parse_error( line_no, "expected '='" );
    }
    auto const lhs = detail::trim( line.substr( 0, eq ) );
    auto const rhs = detail::trim( line.substr( eq + 1u ) );
    if ( detail::starts_with( lhs, "N" ) )
    {
      auto const idx = detail::parse_u32( lhs.substr( 1u ), line_no, "node index" );
      if ( idx != net.num_nodes() )
      {
        throw parse_error( line_no, "expected gate N" + std::to_string( net.num_nodes() ) );
      }
      if ( next_po > 0u )
      {
        throw parse_error( line_no, "gate after the first output" );
      }
      gate_kind kind;
      if ( detail::starts_with( rhs, "MAJ(" ) )
      {
        kind = gate_kind::maj;
      }
      else if ( detail::starts_with( rhs, "XOR(" ) )
      {
        kind = gate_kind::xor3;
      }
      else
      {
        throw parse_error( line_no, "expected MAJ(...) or XOR(...)" );
      }
      if ( rhs.back() != ')' )
      {
        throw parse_error( line_no, "missing ')'" );
      }
      auto const args = detail::split_char( rhs.substr( 4u, rhs.size() - 5u ), ',' );
      if ( args.size() != 3u )
      {
        throw parse_error( line_no, "gates take exactly three operands" );
      }
      net.create_gate( kind, parse_ref( args[0], line_no, idx ), parse_ref( args[1], line_no, idx ),
                       parse_ref( args[2], line_no, idx ) );
    }
    else if ( detail::starts_with( lhs, "O" ) )
    {
      auto const idx = detail::parse_u32( lhs.substr( 1u ), line_no, "output index" );
      if ( idx != next_po || idx >= *num_pos )
      {
        throw parse_error( line_no, "unexpected output O" + std::to_string( idx ) );
      }
      net.create_po( parse_ref( rhs, line_no, net.num_nodes() ) );
      ++next_po;
    }
    else
    {
      throw parse_error( line_no, "expected N<i> or O<k> on the left-hand side" );
    }
  }
  if ( !num_pis || !num_pos || !ended )
  {
    throw parse_error( lines.size(), "incomplete netlist (missing header or .end)" );
  }
  if ( next_po != *num_pos )
  {
    throw parse_error( lines.size(), "expected " + std::to_string( *num_pos ) + " outputs" );
  }
  return net;
}

std::string read_text_file( std::filesystem::path const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw std::runtime_error( "cannot open '" + path.string() + "'" );
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file( std::filesystem::path const& path, std::string_view content )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
  {
    throw std::runtime_error( "cannot write '" + path.string() + "'" );
  }
  out << content;
  if ( !out )
  {
    throw std::runtime_error( "error while writing '" + path.string() + "'" );
  }
}

} // namespace imcc
