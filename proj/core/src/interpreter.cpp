#include <imcc/interpreter.hpp>

#include <optional>

namespace imcc
{

std::vector<sim_vector> interpret( instruction_sequence const& seq, std::span<sim_vector const> pi_values )
{
  if ( pi_values.size() != seq.input_rows.size() )
  {
    throw interpret_error( "expected " + std::to_string( seq.input_rows.size() ) + " input values, got " +
                           std::to_string( pi_values.size() ) );
  }
  auto const width = pi_values.empty() ? 1u : pi_values.front().width;
  auto const capacity = static_cast<std::uint64_t>( seq.num_arrays ) * seq.rows_per_array;
  std::vector<std::optional<sim_vector>> rows( capacity + 1u );

  auto check_row = [&]( std::uint32_t row, std::uint32_t clock ) {
    if ( row == 0u || row > capacity )
    {
      throw interpret_error( "cycle " + std::to_string( clock ) + ": row R" + std::to_string( row ) + " out of range" );
    }
  };
  auto array_of = [&]( std::uint32_t row ) { return ( row - 1u ) / seq.rows_per_array; };
  auto read = [&]( operand const& o, std::uint32_t clock ) {
    if ( o.is_constant() )
    {
      sim_vector v( width );
      return o.complemented ? ~v : v;
    }
    check_row( o.row, clock );
    if ( !rows[o.row] )
    {
      throw interpret_error( "cycle " + std::to_string( clock ) + ": read of unwritten row R" + std::to_string( o.row ) );
    }
    return o.complemented ? ~*rows[o.row] : *rows[o.row];
  };

  for ( std::size_t i = 0; i < seq.input_rows.size(); ++i )
  {
    check_row( seq.input_rows[i], 0u );
    if ( pi_values[i].width != width )
    {
      throw interpret_error( "input values differ in width" );
    }
    rows[seq.input_rows[i]] = pi_values[i];
  }

  for ( auto const& ins : seq.instructions )
  {
    check_row( ins.dest, ins.clock );
    for ( auto const& s : ins.src )
    {
      if ( ins.op != opcode::copy && !s.is_constant() && array_of( s.row ) != array_of( ins.dest ) )
      {
        throw interpret_error( "cycle " + std::to_string( ins.clock ) + ": operand R" + std::to_string( s.row ) +
                               " lies in another array than R" + std::to_string( ins.dest ) );
      }
    }
    if ( ins.op == opcode::copy )
    {
      rows[ins.dest] = read( ins.src.at( 0 ), ins.clock );
      continue;
    }
    auto const a = read( ins.src.at( 0 ), ins.clock );
    auto const b = read( ins.src.at( 1 ), ins.clock );
    auto const c = read( ins.src.at( 2 ), ins.clock );
    sim_vector out( width );
    for ( std::size_t w = 0; w < out.bits.size(); ++w )
    {
      out.bits[w] = ins.op == opcode::maj ? ( ( a.bits[w] & b.bits[w] ) | ( a.bits[w] & c.bits[w] ) | ( b.bits[w] & c.bits[w] ) )
                                          : ( a.bits[w] ^ b.bits[w] ^ c.bits[w] );
    }
    rows[ins.dest] = std::move( out );
  }

  std::vector<sim_vector> outputs;
  for ( auto const& o : seq.outputs )
  {
    outputs.push_back( read( o, static_cast<std::uint32_t>( seq.instructions.size() ) ) );
  }
  return outputs;
}

std::vector<bool> interpret( instruction_sequence const& seq, std::vector<bool> const& pi_values )
{
  std::vector<sim_vector> values;
  for ( auto const v : pi_values )
  {
    sim_vector s( 1u );
    s.set( 0u, v );
    values.push_back( std::move( s ) );
  }
  std::vector<bool> out;
  for ( auto const& v : interpret( seq, values ) )
  {
    out.push_back( v.get( 0u ) );
  }
  return out;
}

} // namespace imcc
