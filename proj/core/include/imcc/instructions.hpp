/*!
  \file instructions.hpp
  \brief Hardware instruction sequences and their text form

  Text form, one instruction per line:

      .arrays 1 256
      .inputs R1 R2 R3
      .outputs R5 !R4 0
      1: R4 <- MAJ(R1, !R2, 0)
      2: R5 <- XOR(R4, R3, 1)
      .end

  Rows are global and 1-based; constants print as `0` and `1`.  `.arrays`
  gives the number of arrays and the rows per array.  A multi-array
  sequence contains `Rd <- COPY(Rs)` lines that move an operand into a
  scratch row of the destination array.  Lines starting with `#` are
  comments.  The same content is also available as a JSON document.
*/

#pragma once

#include <imcc/edp_model.hpp>
#include <imcc/parse_error.hpp>
#include <imcc/scheduler.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace imcc
{

enum class opcode : std::uint8_t
{
  maj,
  xor3,
  copy
};

/*! \brief A source operand: a row or a constant. */
struct operand
{
  std::uint32_t row = 0; ///< 0 denotes the constant
  bool complemented = false;

  bool is_constant() const noexcept { return row == 0u; }
  bool operator==( operand const& ) const = default;
};

struct instruction
{
  std::uint32_t clock = 0;
  opcode op = opcode::maj;
  std::uint32_t dest = 0;
  std::vector<operand> src;

  bool operator==( instruction const& ) const = default;
};

struct instruction_sequence
{
  std::uint32_t num_arrays = 1;
  std::uint32_t rows_per_array = 0;
  std::vector<std::uint32_t> input_rows;
  std::vector<operand> outputs;
  std::vector<instruction> instructions;

  std::uint32_t count( opcode op ) const;

  bool operator==( instruction_sequence const& ) const = default;
};

/*! \brief One operation per gate in cycle order, preceded by the COPYs it needs. */
instruction_sequence emit_instructions( scheduled_netlist const& design, array_placement const& placement );

std::string format_instructions( instruction_sequence const& seq );

instruction_sequence parse_instructions( std::string_view text );

inline constexpr std::string_view instructions_json_format = "imcc-instructions/1";

/*! \brief The same sequence as a JSON document, for tooling. */
std::string write_instructions_json( instruction_sequence const& seq );

/*! \brief Throws `std::invalid_argument` on malformed input or a foreign format tag. */
instruction_sequence parse_instructions_json( std::string_view json_text );

} // namespace imcc
