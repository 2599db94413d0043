/*!
  \file netlist_io.hpp
  \brief ASCII AIGER input and the XMG text format

  XMG text format:

      .name full_adder
      .pis 3
      .pos 2
      N4 = XOR(N1, N2, N3)
      N5 = MAJ(N1, N2, N3)
      O0 = N4
      O1 = !N5
      .end

  `N0` is the constant zero, `N1`..`N<pis>` are the PIs, gate lines must
  appear in index order and `!` complements a reference.  `.name` is
  optional; `#` starts a comment line.
*/

#pragma once

#include <imcc/parse_error.hpp>
#include <imcc/xmg.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace imcc
{

/*! \brief Reads an ASCII AIGER ("aag") combinational circuit.

  Every AND becomes MAJ(a, b, 0) without hashing or simplification, so the
  gate count equals the AND count.  AND lines may appear in any order.
  Latches, malformed headers and out-of-range literals raise `parse_error`.
  Binary AIGER ("aig") is accepted as well; its line numbers refer to the
  equivalent ASCII file.
*/
xmg_network parse_aiger( std::string_view text, std::string name = {} );

std::string write_xmg( xmg_network const& net );
xmg_network parse_xmg( std::string_view text );

/*! \brief Whole file as a string; throws `std::runtime_error` if unreadable. */
std::string read_text_file( std::filesystem::path const& path );
void write_text_file( std::filesystem::path const& path, std::string_view content );

} // namespace imcc
