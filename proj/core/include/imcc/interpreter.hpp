/*!
  \file interpreter.hpp
  \brief Bit-parallel replay of instruction sequences on modeled arrays

  Every row holds one bit per input pattern.  Inputs are written to their
  rows first; each instruction reads all of its sources before writing the
  destination, so in-place overwrite of a source row is allowed.
*/

#pragma once

#include <imcc/instructions.hpp>
#include <imcc/simulation.hpp>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace imcc
{

/*! \brief Raised on reads of unwritten rows, rows out of range or cross-array operands. */
class interpret_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Output values for one pattern vector per input. */
std::vector<sim_vector> interpret( instruction_sequence const& seq, std::span<sim_vector const> pi_values );

/*! \brief Single-pattern convenience wrapper. */
std::vector<bool> interpret( instruction_sequence const& seq, std::vector<bool> const& pi_values );

} // namespace imcc
