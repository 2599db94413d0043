/*!
  \file parse_error.hpp
  \brief Error type shared by the text readers
*/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace imcc
{

/*! \brief Parse failure carrying the 1-based number of the offending line. */
class parse_error : public std::runtime_error
{
public:
  parse_error( std::size_t line, std::string const& message )
      : std::runtime_error( "line " + std::to_string( line ) + ": " + message ), line_( line )
  {
  }

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace imcc
