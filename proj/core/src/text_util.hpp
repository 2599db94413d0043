#pragma once

#include <imcc/parse_error.hpp>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace imcc::detail
{

inline std::string_view trim( std::string_view s )
{
  auto const b = s.find_first_not_of( " \t\r" );
  if ( b == std::string_view::npos )
  {
    return {};
  }
  auto const e = s.find_last_not_of( " \t\r" );
  return s.substr( b, e - b + 1u );
}

/* Lines without their terminators; a trailing newline adds no empty line. */
inline std::vector<std::string_view> split_lines( std::string_view text )
{
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while ( pos < text.size() )
  {
    auto const nl = text.find( '\n', pos );
    if ( nl == std::string_view::npos )
    {
      lines.push_back( text.substr( pos ) );
      break;
    }
    lines.push_back( text.substr( pos, nl - pos ) );
    pos = nl + 1u;
  }
  return lines;
}

inline std::vector<std::string_view> split_ws( std::string_view s )
{
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while ( pos < s.size() )
  {
    auto const b = s.find_first_not_of( " \t\r", pos );
    if ( b == std::string_view::npos )
    {
      break;
    }
    auto e = s.find_first_of( " \t\r", b );
    if ( e == std::string_view::npos )
    {
      e = s.size();
    }
    tokens.push_back( s.substr( b, e - b ) );
    pos = e;
  }
  return tokens;
}

inline std::vector<std::string_view> split_char( std::string_view s, char sep )
{
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while ( true )
  {
    auto const e = s.find( sep, pos );
    parts.push_back( trim( s.substr( pos, e == std::string_view::npos ? std::string_view::npos : e - pos ) ) );
    if ( e == std::string_view::npos )
    {
      break;
    }
    pos = e + 1u;
  }
  return parts;
}

inline std::uint32_t parse_u32( std::string_view s, std::size_t line, char const* what )
{
  std::uint32_t v = 0;
  auto const* end = s.data() + s.size();
  auto const [ptr, ec] = std::from_chars( s.data(), end, v );
  if ( s.empty() || ec != std::errc{} || ptr != end )
  {
    throw parse_error( line, std::string( "expected " ) + what + ", got '" + std::string( s ) + "'" );
  }
  return v;
}

inline bool starts_with( std::string_view s, std::string_view prefix )
{
  return s.substr( 0, prefix.size() ) == prefix;
}

} // namespace imcc::detail
