/*!
  \file sat.hpp
  \brief Small conflict-driven clause-learning SAT solver

  Two watched literals, first-UIP learning, VSIDS-style activities,
  phase saving and Luby restarts.  Used for the miters behind
  `validate_equivalence` when exhaustive simulation is too large.
*/

#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace imcc
{

class sat_solver
{
public:
  /*! \brief Literal encoding: 2 * var + negated. */
  using literal = std::uint32_t;

  enum class result
  {
    satisfiable,
    unsatisfiable,
    unknown
  };

  static constexpr literal make_literal( std::uint32_t var, bool negated = false ) { return 2u * var + ( negated ? 1u : 0u ); }

  std::uint32_t new_variable();
  std::uint32_t num_variables() const noexcept { return static_cast<std::uint32_t>( assigns_.size() ); }

  /*! \brief Adds a clause; returns false once the formula is trivially unsatisfiable. */
  bool add_clause( std::span<literal const> lits );
  bool add_clause( std::initializer_list<literal> lits ) { return add_clause( std::span<literal const>( lits.begin(), lits.size() ) ); }

  result solve( std::uint64_t conflict_limit );

  /*! \brief Value of `var` in the last satisfying assignment. */
  bool model_value( std::uint32_t var ) const { return model_[var] == 1; }

  std::uint64_t conflicts() const noexcept { return conflicts_; }

private:
  struct clause
  {
    std::vector<literal> lits;
    bool learnt = false;
  };

  static constexpr std::int8_t undef = 0;

  std::int8_t value( literal l ) const;
  void enqueue( literal l, std::int32_t reason );
  std::int32_t propagate();
  void analyze( std::int32_t conflict, std::vector<literal>& learnt, std::uint32_t& backtrack_level );
  void cancel_until( std::uint32_t level );
  literal pick_branch();
  void bump( std::uint32_t var );
  void heap_insert( std::uint32_t var );
  void heap_up( std::uint32_t pos );
  void heap_down( std::uint32_t pos );
  std::uint32_t heap_pop();
  std::uint32_t level() const noexcept { return static_cast<std::uint32_t>( trail_lim_.size() ); }

  std::vector<clause> clauses_;
  std::vector<std::vector<std::uint32_t>> watches_;
  std::vector<std::int8_t> assigns_; ///< per variable: 1 true, -1 false, 0 unassigned
  std::vector<std::int8_t> model_;
  std::vector<bool> phase_;
  std::vector<std::uint32_t> levels_;
  std::vector<std::int32_t> reasons_;
  std::vector<literal> trail_;
  std::vector<std::uint32_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  std::vector<std::uint32_t> heap_;
  std::vector<std::int32_t> heap_pos_;
  std::vector<bool> seen_;
  std::uint64_t conflicts_ = 0;
  bool ok_ = true;
};

} // namespace imcc
