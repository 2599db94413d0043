#include <imcc/simulation.hpp>

#include <imcc/sat.hpp>

#include <algorithm>
#include <random>
#include <stdexcept>

namespace imcc
{

namespace
{

constexpr std::uint32_t chunk_words = 64u;
constexpr std::uint32_t chunk_bits_log = 12u; /* 64 words of 64 bits */

constexpr std::uint64_t projections[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull };

inline std::uint64_t word_op( gate_kind kind, std::uint64_t a, std::uint64_t b, std::uint64_t c ) noexcept
{
  return kind == gate_kind::maj ? ( ( a & b ) | ( a & c ) | ( b & c ) ) : ( a ^ b ^ c );
}

inline std::uint64_t polarity( bool c ) noexcept
{
  return c ? ~std::uint64_t{ 0 } : std::uint64_t{ 0 };
}

/* Ascending transitive fan-in of the roots, constant included. */
std::vector<node_id> cone_of( xmg_network const& net, std::span<node_id const> roots )
{
  std::vector<bool> mark( net.num_nodes(), false );
  std::vector<node_id> stack( roots.begin(), roots.end() );
  mark[0] = true;
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    if ( mark[n] )
    {
      continue;
    }
    mark[n] = true;
    if ( net.is_gate( n ) )
    {
      for ( auto const& f : net.gate_of( n ).fanins )
      {
        if ( !mark[f.index] )
        {
          stack.push_back( f.index );
        }
      }
    }
  }
  std::vector<node_id> cone;
  for ( node_id n = 0; n < net.num_nodes(); ++n )
  {
    if ( mark[n] )
    {
      cone.push_back( n );
    }
  }
  return cone;
}

/* Chunked exhaustive evaluation of a cone.  PI k of the support is the
   k-th bit of the global pattern index. */
class cone_evaluator
{
public:
  cone_evaluator( xmg_network const& net, std::vector<node_id> cone, std::vector<node_id> const& support )
      : net_( net ), cone_( std::move( cone ) ), slot_( net.num_nodes(), -1 ), support_pos_( net.num_nodes(), -1 )
  {
    for ( auto i = 0u; i < cone_.size(); ++i )
    {
      slot_[cone_[i]] = static_cast<std::int32_t>( i );
    }
    for ( auto i = 0u; i < support.size(); ++i )
    {
      support_pos_[support[i]] = static_cast<std::int32_t>( i );
    }
    values_.resize( cone_.size() * chunk_words );
  }

  void run( std::uint64_t chunk )
  {
    for ( auto i = 0u; i < cone_.size(); ++i )
    {
      auto const n = cone_[i];
      auto* out = &values_[i * chunk_words];
      if ( net_.is_constant( n ) )
      {
        std::fill( out, out + chunk_words, 0u );
      }
      else if ( net_.is_pi( n ) )
      {
        auto const k = static_cast<std::uint32_t>( support_pos_[n] );
        for ( auto w = 0u; w < chunk_words; ++w )
        {
          if ( k < 6u )
          {
            out[w] = projections[k];
          }
          else if ( k < chunk_bits_log )
          {
            out[w] = polarity( ( w >> ( k - 6u ) ) & 1u );
          }
          else
          {
            out[w] = polarity( ( chunk >> ( k - chunk_bits_log ) ) & 1u );
          }
        }
      }
      else
      {
        auto const& g = net_.gate_of( n );
        auto const* a = &values_[static_cast<std::size_t>( slot_[g.fanins[0].index] ) * chunk_words];
        auto const* b = &values_[static_cast<std::size_t>( slot_[g.fanins[1].index] ) * chunk_words];
        auto const* c = &values_[static_cast<std::size_t>( slot_[g.fanins[2].index] ) * chunk_words];
        auto const pa = polarity( g.fanins[0].complemented );
        auto const pb = polarity( g.fanins[1].complemented );
        auto const pc = polarity( g.fanins[2].complemented );
        for ( auto w = 0u; w < chunk_words; ++w )
        {
          out[w] = word_op( g.kind, a[w] ^ pa, b[w] ^ pb, c[w] ^ pc );
        }
      }
    }
  }

  std::uint64_t word( signal s, std::uint32_t w ) const
  {
    return values_[static_cast<std::size_t>( slot_[s.index] ) * chunk_words + w] ^ polarity( s.complemented );
  }

private:
  xmg_network const& net_;
  std::vector<node_id> cone_;
  std::vector<std::int32_t> slot_;
  std::vector<std::int32_t> support_pos_;
  std::vector<std::uint64_t> values_;
};

/* Number of meaningful words per chunk and the mask of the last one. */
std::pair<std::uint32_t, std::uint64_t> chunk_shape( std::uint32_t num_support )
{
  if ( num_support >= chunk_bits_log )
  {
    return { chunk_words, ~std::uint64_t{ 0 } };
  }
  if ( num_support >= 6u )
  {
    return { 1u << ( num_support - 6u ), ~std::uint64_t{ 0 } };
  }
  return { 1u, ( std::uint64_t{ 1 } << ( 1u << num_support ) ) - 1u };
}

std::uint64_t num_chunks( std::uint32_t num_support )
{
  return num_support > chunk_bits_log ? std::uint64_t{ 1 } << ( num_support - chunk_bits_log ) : 1u;
}

/* Tseitin encoding of a cone; PIs map to shared variables. */
class cone_encoder
{
public:
  cone_encoder( sat_solver& solver, std::vector<std::uint32_t>& pi_vars ) : solver_( solver ), pi_vars_( pi_vars )
  {
    zero_ = solver_.new_variable();
    solver_.add_clause( { sat_solver::make_literal( zero_, true ) } );
  }

  std::vector<std::int64_t> encode( xmg_network const& net, std::span<node_id const> roots )
  {
    std::vector<std::int64_t> var( net.num_nodes(), -1 );
    for ( auto const n : cone_of( net, roots ) )
    {
      if ( net.is_constant( n ) )
      {
        var[n] = zero_;
      }
      else if ( net.is_pi( n ) )
      {
        auto& pv = pi_vars_[n - 1u];
        if ( pv == unassigned )
        {
          pv = solver_.new_variable();
        }
        var[n] = pv;
      }
      else
      {
        auto const& g = net.gate_of( n );
        std::array<sat_solver::literal, 3> in{};
        for ( auto i = 0u; i < 3u; ++i )
        {
          in[i] = sat_solver::make_literal( static_cast<std::uint32_t>( var[g.fanins[i].index] ), g.fanins[i].complemented );
        }
        var[n] = encode_gate( g.kind, in );
      }
    }
    return var;
  }

  std::uint32_t encode_gate( gate_kind kind, std::array<sat_solver::literal, 3> const& in )
  {
    auto const y = solver_.new_variable();
    auto const ly = sat_solver::make_literal( y );
    auto const a = in[0], b = in[1], c = in[2];
    if ( kind == gate_kind::maj )
    {
      solver_.add_clause( { a ^ 1u, b ^ 1u, ly } );
      solver_.add_clause( { a ^ 1u, c ^ 1u, ly } );
      solver_.add_clause( { b ^ 1u, c ^ 1u, ly } );
      solver_.add_clause( { a, b, ly ^ 1u } );
      solver_.add_clause( { a, c, ly ^ 1u } );
      solver_.add_clause( { b, c, ly ^ 1u } );
    }
    else
    {
      for ( auto m = 0u; m < 8u; ++m )
      {
        bool const va = m & 1u, vb = m & 2u, vc = m & 4u;
        bool const wrong_y = !( va ^ vb ^ vc );
        /* forbid (a=va, b=vb, c=vc, y=wrong_y) */
        solver_.add_clause( { va ? a ^ 1u : a, vb ? b ^ 1u : b, vc ? c ^ 1u : c, wrong_y ? ly ^ 1u : ly } );
      }
    }
    return y;
  }

  static constexpr std::uint32_t unassigned = ~std::uint32_t{ 0 };

private:
  sat_solver& solver_;
  std::vector<std::uint32_t>& pi_vars_;
  std::uint32_t zero_ = 0;
};

validation miter_result( sat_solver& solver, sat_solver::literal a, sat_solver::literal b, std::uint64_t limit )
{
  solver.add_clause( { a, b } );
  solver.add_clause( { a ^ 1u, b ^ 1u } );
  switch ( solver.solve( limit ) )
  {
  case sat_solver::result::satisfiable:
    return validation::different;
  case sat_solver::result::unsatisfiable:
    return validation::equivalent;
  default:
    return validation::undecided;
  }
}

std::vector<node_id> merge_support( std::vector<node_id> a, std::vector<node_id> const& b )
{
  a.insert( a.end(), b.begin(), b.end() );
  std::sort( a.begin(), a.end() );
  a.erase( std::unique( a.begin(), a.end() ), a.end() );
  return a;
}

} // namespace

sim_vector::sim_vector( std::uint32_t w ) : bits( ( w + 63u ) / 64u, 0u ), width( w ) {}

void sim_vector::set( std::uint32_t pattern, bool value )
{
  auto const mask = std::uint64_t{ 1 } << ( pattern & 63u );
  if ( value )
  {
    bits[pattern >> 6] |= mask;
  }
  else
  {
    bits[pattern >> 6] &= ~mask;
  }
}

std::uint64_t sim_vector::tail_mask() const noexcept
{
  auto const r = width & 63u;
  return r == 0u ? ~std::uint64_t{ 0 } : ( std::uint64_t{ 1 } << r ) - 1u;
}

sim_vector operator~( sim_vector const& v )
{
  sim_vector r = v;
  for ( auto& w : r.bits )
  {
    w = ~w;
  }
  if ( !r.bits.empty() )
  {
    r.bits.back() &= r.tail_mask();
  }
  return r;
}

std::vector<sim_vector> make_patterns( std::uint32_t num_pis, std::uint64_t seed, std::uint32_t exhaustive_pis,
                                       std::uint32_t random_patterns )
{
  std::vector<sim_vector> patterns;
  patterns.reserve( num_pis );
  if ( num_pis <= exhaustive_pis )
  {
    if ( num_pis > 30u )
    {
      throw std::invalid_argument( "make_patterns: too many PIs for exhaustive patterns" );
    }
    auto const width = 1u << num_pis;
    for ( auto k = 0u; k < num_pis; ++k )
    {
      sim_vector v( width );
      for ( auto w = 0u; w < v.bits.size(); ++w )
      {
        v.bits[w] = k < 6u ? projections[k] : polarity( ( w >> ( k - 6u ) ) & 1u );
      }
      v.bits.back() &= v.tail_mask();
      patterns.push_back( std::move( v ) );
    }
    return patterns;
  }

  std::mt19937_64 rng( seed );
  auto const width = random_patterns + 2u;
  for ( auto k = 0u; k < num_pis; ++k )
  {
    sim_vector v( width );
    for ( auto& w : v.bits )
    {
      w = rng();
    }
    v.set( random_patterns, false );
    v.set( random_patterns + 1u, true );
    v.bits.back() &= v.tail_mask();
    patterns.push_back( std::move( v ) );
  }
  return patterns;
}

std::vector<sim_vector> simulate( xmg_network const& net, std::span<sim_vector const> pi_patterns )
{
  if ( pi_patterns.size() != net.num_pis() )
  {
    throw std::invalid_argument( "simulate: pattern count does not match the number of PIs" );
  }
  auto const width = pi_patterns.empty() ? 1u : pi_patterns.front().width;
  std::vector<sim_vector> values;
  values.reserve( net.num_nodes() );
  values.emplace_back( width );
  for ( auto const& p : pi_patterns )
  {
    if ( p.width != width )
    {
      throw std::invalid_argument( "simulate: PI patterns differ in width" );
    }
    values.push_back( p );
  }
  auto const words = values.front().bits.size();
  for ( auto const& g : net.gates() )
  {
    sim_vector out( width );
    auto const& a = values[g.fanins[0].index].bits;
    auto const& b = values[g.fanins[1].index].bits;
    auto const& c = values[g.fanins[2].index].bits;
    auto const pa = polarity( g.fanins[0].complemented );
    auto const pb = polarity( g.fanins[1].complemented );
    auto const pc = polarity( g.fanins[2].complemented );
    for ( std::size_t w = 0; w < words; ++w )
    {
      out.bits[w] = word_op( g.kind, a[w] ^ pa, b[w] ^ pb, c[w] ^ pc );
    }
    out.bits.back() &= out.tail_mask();
    values.push_back( std::move( out ) );
  }
  return values;
}

sim_vector simulate_signal( std::vector<sim_vector> const& node_values, signal s )
{
  auto const& v = node_values.at( s.index );
  return s.complemented ? ~v : v;
}

std::vector<sim_vector> po_truth_tables( xmg_network const& net )
{
  if ( net.num_pis() > 20u )
  {
    throw std::invalid_argument( "po_truth_tables: more than 20 PIs" );
  }
  auto const patterns = make_patterns( net.num_pis(), 0u, 20u );
  auto const values = simulate( net, patterns );
  std::vector<sim_vector> tts;
  for ( auto const& po : net.pos() )
  {
    tts.push_back( simulate_signal( values, po ) );
  }
  return tts;
}

match check_candidate_equal( sim_vector const& root, sim_vector const& divisor )
{
  if ( root.width != divisor.width )
  {
    return match::neither;
  }
  bool equal = true, complement = true;
  auto const last = root.bits.size() - 1u;
  for ( std::size_t w = 0; w <= last && ( equal || complement ); ++w )
  {
    auto const mask = w == last ? root.tail_mask() : ~std::uint64_t{ 0 };
    equal = equal && ( ( root.bits[w] ^ divisor.bits[w] ) & mask ) == 0u;
    complement = complement && ( ( root.bits[w] ^ ~divisor.bits[w] ) & mask ) == 0u;
  }
  if ( equal )
  {
    return match::equal;
  }
  return complement ? match::complement_equal : match::neither;
}

bool check_candidate_op( sim_vector const& target, gate_kind kind, std::array<sim_vector const*, 3> const& triple,
                         std::array<bool, 3> const& complements, bool output_complement )
{
  auto const pa = polarity( complements[0] );
  auto const pb = polarity( complements[1] );
  auto const pc = polarity( complements[2] );
  auto const po = polarity( output_complement );
  auto const last = target.bits.size() - 1u;
  for ( std::size_t w = 0; w <= last; ++w )
  {
    auto const mask = w == last ? target.tail_mask() : ~std::uint64_t{ 0 };
    auto const v = word_op( kind, triple[0]->bits[w] ^ pa, triple[1]->bits[w] ^ pb, triple[2]->bits[w] ^ pc ) ^ po;
    if ( ( ( v ^ target.bits[w] ) & mask ) != 0u )
    {
      return false;
    }
  }
  return true;
}

std::vector<node_id> dependent_pis( xmg_network const& net, node_id n )
{
  std::vector<node_id> pis;
  node_id const roots[] = { n };
  for ( auto const m : cone_of( net, roots ) )
  {
    if ( net.is_pi( m ) )
    {
      pis.push_back( m );
    }
  }
  return pis;
}

validation validate_equivalence( xmg_network const& net, signal a, candidate const& b, validation_params const& ps )
{
  std::vector<node_id> roots{ a.index };
  if ( auto const* s = std::get_if<signal>( &b ) )
  {
    if ( *s == a )
    {
      return validation::equivalent;
    }
    if ( s->index == a.index )
    {
      return validation::different;
    }
    roots.push_back( s->index );
  }
  else
  {
    for ( auto const& f : std::get<gate_candidate>( b ).fanins )
    {
      roots.push_back( f.index );
    }
  }

  std::vector<node_id> support;
  for ( auto const r : roots )
  {
    support = merge_support( std::move( support ), dependent_pis( net, r ) );
  }

  if ( support.size() <= ps.exhaustive_threshold )
  {
    auto const k = static_cast<std::uint32_t>( support.size() );
    cone_evaluator eval( net, cone_of( net, roots ), support );
    auto const [words, last_mask] = chunk_shape( k );
    for ( std::uint64_t chunk = 0; chunk < num_chunks( k ); ++chunk )
    {
      eval.run( chunk );
      for ( auto w = 0u; w < words; ++w )
      {
        auto const mask = w + 1u == words ? last_mask : ~std::uint64_t{ 0 };
        std::uint64_t bv;
        if ( auto const* s = std::get_if<signal>( &b ) )
        {
          bv = eval.word( *s, w );
        }
        else
        {
          auto const& gc = std::get<gate_candidate>( b );
          bv = word_op( gc.kind, eval.word( gc.fanins[0], w ), eval.word( gc.fanins[1], w ), eval.word( gc.fanins[2], w ) ) ^
               polarity( gc.complemented );
        }
        if ( ( ( eval.word( a, w ) ^ bv ) & mask ) != 0u )
        {
          return validation::different;
        }
      }
    }
    return validation::equivalent;
  }

  sat_solver solver;
  std::vector<std::uint32_t> pi_vars( net.num_pis(), cone_encoder::unassigned );
  cone_encoder enc( solver, pi_vars );
  auto const var = enc.encode( net, roots );
  auto const lit = [&]( signal s ) { return sat_solver::make_literal( static_cast<std::uint32_t>( var[s.index] ), s.complemented ); };
  sat_solver::literal lb;
  if ( auto const* s = std::get_if<signal>( &b ) )
  {
    lb = lit( *s );
  }
  else
  {
    auto const& gc = std::get<gate_candidate>( b );
    auto const y = enc.encode_gate( gc.kind, { lit( gc.fanins[0] ), lit( gc.fanins[1] ), lit( gc.fanins[2] ) } );
    lb = sat_solver::make_literal( y, gc.complemented );
  }
  return miter_result( solver, lit( a ), lb, ps.conflict_limit );
}

validation check_equivalence( xmg_network const& a, xmg_network const& b, validation_params const& ps )
{
  if ( a.num_pis() != b.num_pis() || a.num_pos() != b.num_pos() )
  {
    throw std::invalid_argument( "check_equivalence: interface mismatch" );
  }
  auto const num_pis = a.num_pis();
  if ( num_pis <= ps.exhaustive_threshold )
  {
    std::vector<node_id> support( num_pis );
    for ( auto i = 0u; i < num_pis; ++i )
    {
      support[i] = i + 1u;
    }
    std::vector<node_id> ra, rb;
    for ( auto const& s : a.pos() )
    {
      ra.push_back( s.index );
    }
    for ( auto const& s : b.pos() )
    {
      rb.push_back( s.index );
    }
    /* every PI gets a slot so both evaluators see the same assignment */
    auto with_pis = [&]( xmg_network const& net, std::vector<node_id> roots ) {
      roots.insert( roots.end(), support.begin(), support.end() );
      return cone_of( net, roots );
    };
    cone_evaluator ea( a, with_pis( a, ra ), support );
    cone_evaluator eb( b, with_pis( b, rb ), support );
    auto const [words, last_mask] = chunk_shape( num_pis );
    for ( std::uint64_t chunk = 0; chunk < num_chunks( num_pis ); ++chunk )
    {
      ea.run( chunk );
      eb.run( chunk );
      for ( auto o = 0u; o < a.num_pos(); ++o )
      {
        for ( auto w = 0u; w < words; ++w )
        {
          auto const mask = w + 1u == words ? last_mask : ~std::uint64_t{ 0 };
          if ( ( ( ea.word( a.pos()[o], w ) ^ eb.word( b.pos()[o], w ) ) & mask ) != 0u )
          {
            return validation::different;
          }
        }
      }
    }
    return validation::equivalent;
  }

  bool undecided = false;
  for ( auto o = 0u; o < a.num_pos(); ++o )
  {
    sat_solver solver;
    std::vector<std::uint32_t> pi_vars( num_pis, cone_encoder::unassigned );
    cone_encoder enc( solver, pi_vars );
    node_id const root_a[] = { a.pos()[o].index };
    node_id const root_b[] = { b.pos()[o].index };
    auto const va = enc.encode( a, root_a );
    auto const vb = enc.encode( b, root_b );
    auto const la = sat_solver::make_literal( static_cast<std::uint32_t>( va[a.pos()[o].index] ), a.pos()[o].complemented );
    auto const lb = sat_solver::make_literal( static_cast<std::uint32_t>( vb[b.pos()[o].index] ), b.pos()[o].complemented );
    auto const r = miter_result( solver, la, lb, ps.conflict_limit );
    if ( r == validation::different )
    {
      return r;
    }
    undecided = undecided || r == validation::undecided;
  }
  return undecided ? validation::undecided : validation::equivalent;
}

} // namespace imcc
