#include <imcc/passes.hpp>

#include <imcc/random.hpp>
#include <imcc/simulation.hpp>

#include <algorithm>
#include <random>

namespace imcc
{

namespace
{

constexpr std::uint32_t max_triple_divisors = 14u;
constexpr validation_params pass_validation{ .exhaustive_threshold = 20u, .conflict_limit = 20000u };

/* The pass result if it is not larger than the input, the input otherwise. */
xmg_network guarded( xmg_network const& input, xmg_network result )
{
  result = sweep_dangling( result );
  if ( result.size() > input.size() )
  {
    return sweep_dangling( input );
  }
  return result;
}

/* Majority fan-ins of the gate behind `s`, with the edge complement pushed
   inside by self-duality. */
std::optional<std::array<signal, 3>> maj_view( xmg_network const& net, signal s )
{
  if ( !net.is_gate( s.index ) || net.gate_of( s.index ).kind != gate_kind::maj )
  {
    return std::nullopt;
  }
  auto f = net.gate_of( s.index ).fanins;
  for ( auto& x : f )
  {
    x = x ^ s.complemented;
  }
  return f;
}

bool contains( std::array<signal, 3> const& f, signal s )
{
  return std::find( f.begin(), f.end(), s ) != f.end();
}

/* Rebuilds gates in order; `rule` may return a replacement signal built
   with the builder, or nullopt to copy the gate. */
template<class Rule>
xmg_network rebuild( xmg_network const& net, Rule&& rule )
{
  network_builder builder( net.num_pis(), net.name(), { .hash = true, .simplify = true } );
  std::vector<signal> map( net.num_nodes() );
  for ( node_id n = 0; n <= net.num_pis(); ++n )
  {
    map[n] = { n, false };
  }
  for ( auto i = 0u; i < net.size(); ++i )
  {
    auto const& g = net.gates()[i];
    std::array<signal, 3> f{};
    for ( auto k = 0u; k < 3u; ++k )
    {
      f[k] = map[g.fanins[k].index] ^ g.fanins[k].complemented;
    }
    std::optional<signal> r = rule( builder, g, f );
    map[net.gate_at( i )] = r ? *r : builder.create( g.kind, f[0], f[1], f[2] );
  }
  for ( auto const& po : net.pos() )
  {
    builder.create_po( map[po.index] ^ po.complemented );
  }
  return std::move( builder ).take();
}

xmg_network constant_propagate( xmg_network const& net )
{
  network_builder builder( net.num_pis(), net.name(), { .hash = false, .simplify = true } );
  std::vector<signal> map( net.num_nodes() );
  for ( node_id n = 0; n <= net.num_pis(); ++n )
  {
    map[n] = { n, false };
  }
  for ( auto i = 0u; i < net.size(); ++i )
  {
    auto const& g = net.gates()[i];
    map[net.gate_at( i )] = builder.create( g.kind, map[g.fanins[0].index] ^ g.fanins[0].complemented,
                                            map[g.fanins[1].index] ^ g.fanins[1].complemented,
                                            map[g.fanins[2].index] ^ g.fanins[2].complemented );
  }
  for ( auto const& po : net.pos() )
  {
    builder.create_po( map[po.index] ^ po.complemented );
  }
  return guarded( net, std::move( builder ).take() );
}

xmg_network dedup_strash( xmg_network const& net )
{
  return guarded( net, strash( net ) );
}

struct resub_window
{
  std::vector<node_id> divisors; ///< ascending, all smaller than the root
};

resub_window make_window( xmg_network const& net, node_id root, std::vector<node_id> const& cone )
{
  std::vector<node_id> gates{ root };
  std::vector<node_id> frontier{ root };
  std::vector<node_id> leaves;
  /* breadth-first over fan-ins until the gate cap is reached */
  for ( std::size_t head = 0; head < frontier.size(); ++head )
  {
    for ( auto const& f : net.gate_of( frontier[head] ).fanins )
    {
      auto const n = f.index;
      if ( n == 0u || std::find( gates.begin(), gates.end(), n ) != gates.end() )
      {
        continue;
      }
      if ( net.is_gate( n ) && gates.size() < resub_window_gates )
      {
        gates.push_back( n );
        frontier.push_back( n );
      }
      else if ( std::find( leaves.begin(), leaves.end(), n ) == leaves.end() )
      {
        leaves.push_back( n );
      }
    }
  }
  resub_window w;
  for ( auto const n : gates )
  {
    if ( n != root && !std::binary_search( cone.begin(), cone.end(), n ) )
    {
      w.divisors.push_back( n );
    }
  }
  for ( auto const n : leaves )
  {
    if ( std::find( gates.begin(), gates.end(), n ) == gates.end() && !std::binary_search( cone.begin(), cone.end(), n ) )
    {
      w.divisors.push_back( n );
    }
  }
  std::sort( w.divisors.begin(), w.divisors.end() );
  w.divisors.erase( std::unique( w.divisors.begin(), w.divisors.end() ), w.divisors.end() );
  return w;
}

bool all_equal_to( sim_vector const& v, bool value )
{
  auto const last = v.bits.size() - 1u;
  for ( std::size_t w = 0; w <= last; ++w )
  {
    auto const mask = w == last ? v.tail_mask() : ~std::uint64_t{ 0 };
    if ( ( ( value ? ~v.bits[w] : v.bits[w] ) & mask ) != 0u )
    {
      return false;
    }
  }
  return true;
}

/* Finds a single-gate replacement over three divisors (constant allowed). */
std::optional<gate> find_one_gate( xmg_network const& net, std::vector<sim_vector> const& sims, node_id root,
                                   std::vector<node_id> divisors )
{
  if ( divisors.size() > max_triple_divisors )
  {
    divisors.erase( divisors.begin(), divisors.end() - max_triple_divisors );
  }
  divisors.insert( divisors.begin(), 0u );
  auto const& target = sims[root];
  auto const current = normalize_gate( net.gate_of( root ) );
  auto const d = divisors.size();

  auto accept = [&]( gate const& g ) -> bool {
    auto const [norm, out] = normalize_gate( g );
    if ( !out && norm == current.first && !current.second )
    {
      return false; /* the root itself */
    }
    return validate_equivalence( net, signal{ root, false }, candidate{ gate_candidate{ g.kind, g.fanins, false } },
                                 pass_validation ) == validation::equivalent;
  };

  for ( std::size_t i = 0; i < d; ++i )
  {
    for ( std::size_t j = i + 1u; j < d; ++j )
    {
      for ( std::size_t k = j + 1u; k < d; ++k )
      {
        std::array<sim_vector const*, 3> const t{ &sims[divisors[i]], &sims[divisors[j]], &sims[divisors[k]] };
        std::array<signal, 3> const s{ signal{ divisors[i], false }, signal{ divisors[j], false }, signal{ divisors[k], false } };
        for ( auto const out : { false, true } )
        {
          if ( check_candidate_op( target, gate_kind::xor3, t, { false, false, false }, out ) )
          {
            gate const g{ gate_kind::xor3, { s[0] ^ out, s[1], s[2] } };
            if ( accept( g ) )
            {
              return g;
            }
          }
        }
        for ( auto cls = 0u; cls < 4u; ++cls )
        {
          std::array<bool, 3> c{ cls == 1u, cls == 2u, cls == 3u };
          for ( auto const out : { false, true } )
          {
            if ( check_candidate_op( target, gate_kind::maj, t, c, out ) )
            {
              /* !M(a,b,c) = M(!a,!b,!c) */
              gate const g{ gate_kind::maj, { s[0] ^ ( c[0] != out ), s[1] ^ ( c[1] != out ), s[2] ^ ( c[2] != out ) } };
              if ( accept( g ) )
              {
                return g;
              }
            }
          }
        }
      }
    }
  }
  return std::nullopt;
}

xmg_network window_resub( xmg_network const& input, std::uint64_t seed, bool one_gate )
{
  auto cur = sweep_dangling( input );
  std::mt19937_64 rng( seed );
  std::bernoulli_distribution neutral( 0.25 );
  auto const patterns = make_patterns( cur.num_pis(), seed );
  auto sims = simulate( cur, patterns );

  node_id r = cur.num_nodes() > 0u ? cur.gate_at( 0 ) : 0u;
  while ( cur.size() > 0u && r < cur.num_nodes() )
  {
    auto const cone = mffc( cur, r );
    auto const window = make_window( cur, r, cone );
    std::optional<xmg_network> next;

    if ( all_equal_to( sims[r], false ) || all_equal_to( sims[r], true ) )
    {
      auto const value = all_equal_to( sims[r], true );
      if ( validate_equivalence( cur, signal{ r, false }, candidate{ signal{ 0u, value } }, pass_validation ) ==
           validation::equivalent )
      {
        next = substitute( cur, r, signal{ 0u, value } );
      }
    }
    for ( auto it = window.divisors.rbegin(); !next && it != window.divisors.rend(); ++it )
    {
      auto const m = check_candidate_equal( sims[r], sims[*it] );
      if ( m == match::neither )
      {
        continue;
      }
      signal const s{ *it, m == match::complement_equal };
      if ( validate_equivalence( cur, signal{ r, false }, candidate{ s }, pass_validation ) == validation::equivalent )
      {
        next = substitute( cur, r, s );
      }
    }
    if ( !next && one_gate && ( cone.size() > 1u || neutral( rng ) ) )
    {
      if ( auto g = find_one_gate( cur, sims, r, window.divisors ) )
      {
        next = replace_gate( cur, r, *g );
      }
    }

    if ( next )
    {
      auto const removed = cur.size() - next->size();
      cur = std::move( *next );
      sims = simulate( cur, patterns );
      r = r + 1u - removed;
    }
    else
    {
      ++r;
    }
  }
  return guarded( input, cur );
}

xmg_network maj_rewrite( xmg_network const& net, std::uint64_t seed )
{
  std::mt19937_64 rng( seed );
  std::bernoulli_distribution reshape( 0.25 );
  auto const refs = reference_counts( net );

  auto result = rebuild( net, [&]( network_builder& b, gate const& g, std::array<signal, 3> const& f ) -> std::optional<signal> {
    if ( g.kind != gate_kind::maj )
    {
      return std::nullopt;
    }
    if ( f[0].index == f[1].index || f[0].index == f[2].index || f[1].index == f[2].index )
    {
      return std::nullopt; /* left to the trivial rules */
    }
    auto const& cur = b.network();
    for ( auto k = 0u; k < 3u; ++k )
    {
      auto const c = maj_view( cur, f[k] );
      if ( !c )
      {
        continue;
      }
      auto const a = f[( k + 1u ) % 3u], bb = f[( k + 2u ) % 3u];
      if ( contains( *c, a ) && contains( *c, bb ) )
      {
        return f[k]; /* M(a,b,M(a,b,z)) */
      }
      if ( contains( *c, a ) && contains( *c, !bb ) )
      {
        return a; /* M(a,b,M(a,!b,z)) */
      }
      if ( contains( *c, !a ) && contains( *c, bb ) )
      {
        return bb;
      }
    }

    /* M(M(x,y,u), M(x,y,v), z) = M(x,y,M(u,v,z)) when both inner gates die */
    for ( auto k1 = 0u; k1 < 3u; ++k1 )
    {
      for ( auto k2 = k1 + 1u; k2 < 3u; ++k2 )
      {
        if ( refs[g.fanins[k1].index] != 1u || refs[g.fanins[k2].index] != 1u )
        {
          continue;
        }
        auto const c1 = maj_view( cur, f[k1] );
        auto const c2 = maj_view( cur, f[k2] );
        if ( !c1 || !c2 )
        {
          continue;
        }
        std::vector<signal> shared;
        for ( auto const& s : *c1 )
        {
          if ( contains( *c2, s ) && std::find( shared.begin(), shared.end(), s ) == shared.end() )
          {
            shared.push_back( s );
          }
        }
        if ( shared.size() != 2u )
        {
          continue;
        }
        auto rest = [&]( std::array<signal, 3> const& c ) {
          for ( auto const& s : c )
          {
            if ( s != shared[0] && s != shared[1] )
            {
              return s;
            }
          }
          return c[2];
        };
        auto const z = f[3u - k1 - k2];
        auto const inner = b.create( gate_kind::maj, rest( *c1 ), rest( *c2 ), z );
        return b.create( gate_kind::maj, shared[0], shared[1], inner );
      }
    }

    /* M(x,u,M(y,u,z)) = M(z,u,M(y,u,x)) */
    for ( auto k = 0u; k < 3u; ++k )
    {
      if ( refs[g.fanins[k].index] != 1u )
      {
        continue;
      }
      auto const c = maj_view( cur, f[k] );
      if ( !c )
      {
        continue;
      }
      auto const p1 = f[( k + 1u ) % 3u], p2 = f[( k + 2u ) % 3u];
      for ( auto const& [u, x] : { std::pair{ p1, p2 }, std::pair{ p2, p1 } } )
      {
        if ( !contains( *c, u ) || !reshape( rng ) )
        {
          continue;
        }
        std::vector<signal> others;
        for ( auto const& s : *c )
        {
          if ( s != u )
          {
            others.push_back( s );
          }
        }
        if ( others.size() != 2u )
        {
          continue;
        }
        auto const swap_first = ( rng() & 1u ) != 0u;
        auto const y = swap_first ? others[1] : others[0];
        auto const z = swap_first ? others[0] : others[1];
        auto const inner = b.create( gate_kind::maj, y, u, x );
        return b.create( gate_kind::maj, z, u, inner );
      }
    }
    return std::nullopt;
  } );
  return guarded( net, std::move( result ) );
}

xmg_network xor_rewrite( xmg_network const& net )
{
  auto const refs = reference_counts( net );

  auto result = rebuild( net, [&]( network_builder& b, gate const& g, std::array<signal, 3> const& f ) -> std::optional<signal> {
    auto const& cur = b.network();
    if ( g.kind == gate_kind::xor3 )
    {
      /* flatten one single-fanout XOR child and cancel repeated leaves */
      for ( auto k = 0u; k < 3u; ++k )
      {
        if ( refs[g.fanins[k].index] != 1u || !cur.is_gate( f[k].index ) ||
             cur.gate_of( f[k].index ).kind != gate_kind::xor3 )
        {
          continue;
        }
        bool parity = false;
        std::vector<node_id> leaves;
        auto add = [&]( signal s ) {
          parity ^= s.complemented;
          if ( s.index == 0u )
          {
            return;
          }
          auto const it = std::find( leaves.begin(), leaves.end(), s.index );
          if ( it != leaves.end() )
          {
            leaves.erase( it );
          }
          else
          {
            leaves.push_back( s.index );
          }
        };
        for ( auto j = 0u; j < 3u; ++j )
        {
          if ( j == k )
          {
            parity ^= f[k].complemented;
            for ( auto const& s : cur.gate_of( f[k].index ).fanins )
            {
              add( s );
            }
          }
          else
          {
            add( f[j] );
          }
        }
        if ( leaves.size() <= 3u )
        {
          while ( leaves.size() < 3u )
          {
            leaves.push_back( 0u );
          }
          return b.create( gate_kind::xor3, signal{ leaves[0], parity }, signal{ leaves[1], false }, signal{ leaves[2], false } );
        }
      }
      return std::nullopt;
    }

    /* XOR hidden in a two-level MAJ cone over two leaves */
    std::vector<node_id> leaves;
    std::array<std::optional<std::array<signal, 3>>, 3> expanded;
    bool any = false;
    auto note = [&]( signal s ) {
      if ( s.index != 0u && std::find( leaves.begin(), leaves.end(), s.index ) == leaves.end() )
      {
        leaves.push_back( s.index );
      }
    };
    for ( auto k = 0u; k < 3u; ++k )
    {
      if ( refs[g.fanins[k].index] == 1u )
      {
        expanded[k] = maj_view( cur, f[k] );
      }
      if ( expanded[k] )
      {
        any = true;
        for ( auto const& s : *expanded[k] )
        {
          note( s );
        }
      }
      else
      {
        note( f[k] );
      }
    }
    if ( !any || leaves.size() != 2u )
    {
      return std::nullopt;
    }
    auto value = [&]( signal s, std::uint32_t m ) {
      if ( s.index == 0u )
      {
        return s.complemented;
      }
      auto const pos = s.index == leaves[0] ? 0u : 1u;
      return static_cast<bool>( ( m >> pos ) & 1u ) != s.complemented;
    };
    auto maj3 = []( bool x, bool y, bool z ) { return ( x && y ) || ( x && z ) || ( y && z ); };
    std::uint32_t tt = 0;
    for ( auto m = 0u; m < 4u; ++m )
    {
      std::array<bool, 3> in{};
      for ( auto k = 0u; k < 3u; ++k )
      {
        in[k] = expanded[k] ? maj3( value( ( *expanded[k] )[0], m ), value( ( *expanded[k] )[1], m ), value( ( *expanded[k] )[2], m ) )
                            : value( f[k], m );
      }
      tt |= static_cast<std::uint32_t>( maj3( in[0], in[1], in[2] ) ) << m;
    }
    if ( tt == 0x6u || tt == 0x9u )
    {
      return b.create( gate_kind::xor3, signal{ leaves[0], tt == 0x9u }, signal{ leaves[1], false }, constant_zero );
    }
    return std::nullopt;
  } );
  return guarded( net, std::move( result ) );
}

xmg_network resub0_fixpoint( xmg_network net )
{
  while ( true )
  {
    auto next = window_resub( net, 0u, false );
    if ( next == net )
    {
      return net;
    }
    net = std::move( next );
  }
}

} // namespace

std::string_view to_string( pass_id id )
{
  switch ( id )
  {
  case pass_id::constant_propagate:
    return "constant-propagate";
  case pass_id::dedup_strash:
    return "dedup-strash";
  case pass_id::window_resub_0:
    return "window-resub-0";
  case pass_id::window_resub_1:
    return "window-resub-1";
  case pass_id::maj_rewrite:
    return "maj-rewrite";
  default:
    return "xor-rewrite";
  }
}

std::optional<pass_id> parse_pass_id( std::string_view name )
{
  for ( auto const id : all_passes )
  {
    if ( to_string( id ) == name )
    {
      return id;
    }
  }
  return std::nullopt;
}

xmg_network run_pass( xmg_network const& net, pass_id id, std::uint64_t seed )
{
  switch ( id )
  {
  case pass_id::constant_propagate:
    return constant_propagate( net );
  case pass_id::dedup_strash:
    return dedup_strash( net );
  case pass_id::window_resub_0:
    return window_resub( net, seed, false );
  case pass_id::window_resub_1:
    return window_resub( net, seed, true );
  case pass_id::maj_rewrite:
    return maj_rewrite( net, seed );
  default:
    return xor_rewrite( net );
  }
}

xmg_network cleanup( xmg_network const& net )
{
  constexpr auto max_iterations = 64u;
  auto cur = sweep_dangling( net );
  for ( auto i = 0u; i < max_iterations; ++i )
  {
    auto next = resub0_fixpoint( constant_propagate( dedup_strash( cur ) ) );
    if ( next == cur )
    {
      break;
    }
    cur = std::move( next );
  }
  return cur;
}

xmg_network run_random_sequence( xmg_network const& net, std::uint32_t k, std::uint64_t seed )
{
  std::mt19937_64 rng( seed );
  std::uniform_int_distribution<std::size_t> pick( 0u, all_passes.size() - 1u );
  auto cur = net;
  for ( auto i = 0u; i < k; ++i )
  {
    auto const id = all_passes[pick( rng )];
    cur = run_pass( cur, id, derive_seed( seed, { i } ) );
  }
  return cleanup( cur );
}

} // namespace imcc
