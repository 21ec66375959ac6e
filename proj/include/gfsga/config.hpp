#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "complexity.hpp"
#include "registers.hpp"
#include "sampling.hpp"
#include "taps.hpp"

/*!
  \file config.hpp
  \brief Scenario configuration

  A scenario is one JSON document with the sections generator, analysis,
  attack, report and optimize. Only generator is mandatory for analyze and
  attack; optimize and report read their own sections. Unknown keys are
  rejected so that typos surface as configuration errors.
*/

namespace gfsga
{

/* any inconsistency in a scenario; the CLI maps it to exit code 2 */
class config_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class RegisterKind
{
  lfsr,
  nfsr,
  hybrid
};

struct FilterSource
{
  enum class kind
  {
    uniform_random,
    hex
  };
  kind source = kind::uniform_random;
  std::string table;
  /* falls back to the run seed */
  std::optional<std::uint64_t> seed;
};

struct GeneratorConfig
{
  RegisterKind kind = RegisterKind::lfsr;
  RegisterSpec reg;
  std::vector<TapSet> taps;
  std::size_t m = 1;
  FilterSource filter;
  /* planted initial state for generate, hex as in Gf2Vector::to_hex */
  std::optional<std::string> state;

  std::size_t n() const
  {
    std::size_t total = 0;
    for ( auto const& t : taps )
      total += t.size();
    return total;
  }

  label_t length() const { return label_t( register_length( reg ) ); }
};

struct AnalysisConfig
{
  ScheduleMode mode = ScheduleMode::greedy;
  std::optional<label_t> sigma;
  std::vector<label_t> schedule;
  double solver_exponent = default_solver_exponent;
  bool calibrate_m = false;
  bool scorecard = false;
  std::optional<StopRule> stop;
  /* NFSR cost model (r, e, omega); absent means not requested */
  std::optional<std::vector<double>> nfsr_cost;
  /* hybrid window counting model: per-register, merged or both */
  std::string window_model = "both";
};

struct AttackConfig
{
  std::string keystream;
  HybridModel window_model = HybridModel::per_register;
  std::size_t workers = 1;
  bool early_solve = true;
  /* blocks written by generate; 0 chooses 4 L */
  std::size_t blocks = 0;
};

struct ReportConfig
{
  std::string format = "table";
  std::string fixture;
};

struct OptimizeConfig
{
  std::string strategy = "staged";
  std::vector<label_t> differences;
  label_t length = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t budget = 12;
  std::size_t chunk = 6;
  std::size_t retries = 3;
};

struct ScenarioConfig
{
  std::string name;
  std::optional<GeneratorConfig> generator;
  AnalysisConfig analysis;
  AttackConfig attack;
  ReportConfig report;
  std::optional<OptimizeConfig> optimize;
  /* canonical text of the parsed document, input to the provenance hash */
  std::string canonical;
  /* directory of the config file; relative keystream paths resolve against it */
  std::string base_dir;
};

namespace detail
{

using json = nlohmann::json;

inline void allow_keys( json const& j, std::string const& where, std::set<std::string> const& keys )
{
  if ( !j.is_object() )
  {
    throw config_error( where + ": expected an object" );
  }
  for ( auto const& [key, value] : j.items() )
  {
    if ( !keys.count( key ) )
    {
      throw config_error( where + ": unknown key '" + key + "'" );
    }
  }
}

template<class T>
T read( json const& j, std::string const& where, std::string const& key )
{
  if ( !j.contains( key ) )
  {
    throw config_error( where + ": missing '" + key + "'" );
  }
  try
  {
    if constexpr ( std::is_unsigned_v<T> )
    {
      if ( j.at( key ).is_number_integer() && j.at( key ).template get<std::int64_t>() < 0 )
        throw config_error( where + "." + key + ": must not be negative" );
    }
    return j.at( key ).template get<T>();
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw config_error( where + "." + key + ": " + e.what() );
  }
}

template<class T>
T read_or( json const& j, std::string const& where, std::string const& key, T fallback )
{
  return j.contains( key ) ? read<T>( j, where, key ) : fallback;
}

inline TapSet make_taps( std::vector<label_t> const& positions, label_t L, std::string const& where )
{
  try
  {
    return TapSet( positions, L );
  }
  catch ( std::invalid_argument const& e )
  {
    throw config_error( where + ": " + e.what() );
  }
}

/* feedback may be omitted for analysis-only scenarios; attacks need it */
inline LfsrSpec parse_lfsr( json const& j, std::string const& where )
{
  allow_keys( j, where, { "kind", "length", "feedback" } );
  LfsrSpec spec;
  spec.length = read<std::size_t>( j, where, "length" );
  if ( spec.length == 0 )
  {
    throw config_error( where + ".length: must be positive" );
  }
  if ( !j.contains( "feedback" ) )
  {
    return spec;
  }
  if ( j["feedback"].is_string() )
  {
    if ( j["feedback"] != "primitive" )
    {
      throw config_error( where + ".feedback: expected a cell list or \"primitive\"" );
    }
    try
    {
      return primitive_lfsr( spec.length );
    }
    catch ( std::invalid_argument const& e )
    {
      throw config_error( where + ".feedback: " + e.what() );
    }
  }
  spec.feedback = read<std::vector<std::size_t>>( j, where, "feedback" );
  try
  {
    spec.validate();
  }
  catch ( std::invalid_argument const& e )
  {
    throw config_error( where + ": " + e.what() );
  }
  return spec;
}

inline NfsrSpec parse_nfsr( json const& j, std::string const& where )
{
  allow_keys( j, where, { "kind", "length", "constant", "monomials" } );
  NfsrSpec spec;
  spec.length = read<std::size_t>( j, where, "length" );
  spec.constant_term = read_or<bool>( j, where, "constant", false );
  spec.monomials = read<std::vector<std::vector<std::size_t>>>( j, where, "monomials" );
  try
  {
    spec.validate();
  }
  catch ( std::invalid_argument const& e )
  {
    throw config_error( where + ": " + e.what() );
  }
  return spec;
}

inline GeneratorConfig parse_generator( json const& j )
{
  std::string const where = "generator";
  allow_keys( j, where, { "register", "taps", "differences", "m", "filter", "state" } );
  GeneratorConfig g;
  auto const& r = j.contains( "register" ) ? j["register"] : throw config_error( where + ": missing 'register'" );
  allow_keys( r, where + ".register", { "kind", "length", "feedback", "constant", "monomials", "lfsr", "nfsr", "coupling" } );
  auto const kind = read<std::string>( r, where + ".register", "kind" );
  if ( kind == "lfsr" )
  {
    g.kind = RegisterKind::lfsr;
    g.reg = parse_lfsr( r, where + ".register" );
  }
  else if ( kind == "nfsr" )
  {
    g.kind = RegisterKind::nfsr;
    g.reg = parse_nfsr( r, where + ".register" );
  }
  else if ( kind == "hybrid" )
  {
    g.kind = RegisterKind::hybrid;
    HybridSpec h;
    h.lfsr = parse_lfsr( read<json>( r, where + ".register", "lfsr" ), where + ".register.lfsr" );
    h.nfsr = parse_nfsr( read<json>( r, where + ".register", "nfsr" ), where + ".register.nfsr" );
    h.coupling = read_or<bool>( r, where + ".register", "coupling", true );
    if ( h.coupling && h.lfsr.length != h.nfsr.length )
    {
      throw config_error( where + ".register: coupled registers must have equal lengths" );
    }
    try
    {
      if ( !h.lfsr.feedback.empty() )
        h.validate();
    }
    catch ( std::invalid_argument const& e )
    {
      throw config_error( where + ".register: " + e.what() );
    }
    g.reg = h;
  }
  else
  {
    throw config_error( where + ".register.kind: expected lfsr, nfsr or hybrid, got '" + kind + "'" );
  }

  if ( g.kind == RegisterKind::hybrid )
  {
    auto const& h = std::get<HybridSpec>( g.reg );
    auto const t = read<json>( j, where, "taps" );
    allow_keys( t, where + ".taps", { "lfsr", "nfsr" } );
    g.taps.push_back( make_taps( read<std::vector<label_t>>( t, where + ".taps", "lfsr" ), label_t( h.lfsr.length ),
                                 where + ".taps.lfsr" ) );
    g.taps.push_back( make_taps( read<std::vector<label_t>>( t, where + ".taps", "nfsr" ), label_t( h.nfsr.length ),
                                 where + ".taps.nfsr" ) );
  }
  else
  {
    auto const L = label_t( register_length( g.reg ) );
    if ( j.contains( "taps" ) == j.contains( "differences" ) )
    {
      throw config_error( where + ": give exactly one of 'taps' and 'differences'" );
    }
    if ( j.contains( "taps" ) )
    {
      g.taps.push_back( make_taps( read<std::vector<label_t>>( j, where, "taps" ), L, where + ".taps" ) );
    }
    else
    {
      try
      {
        g.taps.push_back( TapSet::from_differences( read<std::vector<label_t>>( j, where, "differences" ), L ) );
      }
      catch ( std::invalid_argument const& e )
      {
        throw config_error( where + ".differences: " + e.what() );
      }
    }
  }

  g.m = read<std::size_t>( j, where, "m" );
  if ( g.m < 1 || g.m > g.n() )
  {
    throw config_error( where + ".m: require 1 <= m <= n = " + std::to_string( g.n() ) );
  }
  if ( g.m > 32 )
  {
    throw config_error( where + ".m: keystream blocks hold at most 32 bits" );
  }

  if ( j.contains( "filter" ) )
  {
    auto const& f = j["filter"];
    allow_keys( f, where + ".filter", { "source", "table", "seed" } );
    auto const source = read_or<std::string>( f, where + ".filter", "source", "uniform-random" );
    if ( source == "uniform-random" )
    {
      g.filter.source = FilterSource::kind::uniform_random;
      if ( f.contains( "seed" ) )
        g.filter.seed = read<std::uint64_t>( f, where + ".filter", "seed" );
    }
    else if ( source == "hex" )
    {
      g.filter.source = FilterSource::kind::hex;
      g.filter.table = read<std::string>( f, where + ".filter", "table" );
    }
    else
    {
      throw config_error( where + ".filter.source: expected hex or uniform-random, got '" + source + "'" );
    }
  }
  if ( j.contains( "state" ) )
  {
    g.state = read<std::string>( j, where, "state" );
  }
  return g;
}

inline StopRule parse_stop( json const& j, std::string const& where )
{
  if ( j.is_string() )
  {
    auto const s = j.get<std::string>();
    if ( s == "rank" )
      return StopRule::rank();
    if ( s == "schedule" )
      return StopRule::whole_schedule();
    throw config_error( where + ": expected rank, schedule or {\"samples\": c}" );
  }
  allow_keys( j, where, { "samples" } );
  auto const c = read<std::size_t>( j, where, "samples" );
  if ( c < 1 )
  {
    throw config_error( where + ".samples: must be at least 1" );
  }
  return StopRule::samples( c );
}

inline AnalysisConfig parse_analysis( json const& j, std::optional<GeneratorConfig> const& gen )
{
  std::string const where = "analysis";
  allow_keys( j, where,
              { "mode", "sigma", "schedule", "solver_exponent", "calibrate_m", "scorecard", "stop", "nfsr_cost",
                "window_model" } );
  AnalysisConfig a;
  try
  {
    a.mode = schedule_mode_from_string( read_or<std::string>( j, where, "mode", "greedy" ) );
  }
  catch ( std::invalid_argument const& e )
  {
    throw config_error( where + ".mode: " + e.what() );
  }
  if ( j.contains( "sigma" ) )
    a.sigma = read<label_t>( j, where, "sigma" );
  a.schedule = read_or<std::vector<label_t>>( j, where, "schedule", {} );
  a.solver_exponent = read_or<double>( j, where, "solver_exponent", a.solver_exponent );
  if ( !( a.solver_exponent > 0.0 ) )
  {
    throw config_error( where + ".solver_exponent: must be positive" );
  }
  a.calibrate_m = read_or<bool>( j, where, "calibrate_m", false );
  a.scorecard = read_or<bool>( j, where, "scorecard", false );
  if ( j.contains( "stop" ) )
    a.stop = parse_stop( j["stop"], where + ".stop" );
  if ( j.contains( "nfsr_cost" ) )
  {
    auto const& c = j["nfsr_cost"];
    allow_keys( c, where + ".nfsr_cost", { "r", "e", "omega" } );
    a.nfsr_cost = std::vector<double>{ double( read_or<std::size_t>( c, where + ".nfsr_cost", "r", 2 ) ),
                                       double( read_or<std::size_t>( c, where + ".nfsr_cost", "e", 2 ) ),
                                       read_or<double>( c, where + ".nfsr_cost", "omega", 2.807 ) };
  }
  a.window_model = read_or<std::string>( j, where, "window_model", "both" );
  if ( a.window_model != "both" && a.window_model != "per-register" && a.window_model != "merged" )
  {
    throw config_error( where + ".window_model: expected per-register, merged or both" );
  }

  if ( a.mode == ScheduleMode::constant && a.sigma && *a.sigma < 1 )
  {
    throw config_error( where + ".sigma: must be at least 1" );
  }
  if ( a.mode != ScheduleMode::constant && a.sigma )
  {
    throw config_error( where + ".sigma: only meaningful in constant mode" );
  }
  if ( a.mode == ScheduleMode::custom && a.schedule.empty() )
  {
    throw config_error( where + ".schedule: custom mode needs a non-empty schedule" );
  }
  if ( a.mode != ScheduleMode::custom && !a.schedule.empty() )
  {
    throw config_error( where + ".schedule: only meaningful in custom mode" );
  }
  if ( gen )
  {
    auto const L = gen->length();
    if ( a.sigma && *a.sigma > L )
    {
      throw config_error( where + ".sigma: exceeds L = " + std::to_string( L ) );
    }
    for ( auto s : a.schedule )
    {
      if ( s < 1 || s > L )
      {
        throw config_error( where + ".schedule: step " + std::to_string( s ) + " outside 1.." + std::to_string( L ) );
      }
    }
  }
  return a;
}

inline AttackConfig parse_attack( json const& j )
{
  std::string const where = "attack";
  allow_keys( j, where, { "keystream", "window_model", "workers", "early_solve", "blocks" } );
  AttackConfig a;
  a.keystream = read_or<std::string>( j, where, "keystream", "" );
  try
  {
    a.window_model = hybrid_model_from_string( read_or<std::string>( j, where, "window_model", "per-register" ) );
  }
  catch ( std::invalid_argument const& e )
  {
    throw config_error( where + ".window_model: " + e.what() );
  }
  a.workers = read_or<std::size_t>( j, where, "workers", 1 );
  if ( a.workers < 1 )
  {
    throw config_error( where + ".workers: must be at least 1" );
  }
  a.early_solve = read_or<bool>( j, where, "early_solve", true );
  a.blocks = read_or<std::size_t>( j, where, "blocks", 0 );
  return a;
}

inline ReportConfig parse_report( json const& j )
{
  std::string const where = "report";
  allow_keys( j, where, { "format", "fixture" } );
  ReportConfig r;
  r.format = read_or<std::string>( j, where, "format", "table" );
  if ( r.format != "table" && r.format != "structured" )
  {
    throw config_error( where + ".format: expected table or structured" );
  }
  r.fixture = read_or<std::string>( j, where, "fixture", "" );
  return r;
}

inline OptimizeConfig parse_optimize( json const& j )
{
  std::string const where = "optimize";
  allow_keys( j, where, { "strategy", "differences", "L", "n", "m", "budget", "chunk", "retries" } );
  OptimizeConfig o;
  o.strategy = read_or<std::string>( j, where, "strategy", "staged" );
  if ( o.strategy != "staged" && o.strategy != "step_b" && o.strategy != "step_a" )
  {
    throw config_error( where + ".strategy: expected staged, step_a or step_b" );
  }
  o.differences = read_or<std::vector<label_t>>( j, where, "differences", {} );
  o.length = read<label_t>( j, where, "L" );
  o.n = read<std::size_t>( j, where, "n" );
  o.m = read<std::size_t>( j, where, "m" );
  o.budget = read_or<std::size_t>( j, where, "budget", o.budget );
  o.chunk = read_or<std::size_t>( j, where, "chunk", o.chunk );
  o.retries = read_or<std::size_t>( j, where, "retries", o.retries );
  if ( o.n < 2 || o.length < label_t( o.n ) )
  {
    throw config_error( where + ": require 2 <= n <= L" );
  }
  if ( o.m < 1 || o.m >= o.n )
  {
    throw config_error( where + ".m: require 1 <= m < n" );
  }
  if ( o.strategy == "step_b" && o.differences.size() + 1 != o.n )
  {
    throw config_error( where + ".differences: step_b needs exactly n - 1 differences" );
  }
  if ( o.budget < 1 || o.retries < 1 )
  {
    throw config_error( where + ": budget and retries must be positive" );
  }
  return o;
}

} // namespace detail

inline ScenarioConfig parse_config( nlohmann::json const& j, std::string base_dir = "." )
{
  if ( !j.is_object() )
  {
    throw config_error( "config: top level must be an object" );
  }
  detail::allow_keys( j, "config", { "name", "generator", "analysis", "attack", "report", "optimize" } );
  ScenarioConfig c;
  c.name = detail::read_or<std::string>( j, "config", "name", "" );
  if ( j.contains( "generator" ) )
    c.generator = detail::parse_generator( j["generator"] );
  if ( j.contains( "analysis" ) )
    c.analysis = detail::parse_analysis( j["analysis"], c.generator );
  if ( j.contains( "attack" ) )
    c.attack = detail::parse_attack( j["attack"] );
  if ( j.contains( "report" ) )
    c.report = detail::parse_report( j["report"] );
  if ( j.contains( "optimize" ) )
    c.optimize = detail::parse_optimize( j["optimize"] );
  c.canonical = j.dump();
  c.base_dir = std::move( base_dir );
  return c;
}

inline ScenarioConfig parse_config_text( std::string const& text, std::string base_dir = "." )
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse( text );
  }
  catch ( nlohmann::json::parse_error const& e )
  {
    throw config_error( std::string( "config: " ) + e.what() );
  }
  return parse_config( j, std::move( base_dir ) );
}

inline ScenarioConfig load_config( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw config_error( "config: cannot open '" + path + "'" );
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto const dir = std::filesystem::path( path ).parent_path().string();
  return parse_config_text( buffer.str(), dir.empty() ? "." : dir );
}

/* 64-bit FNV-1a, lowercase hex */
inline std::string fnv1a_hex( std::string const& text )
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for ( unsigned char ch : text )
  {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width( 16 );
  os.fill( '0' );
  os << h;
  return os.str();
}

/* builds the filter, drawing a uniform table from the filter seed or the run seed */
inline GeneratorSpec build_generator( GeneratorConfig const& g, std::uint64_t seed )
{
  auto const n = unsigned( g.n() );
  auto const m = unsigned( g.m );
  if ( n > 24 )
  {
    throw config_error( "generator: filter truth tables are limited to n <= 24" );
  }
  FilterSpec filter;
  try
  {
    if ( g.filter.source == FilterSource::kind::hex )
    {
      filter = FilterSpec::from_hex( n, m, g.filter.table );
    }
    else
    {
      std::mt19937_64 rng( g.filter.seed ? *g.filter.seed : seed );
      filter = FilterSpec::random_uniform( n, m, rng );
    }
  }
  catch ( std::invalid_argument const& e )
  {
    throw config_error( std::string( "generator.filter: " ) + e.what() );
  }
  if ( auto const* l = std::get_if<LfsrSpec>( &g.reg ); l && l->feedback.empty() )
  {
    throw config_error( "generator.register.feedback: required to simulate the register" );
  }
  if ( auto const* h = std::get_if<HybridSpec>( &g.reg ); h && h->lfsr.feedback.empty() )
  {
    throw config_error( "generator.register.lfsr.feedback: required to simulate the register" );
  }
  GeneratorSpec gen{ g.reg, g.taps, filter };
  try
  {
    gen.validate();
  }
  catch ( std::invalid_argument const& e )
  {
    throw config_error( std::string( "generator: " ) + e.what() );
  }
  return gen;
}

} // namespace gfsga
