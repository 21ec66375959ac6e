#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "attack.hpp"
#include "complexity.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "keystream_io.hpp"
#include "optimizer.hpp"
#include "report.hpp"
#include "sampling.hpp"
#include "tables.hpp"

/*!
  \file commands.hpp
  \brief The analyze, optimize, attack, report and generate commands

  Commands take a parsed scenario and return a report together with the
  process exit code. Configuration problems surface as config_error, a rank
  condition that is never met as no_overdefined_system.
*/

namespace gfsga
{

namespace exit_code
{
inline constexpr int ok = 0;
inline constexpr int config = 2;
inline constexpr int no_overdefined = 3;
inline constexpr int attack_failure = 4;
} // namespace exit_code

struct RunOptions
{
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

struct CommandResult
{
  Report report;
  int exit = exit_code::ok;
};

namespace detail
{

class Stopwatch
{
public:
  double seconds() const
  {
    return std::chrono::duration<double>( std::chrono::steady_clock::now() - start_ ).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline Report new_report( std::string command, ScenarioConfig const& cfg, RunOptions const& opt )
{
  Report r;
  r.provenance.command = std::move( command );
  r.provenance.scenario = cfg.name;
  r.provenance.config_hash = fnv1a_hex( cfg.canonical );
  r.provenance.seed = opt.seed;
  r.provenance.workers = opt.workers;
  return r;
}

inline GeneratorConfig const& need_generator( ScenarioConfig const& cfg )
{
  if ( !cfg.generator )
  {
    throw config_error( "config: this command needs a 'generator' section" );
  }
  return *cfg.generator;
}

/* profile for the configured mode on a single tap set */
inline RepetitionProfile mode_profile( TapSet const& taps, AnalysisConfig const& a, std::size_t m,
                                       std::vector<std::string>& notes, std::optional<SigmaChoice>& choice )
{
  auto const stop = a.stop.value_or( a.mode == ScheduleMode::custom ? StopRule::whole_schedule() : StopRule::rank() );
  switch ( a.mode )
  {
  case ScheduleMode::constant:
    if ( a.sigma )
      return constant_profile( taps, *a.sigma, stop );
    choice = optimal_constant_sigma( taps, m, a.solver_exponent );
    notes.push_back( "optimal constant sigma " + std::to_string( choice->sigma ) + ", minimum attained at {" +
                     join( choice->optima ) + "}" );
    return constant_profile( taps, choice->sigma, stop );
  case ScheduleMode::greedy:
    return greedy_schedule( taps, stop );
  case ScheduleMode::cyclic:
    if ( taps.size() < 2 )
      throw config_error( "analysis.mode: cyclic sampling needs at least two taps" );
    return cyclic_schedule( taps, stop );
  default:
    return repetition_profile( taps, SamplingSchedule::custom( a.schedule ), stop );
  }
}

inline void window_analysis( Report& report, GeneratorConfig const& g, AnalysisConfig const& a )
{
  if ( g.kind == RegisterKind::nfsr )
  {
    auto const wp = window_profile( g.taps[0] );
    try
    {
      report.windows.push_back( make_record( "window", internal_state_recovery_cost( wp, g.m ), wp.q ) );
    }
    catch ( std::invalid_argument const& e )
    {
      report.notes.push_back( std::string( "window attack not applicable: " ) + e.what() );
    }
    return;
  }
  HybridTaps const taps{ g.taps[0], g.taps[1] };
  std::vector<HybridModel> models;
  if ( a.window_model != "merged" )
    models.push_back( HybridModel::per_register );
  if ( a.window_model != "per-register" )
    models.push_back( HybridModel::merged );
  for ( auto model : models )
  {
    auto const wp = hybrid_window_profile( taps, model );
    try
    {
      report.windows.push_back(
          make_record( "window " + to_string( model ), internal_state_recovery_cost( wp, g.m ), wp.q ) );
    }
    catch ( std::invalid_argument const& e )
    {
      report.notes.push_back( "window " + to_string( model ) + " not applicable: " + e.what() );
    }
  }
}

/* schedule driving the LFSR recovery, with the clocks it spans */
inline std::pair<SamplingSchedule, label_t> attack_schedule( TapSet const& taps, AnalysisConfig const& a,
                                                              std::size_t m )
{
  SamplingSchedule schedule;
  switch ( a.mode )
  {
  case ScheduleMode::constant:
    schedule = SamplingSchedule::constant( a.sigma ? *a.sigma : optimal_constant_sigma( taps, m, a.solver_exponent ).sigma );
    break;
  case ScheduleMode::greedy:
    schedule = { greedy_schedule( taps ).steps, ScheduleMode::greedy };
    break;
  case ScheduleMode::cyclic:
    schedule = { consecutive_differences( taps ), ScheduleMode::cyclic };
    break;
  default:
    schedule = SamplingSchedule::custom( a.schedule );
  }
  auto const prof = repetition_profile( taps, schedule, StopRule::rank() );
  label_t span = 0;
  for ( auto s : prof.steps )
    span += s;
  return { schedule, span };
}

inline std::string resolve( ScenarioConfig const& cfg, std::string const& path )
{
  auto const p = std::filesystem::path( path );
  return p.is_absolute() ? path : ( std::filesystem::path( cfg.base_dir ) / p ).string();
}

} // namespace detail

inline CommandResult cmd_analyze( ScenarioConfig const& cfg, RunOptions const& opt = {} )
{
  detail::Stopwatch clock;
  auto report = detail::new_report( "analyze", cfg, opt );
  auto const& g = detail::need_generator( cfg );
  auto const& a = cfg.analysis;
  auto const m = g.m;

  if ( g.kind == RegisterKind::hybrid )
  {
    report.notes.push_back( "hybrid generator: sampling-window analysis only" );
    detail::window_analysis( report, g, a );
    report.timing["analyze"] = clock.seconds();
    return { std::move( report ), exit_code::ok };
  }

  auto const& taps = g.taps[0];
  auto const n = taps.size();
  auto const L = taps.register_length();
  std::optional<SigmaChoice> choice;
  auto const prof = detail::mode_profile( taps, a, m, report.notes, choice );
  report.profiles.push_back( make_record( to_string( a.mode ), prof ) );
  if ( prof.overdefined() )
  {
    auto const est = a.mode == ScheduleMode::constant ? gfsga_constant_cost( prof, n, m, L, a.solver_exponent )
                                                       : gfsga_variable_cost( prof, n, m, L, a.solver_exponent );
    report.estimates.push_back( make_record( to_string( a.mode ), est ) );
    if ( g.kind == RegisterKind::nfsr && a.nfsr_cost )
    {
      NfsrCostParams params{ std::size_t( ( *a.nfsr_cost )[0] ), std::size_t( ( *a.nfsr_cost )[1] ), ( *a.nfsr_cost )[2] };
      try
      {
        report.estimates.push_back(
            make_record( to_string( a.mode ) + " nfsr", nfsr_gfsga_cost( prof, n, m, L, params ) ) );
      }
      catch ( std::invalid_argument const& e )
      {
        throw config_error( std::string( "analysis.nfsr_cost: " ) + e.what() );
      }
    }
  }
  else
  {
    report.notes.push_back( "the sampled equations (" + std::to_string( prof.equations() ) +
                            ") do not exceed L = " + std::to_string( L ) + "; no cost estimate" );
  }

  if ( g.kind == RegisterKind::nfsr )
    detail::window_analysis( report, g, a );
  if ( a.scorecard )
  {
    if ( m >= n )
      throw config_error( "analysis.scorecard: needs m < n" );
    report.scorecards.push_back( make_record( scorecard( taps, m, a.solver_exponent ) ) );
  }
  if ( a.calibrate_m )
  {
    for ( std::size_t mm = 1; mm <= 4 && mm < n; ++mm )
    {
      auto const costs = mode_costs( taps, mm, a.solver_exponent );
      report.estimates.push_back( make_record( "constant m=" + std::to_string( mm ), costs.constant.estimate ) );
      if ( costs.greedy )
        report.estimates.push_back( make_record( "greedy m=" + std::to_string( mm ), *costs.greedy ) );
      if ( costs.cyclic )
        report.estimates.push_back( make_record( "cyclic m=" + std::to_string( mm ), *costs.cyclic ) );
    }
  }
  report.timing["analyze"] = clock.seconds();
  return { std::move( report ), exit_code::ok };
}

inline CommandResult cmd_optimize( ScenarioConfig const& cfg, RunOptions const& opt = {} )
{
  detail::Stopwatch clock;
  auto report = detail::new_report( "optimize", cfg, opt );
  if ( !cfg.optimize )
  {
    throw config_error( "config: optimize needs an 'optimize' section" );
  }
  auto const& o = *cfg.optimize;
  auto const solver = cfg.analysis.solver_exponent;
  SearchRecord search;
  search.strategy = o.strategy;
  try
  {
    if ( o.n == 2 )
    {
      /* a single difference has one placement */
      search.differences = { o.length - 1 };
      report.scorecards.push_back(
          make_record( scorecard( TapSet::from_differences( search.differences, o.length ), o.m, solver ) ) );
    }
    else if ( o.strategy == "step_a" )
    {
      for ( auto const& c : step_a_candidates( o.length, o.n, o.budget, opt.seed ) )
        search.candidates.push_back( c.differences );
    }
    else if ( o.strategy == "step_b" )
    {
      auto const choice = step_b_best_ordering( o.differences, o.n, o.m, o.length, opt.workers, solver );
      search.differences = choice.ordering;
      search.permutations_evaluated = choice.permutations_evaluated;
      report.scorecards.push_back( make_record( choice.card ) );
    }
    else
    {
      StagedParams params;
      params.chunk = o.chunk;
      params.budget = o.budget;
      params.retries = o.retries;
      params.seed = opt.seed;
      params.workers = opt.workers;
      params.solver_exponent = solver;
      auto const result = staged_search( o.length, o.n, o.m, params );
      search.differences = result.differences;
      for ( auto const& t : result.trace )
      {
        search.trace.push_back( make_record( t ) );
        search.permutations_evaluated += t.permutations_evaluated;
      }
      report.scorecards.push_back( make_record( result.card ) );
    }
  }
  catch ( search_exhausted const& e )
  {
    search.differences = e.best_so_far;
    report.search = search;
    report.notes.push_back( e.what() );
    report.timing["optimize"] = clock.seconds();
    return { std::move( report ), exit_code::no_overdefined };
  }
  catch ( no_overdefined_system const& )
  {
    throw;
  }
  catch ( std::invalid_argument const& e )
  {
    throw config_error( std::string( "optimize: " ) + e.what() );
  }
  report.search = search;
  report.timing["optimize"] = clock.seconds();
  return { std::move( report ), exit_code::ok };
}

inline CommandResult cmd_report( ScenarioConfig const& cfg, std::string fixture, RunOptions const& opt = {} )
{
  detail::Stopwatch clock;
  auto report = detail::new_report( "report", cfg, opt );
  if ( fixture.empty() )
    fixture = cfg.report.fixture;
  if ( fixture.empty() )
  {
    throw config_error( "report: no fixture given" );
  }
  run_fixture( report, fixture, cfg.analysis.solver_exponent );
  report.timing["report"] = clock.seconds();
  return { std::move( report ), exit_code::ok };
}

/* initial state for generate: the configured one or a seeded draw */
inline RegisterState planted_state( GeneratorConfig const& g, std::uint64_t seed )
{
  auto const L = std::size_t( g.length() );
  if ( g.state )
  {
    try
    {
      return RegisterState::from_hex( *g.state, L );
    }
    catch ( std::invalid_argument const& e )
    {
      throw config_error( std::string( "generator.state: " ) + e.what() );
    }
  }
  std::mt19937_64 rng( seed ^ 0x9e3779b97f4a7c15ull );
  RegisterState s( L );
  for ( std::size_t i = 0; i < L; ++i )
    s.assign( i, ( rng() >> 63 ) != 0 );
  return s;
}

/* writes a keystream from the planted state; the report carries that state */
inline CommandResult cmd_generate( ScenarioConfig const& cfg, std::string const& out_path, RunOptions const& opt = {} )
{
  detail::Stopwatch clock;
  auto report = detail::new_report( "generate", cfg, opt );
  auto const& g = detail::need_generator( cfg );
  auto const gen = build_generator( g, opt.seed );
  auto const L = std::size_t( g.length() );
  std::size_t count = cfg.attack.blocks ? cfg.attack.blocks : 4 * L;
  if ( !cfg.attack.blocks && g.kind == RegisterKind::lfsr )
  {
    auto const span = detail::attack_schedule( g.taps[0], cfg.analysis, g.m ).second;
    count = std::max( count, std::size_t( span ) + 1 );
  }
  auto const state = planted_state( g, opt.seed );
  auto const path = out_path.empty() ? detail::resolve( cfg, cfg.attack.keystream ) : out_path;
  if ( path.empty() )
  {
    throw config_error( "generate: no output path (use --out or attack.keystream)" );
  }
  KeystreamFile file{ std::uint32_t( g.n() ), std::uint32_t( g.m ), std::uint32_t( L ), keystream( gen, state, count ) };
  write_keystream( path, file );
  report.notes.push_back( "planted state " + state.to_hex() );
  report.notes.push_back( "filter table " + gen.filter.to_hex() );
  report.notes.push_back( "wrote " + std::to_string( count ) + " blocks to " + path );
  report.timing["generate"] = clock.seconds();
  return { std::move( report ), exit_code::ok };
}

inline CommandResult cmd_attack( ScenarioConfig const& cfg, RunOptions const& opt = {} )
{
  detail::Stopwatch clock;
  auto report = detail::new_report( "attack", cfg, opt );
  auto const& g = detail::need_generator( cfg );
  if ( cfg.attack.keystream.empty() )
  {
    throw config_error( "attack.keystream: missing" );
  }
  auto const gen = build_generator( g, opt.seed );
  auto const L = std::size_t( g.length() );

  KeystreamFile file;
  try
  {
    file = read_keystream( detail::resolve( cfg, cfg.attack.keystream ) );
    if ( file.n != g.n() || file.m != g.m || file.length != L )
    {
      throw keystream_format_error( "keystream header (n, m, L) = (" + std::to_string( file.n ) + ", " +
                                    std::to_string( file.m ) + ", " + std::to_string( file.length ) +
                                    ") does not match the generator (" + std::to_string( g.n() ) + ", " +
                                    std::to_string( g.m ) + ", " + std::to_string( L ) + ")" );
    }
  }
  catch ( keystream_format_error const& e )
  {
    AttackRecord failed;
    failed.method = "keystream";
    failed.failure = e.what();
    report.attacks.push_back( failed );
    report.timing["attack"] = clock.seconds();
    return { std::move( report ), exit_code::attack_failure };
  }

  RecoverOptions options;
  options.early_solve = cfg.attack.early_solve;
  options.workers = std::max( opt.workers, cfg.attack.workers );
  AttackRecord record;
  try
  {
    if ( g.kind == RegisterKind::lfsr )
    {
      auto const schedule = detail::attack_schedule( g.taps[0], cfg.analysis, g.m ).first;
      auto const result = gfsga_recover( gen, file.blocks, schedule, options );
      record = make_record( "gfsga " + to_string( cfg.analysis.mode ), result );
    }
    else
    {
      auto const [info, result] = nfsr_window_recover( gen, file.blocks, cfg.attack.window_model, options );
      record = make_record( "window " + to_string( cfg.attack.window_model ), result );
      record.window_length = info.window_length;
      record.recovered_bits = info.recovered_bits;
      record.remaining_guess = info.remaining_guess;
      record.window_candidates = info.window_candidates;
      record.completions_tested = info.completions_tested;
    }
  }
  catch ( no_overdefined_system const& )
  {
    throw;
  }
  catch ( std::invalid_argument const& e )
  {
    throw config_error( std::string( "attack: " ) + e.what() );
  }
  if ( record.success )
  {
    auto const planted = planted_state( g, opt.seed ).to_hex();
    report.notes.push_back( *record.recovered_state == planted
                                ? "recovered state equals the planted state for this seed"
                                : "recovered state differs from the planted state for this seed" );
  }
  report.attacks.push_back( record );
  report.timing["attack"] = clock.seconds();
  return { std::move( report ), record.success ? exit_code::ok : exit_code::attack_failure };
}

} // namespace gfsga
