#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <gfsga/gfsga.hpp>

namespace
{

struct GlobalFlags
{
  std::string config;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string format;
  std::string out;
};

gfsga::ScenarioConfig load( GlobalFlags const& flags, bool required )
{
  if ( flags.config.empty() )
  {
    if ( required )
      throw gfsga::config_error( "--config is required for this command" );
    return gfsga::parse_config_text( "{}" );
  }
  return gfsga::load_config( flags.config );
}

int emit( gfsga::CommandResult const& result, gfsga::ScenarioConfig const& cfg, GlobalFlags const& flags,
          bool out_is_report = true )
{
  auto const format = flags.format.empty() ? cfg.report.format : flags.format;
  auto const text = format == "structured" ? gfsga::to_structured( result.report ) : gfsga::to_table( result.report );
  if ( out_is_report && !flags.out.empty() )
  {
    std::ofstream os( flags.out );
    if ( !os )
    {
      std::cerr << "error: cannot write '" << flags.out << "'\n";
      return gfsga::exit_code::config;
    }
    os << text;
  }
  else
  {
    std::cout << text;
  }
  return result.exit;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Tap placement analysis and guess-and-determine attacks on filter generators" };
  app.require_subcommand( 1 );
  GlobalFlags flags;
  app.add_option( "--config", flags.config, "Scenario file (JSON)" );
  app.add_option( "--seed", flags.seed, "Seed for random filters, planted states and the optimizer" );
  app.add_option( "--workers", flags.workers, "Worker threads" )->check( CLI::PositiveNumber );
  app.add_option( "--format", flags.format, "Output format" )->check( CLI::IsMember( { "table", "structured" } ) );
  app.add_option( "--out", flags.out, "Write the report (or, for generate, the keystream) to this path" );

  auto* analyze = app.add_subcommand( "analyze", "Repetition profile and cost estimate for the configured mode" );
  auto* optimize = app.add_subcommand( "optimize", "Search for tap placements resisting the attack" );
  auto* attack = app.add_subcommand( "attack", "Recover the initial state from a keystream file" );
  auto* report = app.add_subcommand( "report", "Recompute a published table and compare" );
  std::string fixture;
  report->add_option( "fixture", fixture, "Fixture id, or 'all'" );
  auto* generate = app.add_subcommand( "generate", "Write a keystream file from a planted state" );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::CallForHelp const& e )
  {
    return app.exit( e );
  }
  catch ( CLI::ParseError const& e )
  {
    app.exit( e );
    return gfsga::exit_code::config;
  }

  gfsga::RunOptions const options{ flags.seed, flags.workers };
  try
  {
    if ( *analyze )
    {
      auto const cfg = load( flags, true );
      return emit( gfsga::cmd_analyze( cfg, options ), cfg, flags );
    }
    if ( *optimize )
    {
      auto const cfg = load( flags, true );
      return emit( gfsga::cmd_optimize( cfg, options ), cfg, flags );
    }
    if ( *attack )
    {
      auto const cfg = load( flags, true );
      return emit( gfsga::cmd_attack( cfg, options ), cfg, flags );
    }
    if ( *report )
    {
      auto const cfg = load( flags, false );
      return emit( gfsga::cmd_report( cfg, fixture, options ), cfg, flags );
    }
    if ( *generate )
    {
      auto const cfg = load( flags, true );
      return emit( gfsga::cmd_generate( cfg, flags.out, options ), cfg, flags, false );
    }
  }
  catch ( gfsga::config_error const& e )
  {
    std::cerr << "config error: " << e.what() << "\n";
    return gfsga::exit_code::config;
  }
  catch ( gfsga::feasibility_error const& e )
  {
    std::cerr << "config error: " << e.what() << "\n";
    return gfsga::exit_code::config;
  }
  catch ( gfsga::no_overdefined_system const& e )
  {
    std::cerr << "no overdefined system: " << e.what() << "\n";
    return gfsga::exit_code::no_overdefined;
  }
  catch ( gfsga::keystream_format_error const& e )
  {
    std::cerr << "keystream error: " << e.what() << "\n";
    return gfsga::exit_code::attack_failure;
  }
  catch ( std::invalid_argument const& e )
  {
    std::cerr << "config error: " << e.what() << "\n";
    return gfsga::exit_code::config;
  }
  return gfsga::exit_code::ok;
}
