#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include <gfsga/gfsga.hpp>

namespace fs = std::filesystem;
using namespace gfsga;

namespace
{

class cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    auto const* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ( "gfsga_cli_" + std::to_string( ::getpid() ) + "_" + info->name() );
    fs::remove_all( dir_ );
    fs::create_directories( dir_ );
  }

  void TearDown() override { fs::remove_all( dir_ ); }

  /* runs the CLI, keeps stdout in out_ and returns the exit code */
  int run( std::string const& args )
  {
    auto const out = dir_ / "stdout.txt";
    auto const cmd = std::string( "\"" ) + GFSGA_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                     ( dir_ / "stderr.txt" ).string() + "\"";
    auto const status = std::system( cmd.c_str() );
    out_ = slurp( out );
    return WIFEXITED( status ) ? WEXITSTATUS( status ) : -1;
  }

  static std::string slurp( fs::path const& p )
  {
    std::ifstream is( p, std::ios::binary );
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
  }

  static std::string config( std::string const& name ) { return std::string( GFSGA_CONFIG_DIR ) + "/" + name; }

  /* copies a shipped config next to its keystream so relative paths resolve here */
  std::string local_config( std::string const& name )
  {
    auto const target = dir_ / name;
    fs::copy_file( config( name ), target );
    return target.string();
  }

  std::string write( std::string const& name, std::string const& text )
  {
    auto const p = dir_ / name;
    std::ofstream( p ) << text;
    return p.string();
  }

  fs::path dir_;
  std::string out_;
};

} // namespace

TEST_F( cli, analyze_prints_a_structured_report )
{
  ASSERT_EQ( run( "--config " + config( "example1_greedy.json" ) + " --format structured analyze" ), 0 );
  auto const r = report_from_structured( out_ );
  EXPECT_EQ( r.provenance.command, "analyze" );
  ASSERT_EQ( r.estimates.size(), 1u );
  EXPECT_NEAR( r.estimates[0].log2_total, gfsga_variable_cost( greedy_schedule( reference::example1_taps() ), 7, 2, 80 ).log2_total,
               1e-9 );
  ASSERT_EQ( r.scorecards.size(), 1u );
}

TEST_F( cli, table_format_is_the_default )
{
  ASSERT_EQ( run( "--config " + config( "example1_cyclic.json" ) + " analyze" ), 0 );
  EXPECT_NE( out_.find( "59.97" ), std::string::npos );
  EXPECT_THROW( report_from_structured( out_ ), std::exception );
}

TEST_F( cli, out_flag_writes_the_report )
{
  auto const path = ( dir_ / "report.json" ).string();
  ASSERT_EQ( run( "--config " + config( "worked_example.json" ) + " --format structured --out " + path + " analyze" ), 0 );
  EXPECT_TRUE( out_.empty() );
  auto const r = report_from_structured( slurp( path ) );
  ASSERT_EQ( r.profiles.size(), 1u );
  EXPECT_EQ( r.profiles[0].steps, ( std::vector<label_t>{ 5, 2 } ) );
}

TEST_F( cli, runs_are_deterministic_apart_from_timing )
{
  auto const args = "--config " + config( "optimize_staged.json" ) + " --seed 3 --format structured optimize";
  ASSERT_EQ( run( args ), 0 );
  auto a = report_from_structured( out_ );
  ASSERT_EQ( run( args ), 0 );
  auto b = report_from_structured( out_ );
  a.timing.clear();
  b.timing.clear();
  EXPECT_EQ( a, b );
  ASSERT_TRUE( a.search );
  EXPECT_FALSE( a.search->differences.empty() );
}

TEST_F( cli, report_runs_fixtures )
{
  ASSERT_EQ( run( "--format structured report table3" ), 0 );
  EXPECT_FALSE( report_from_structured( out_ ).comparisons.empty() );
  EXPECT_EQ( run( "--config " + config( "report_all.json" ) + " report" ), 0 );
  EXPECT_EQ( run( "report table9" ), 2 );
  EXPECT_EQ( run( "report" ), 2 );
}

TEST_F( cli, configuration_errors_exit_with_two )
{
  EXPECT_EQ( run( "--config " + ( dir_ / "missing.json" ).string() + " analyze" ), 2 );
  EXPECT_EQ( run( "--config " + write( "bad.json", "{ \"colour\": 1 }" ) + " analyze" ), 2 );
  EXPECT_EQ( run( "--config " + write( "broken.json", "{" ) + " analyze" ), 2 );
  EXPECT_EQ( run( "--config " + config( "example1_greedy.json" ) + " --format xml analyze" ), 2 );
  EXPECT_EQ( run( "analyze" ), 2 );
  EXPECT_EQ( run( "--config " + config( "example1_greedy.json" ) + " optimize" ), 2 );
  auto const step_b = write( "b.json", "{ \"optimize\": { \"strategy\": \"step_b\", \"differences\": [1,1,1,1,1,1,1,1,1,1,1], "
                                       "\"L\": 80, \"n\": 12, \"m\": 2 } }" );
  EXPECT_EQ( run( "--config " + step_b + " optimize" ), 2 );
}

TEST_F( cli, exhausted_schedule_exits_with_three )
{
  auto const cfg = write( "short.json", "{ \"generator\": { \"register\": { \"kind\": \"lfsr\", \"length\": 20 }, "
                                        "\"taps\": [3, 5, 10, 14, 16], \"m\": 2 }, "
                                        "\"analysis\": { \"mode\": \"custom\", \"schedule\": [5, 2], \"stop\": \"rank\" } }" );
  EXPECT_EQ( run( "--config " + cfg + " analyze" ), 3 );
}

TEST_F( cli, lfsr_generate_then_attack )
{
  auto const cfg = local_config( "toy_lfsr_attack.json" );
  ASSERT_EQ( run( "--config " + cfg + " --seed 7 generate" ), 0 );
  ASSERT_TRUE( fs::exists( dir_ / "toy_lfsr.ks" ) );
  auto const ks = read_keystream( ( dir_ / "toy_lfsr.ks" ).string() );
  EXPECT_EQ( ks.n, 5u );
  EXPECT_EQ( ks.m, 2u );
  EXPECT_EQ( ks.length, 20u );
  ASSERT_EQ( run( "--config " + cfg + " --seed 7 --format structured attack" ), 0 );
  auto const r = report_from_structured( out_ );
  ASSERT_EQ( r.attacks.size(), 1u );
  EXPECT_TRUE( r.attacks[0].success );
  auto const planted = planted_state( *load_config( cfg ).generator, 7 ).to_hex();
  EXPECT_EQ( r.attacks[0].recovered_state, planted );
}

TEST_F( cli, nfsr_generate_then_attack )
{
  auto const cfg = local_config( "toy_nfsr_attack.json" );
  ASSERT_EQ( run( "--config " + cfg + " --seed 11 generate" ), 0 );
  ASSERT_EQ( run( "--config " + cfg + " --seed 11 --workers 2 --format structured attack" ), 0 );
  auto const r = report_from_structured( out_ );
  ASSERT_EQ( r.attacks.size(), 1u );
  EXPECT_TRUE( r.attacks[0].success );
  EXPECT_EQ( r.attacks[0].recovered_state, planted_state( *load_config( cfg ).generator, 11 ).to_hex() );
  ASSERT_TRUE( r.attacks[0].remaining_guess );
  EXPECT_LE( *r.attacks[0].remaining_guess, 24u );
}

TEST_F( cli, damaged_keystreams_exit_with_four )
{
  auto const cfg = local_config( "toy_lfsr_attack.json" );
  EXPECT_EQ( run( "--config " + cfg + " attack" ), 4 );
  ASSERT_EQ( run( "--config " + cfg + " --seed 7 generate" ), 0 );
  auto const path = dir_ / "toy_lfsr.ks";
  fs::resize_file( path, fs::file_size( path ) - 1 );
  EXPECT_EQ( run( "--config " + cfg + " --seed 7 attack" ), 4 );
  fs::resize_file( path, 9 );
  EXPECT_EQ( run( "--config " + cfg + " --seed 7 attack" ), 4 );
  /* a well formed file for another generator */
  write_keystream( path.string(), { 6, 2, 20, { 1, 2, 3 } } );
  EXPECT_EQ( run( "--config " + cfg + " --seed 7 attack" ), 4 );
}

TEST_F( cli, wrong_keystream_fails_the_attack )
{
  auto const cfg = local_config( "toy_lfsr_attack.json" );
  ASSERT_EQ( run( "--config " + cfg + " --seed 7 generate" ), 0 );
  /* flipping a bit in every block almost never leaves a consistent state */
  auto const ks = read_keystream( ( dir_ / "toy_lfsr.ks" ).string() );
  auto flipped = ks;
  for ( auto& b : flipped.blocks )
    b ^= 1u;
  write_keystream( ( dir_ / "toy_lfsr.ks" ).string(), flipped );
  auto const code = run( "--config " + cfg + " --seed 7 --format structured attack" );
  if ( code == 0 )
  {
    /* any state the attack returns must still explain the altered stream */
    auto const r = report_from_structured( out_ );
    ASSERT_TRUE( r.attacks[0].recovered_state );
    auto const gen = build_generator( *load_config( cfg ).generator, 7 );
    auto const s = RegisterState::from_hex( *r.attacks[0].recovered_state, 20 );
    EXPECT_EQ( keystream( gen, s, flipped.blocks.size() ), flipped.blocks );
  }
  else
  {
    EXPECT_EQ( code, 4 );
  }
}
