#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "../oracles.hpp"

using namespace gfsga;

namespace
{

struct Outcome
{
  bool pass = true;
  std::vector<std::string> lines;

  void check( bool ok, std::string const& what )
  {
    pass = pass && ok;
    lines.push_back( std::string( ok ? "ok    " : "MISS  " ) + what );
  }

  void info( std::string const& what ) { lines.push_back( "      " + what ); }
};

std::string fmt( double v, int digits = 2 )
{
  char buf[64];
  std::snprintf( buf, sizeof( buf ), "%.*f", digits, v );
  return buf;
}

template<class T>
std::string list( std::vector<T> const& v )
{
  std::string s = "(";
  for ( std::size_t i = 0; i < v.size(); ++i )
    s += ( i ? "," : "" ) + std::to_string( v[i] );
  return s + ")";
}

bool near( double a, double b, double tol )
{
  return std::abs( a - b ) <= tol + 1e-9;
}

/* printed costs carry two decimals, so a tolerance of t covers rounding plus t */
bool near_printed( double computed, double printed, double tol )
{
  return std::abs( computed - printed ) <= tol + 0.005 + 1e-9;
}

constexpr double ms = 1e-3;

Outcome worked_example()
{
  Outcome o;
  reference::WorkedExample const ref;
  auto const p = repetition_profile( ref.taps, SamplingSchedule::custom( ref.steps ), StopRule::whole_schedule() );
  o.check( p.q == ref.q, "q = " + list( p.q ) + ", expected " + list( ref.q ) );
  o.check( p.repeated_sets.size() == 2 && p.repeated_sets[0] == ref.first_repeat,
           "first repeated set " + list( p.repeated_sets.at( 0 ) ) );
  o.check( p.repeated_sets.size() == 2 && p.repeated_sets[1].size() == 2,
           "third sample has " + std::to_string( p.repeated_sets.at( 1 ).size() ) + " known bits " +
               list( p.repeated_sets.at( 1 ) ) );
  auto const direct = oracle::direct_profile( ref.taps.positions(), ref.steps );
  o.check( direct.q == p.q, "direct set oracle agrees" );
  return o;
}

Outcome greedy_example()
{
  Outcome o;
  auto const taps = reference::example1_taps();
  auto const ref = reference::greedy_table();
  auto const p = greedy_schedule( taps );
  std::vector<label_t> const prefix{ 5, 13, 7, 26, 11, 17 };
  o.check( std::equal( prefix.begin(), prefix.end(), p.steps.begin() ), "schedule prefix " + list( prefix ) );
  /* the table lists samples up to its own c*, so compare it at that length */
  auto const table_run = greedy_schedule( taps, StopRule::samples( ref.samples ) );
  o.check( table_run.steps == ref.steps && table_run.q == ref.q && table_run.repeated_sets == ref.repeated_sets,
           "all " + std::to_string( ref.q.size() ) + " table rows (steps, q, repeated sets)" );
  auto const cost = gfsga_variable_cost( p, 7, 2, 80 ).log2_total;
  o.check( p.samples == ref.samples, "c* = " + std::to_string( p.samples ) + ", expected " + std::to_string( ref.samples ) );
  o.check( p.total == ref.total, "R* = " + std::to_string( p.total ) + ", expected " + std::to_string( ref.total ) );
  o.check( near_printed( cost, ref.cost, 0.01 ), "cost 2^" + fmt( cost ) + ", expected 2^" + fmt( ref.cost ) );
  o.info( "rank stop: 7*" + std::to_string( p.samples ) + " - " + std::to_string( p.total ) + " = " +
          std::to_string( p.equations() ) + " > 80 already at c = " + std::to_string( p.samples ) );
  o.info( "one sample further: c = " + std::to_string( table_run.samples ) + ", R = " + std::to_string( table_run.total ) +
          ", cost 2^" + fmt( gfsga_variable_cost( table_run, 7, 2, 80 ).log2_total ) );
  return o;
}

Outcome cyclic_example()
{
  Outcome o;
  auto const ref = reference::cyclic_table();
  auto const p = cyclic_schedule( reference::example1_taps() );
  auto const cost = gfsga_variable_cost( p, 7, 2, 80 ).log2_total;
  o.check( p.steps == ref.steps && p.q == ref.q && p.repeated_sets == ref.repeated_sets,
           "all " + std::to_string( ref.q.size() ) + " table rows (steps, q, repeated sets)" );
  o.check( p.total == ref.total, "R* = " + std::to_string( p.total ) );
  o.check( p.samples == ref.samples, "c* = " + std::to_string( p.samples ) );
  o.check( near_printed( cost, ref.cost, 0.01 ), "cost 2^" + fmt( cost ) );
  return o;
}

Outcome constant_example()
{
  Outcome o;
  reference::ConstantReference const ref;
  auto const taps = reference::example1_taps();
  auto const choice = optimal_constant_sigma( taps, 2 );
  auto const [best, args] = oracle::best_constant( taps.positions(), 80, 2 );
  o.check( near( choice.estimate.log2_total, best, 1e-9 ) && choice.optima == args, "optimum agrees with the oracle sweep" );
  o.check( near_printed( choice.estimate.log2_total, 69.97, 0.01 ), "minimum 2^" + fmt( choice.estimate.log2_total ) );
  bool const has_13_37 = std::count( args.begin(), args.end(), 13 ) && std::count( args.begin(), args.end(), 37 );
  o.check( has_13_37, "minimum attained at " + list( args ) );
  auto const s1 = constant_profile( taps, 1 );
  auto const s1_cost = gfsga_constant_cost( s1, 7, 2, 80 ).log2_total;
  o.check( near_printed( s1_cost, 70.97, 0.01 ), "sigma = 1 costs 2^" + fmt( s1_cost ) + " (c = " +
                                                     std::to_string( s1.samples ) + ", R = " + std::to_string( s1.total ) +
                                                     "), expected 2^70.97" );
  auto const s1_16 = constant_profile( taps, 1, StopRule::samples( ref.samples ) );
  o.info( "sigma = 1 at c = 16: R = " + std::to_string( s1_16.total ) + ", cost 2^" +
          fmt( gfsga_constant_cost( s1_16, 7, 2, 80 ).log2_total ) + ", r-list " + list( s1_16.q ) );
  auto const r_sum = std::accumulate( ref.r.begin(), ref.r.end(), std::size_t{ 0 } );
  o.check( r_sum != ref.repeats && s1_16.q == ref.r && s1_16.total == r_sum,
           "printed (c = 16, R = 24) flagged: its r-list sums to " + std::to_string( r_sum ) );
  return o;
}

Outcome table_rows()
{
  Outcome o;
  auto const alg = reference::algorithmic_table()[0];
  auto const fpds = reference::fpds_table()[0];
  auto const a = scorecard( alg.taps(), alg.m );
  auto const f = scorecard( fpds.taps(), fpds.m );
  auto cell = [&]( char const* row, char const* col, std::optional<ComplexityEstimate> const& e, double published ) {
    auto const v = e ? e->log2_total : std::nan( "" );
    o.check( e && near_printed( v, published, 0.05 ), std::string( row ) + " " + col + ": 2^" + fmt( v ) +
                                                          " vs 2^" + fmt( published ) );
  };
  cell( "algorithmic", "constant", a.constant, alg.constant );
  cell( "algorithmic", "greedy", a.greedy, alg.greedy );
  cell( "algorithmic", "cyclic", a.cyclic, alg.cyclic );
  cell( "fpds", "constant", f.constant, fpds.constant );
  cell( "fpds", "greedy", f.greedy, fpds.greedy );
  cell( "fpds", "cyclic", f.cyclic, fpds.cyclic );
  o.check( a.constant.log2_total > f.constant.log2_total, "algorithmic constant cost dominates the FPDS one" );
  return o;
}

Outcome nfsr_window()
{
  Outcome o;
  reference::WindowExample const ref;
  auto const wp = window_profile( ref.taps );
  o.check( wp.p == ref.p && wp.q == ref.q, "window of " + std::to_string( wp.p - 1 ) + " samples, q = " + list( wp.q ) );
  auto const w = internal_state_recovery_cost( wp, ref.m );
  o.check( w.recovered == ref.recovered, "R_p = " + std::to_string( w.recovered ) );
  o.check( w.estimate.log2_total == double( ref.exponent ), "cost 2^" + fmt( w.estimate.log2_total, 0 ) );
  o.check( std::log2( w.memory_bits ) < ref.memory_bound_log2, "memory 2^" + fmt( std::log2( w.memory_bits ) ) + " bits" );
  o.check( w.data_bits == ref.data_bits, "data " + std::to_string( w.data_bits ) + " bits" );
  auto const direct = oracle::direct_profile( ref.taps.positions(), std::vector<label_t>( wp.p - 2, 1 ) );
  o.check( direct.q == wp.q, "direct set oracle agrees" );
  return o;
}

Outcome hybrid_window()
{
  Outcome o;
  reference::HybridExample const ref;
  auto const w = internal_state_recovery_cost( ref.q, 17, ref.m, 256, ref.p );
  auto const window = w.estimate.guessing_log2() - w.estimate.first_sample_exponent;
  o.check( w.estimate.first_sample_exponent == 16.0 && window == 196.0 && w.estimate.solver_log2 == 12.0 &&
               w.estimate.log2_total == 224.0,
           "fixture q: " + fmt( w.estimate.first_sample_exponent, 0 ) + " + " + fmt( window, 0 ) + " + " +
               fmt( w.estimate.solver_log2, 0 ) + " = " + fmt( w.estimate.log2_total, 0 ) );
  std::size_t matching_models = 0;
  for ( auto model : { HybridModel::per_register, HybridModel::merged } )
  {
    auto const wp = hybrid_window_profile( { ref.lfsr_taps, ref.nfsr_taps }, model );
    std::vector<std::string> diffs;
    for ( std::size_t j = 0; j < ref.q.size(); ++j )
    {
      auto const c = j < wp.q.size() ? std::to_string( wp.q[j] ) : std::string( "-" );
      if ( c != std::to_string( ref.q[j] ) )
        diffs.push_back( "row " + std::to_string( j + 1 ) + ": " + c + " vs " + std::to_string( ref.q[j] ) );
    }
    matching_models += diffs.empty() && wp.q.size() == ref.q.size();
    std::string detail;
    for ( std::size_t i = 0; i < diffs.size() && i < 6; ++i )
      detail += ( i ? "; " : "" ) + diffs[i];
    o.info( to_string( model ) + " model executed: " + std::to_string( diffs.size() ) + " deviating rows" +
            ( detail.empty() ? "" : " (" + detail + ( diffs.size() > 6 ? "; ..." : "" ) + ")" ) );
  }
  o.check( matching_models == 0, "neither counting model matches the fixture row for row (" +
                                     std::to_string( matching_models ) + " model(s) match)" );
  return o;
}

Outcome annihilator()
{
  Outcome o;
  reference::AnnihilatorExample const ref;
  auto const e = restricted_annihilator_cost( ref.sizes, ref.counts, label_t( ref.length ), ref.omega );
  o.check( near( e.log2_total, ref.cost, 0.5 ), "2^" + fmt( e.log2_total ) + " alongside published 2^" + fmt( ref.cost ) );
  return o;
}

std::vector<label_t> differences_of( std::vector<label_t> const& taps )
{
  std::vector<label_t> d;
  for ( std::size_t i = 1; i < taps.size(); ++i )
    d.push_back( taps[i] - taps[i - 1] );
  return d;
}

Outcome property_suites()
{
  Outcome o;
  std::mt19937_64 rng( 2024 );
  auto instance = [&]( label_t& L ) {
    L = 10 + label_t( rng() % 120 );
    auto const n = 2 + rng() % std::min<std::size_t>( 14, std::size_t( L ) - 1 );
    return oracle::random_taps( L, n, rng );
  };

  std::size_t constant_miss = 0;
  for ( int t = 0; t < 500; ++t )
  {
    label_t L;
    auto const pos = instance( L );
    label_t const sigma = 1 + label_t( rng() % std::size_t( L ) );
    std::size_t const c = 1 + rng() % 40;
    auto const direct = oracle::direct_profile( pos, std::vector<label_t>( c - 1, sigma ) );
    constant_miss += repeated_count_constant( differences_of( pos ), sigma, c ) != direct.total;
  }
  o.check( constant_miss == 0, "constant closed form vs direct sets: " + std::to_string( constant_miss ) + "/500 mismatches" );

  std::size_t variable_miss = 0;
  for ( int t = 0; t < 500; ++t )
  {
    label_t L;
    auto const pos = instance( L );
    std::vector<label_t> steps( 1 + rng() % 30 );
    for ( auto& s : steps )
      s = 1 + label_t( rng() % std::size_t( t % 2 ? L : std::min<label_t>( L, 8 ) ) );
    auto const direct = oracle::direct_profile( pos, steps );
    variable_miss += repeated_counts_variable( differences_of( pos ), steps ) != direct.q;
  }
  o.check( variable_miss == 0, "variable closed form with column dedup vs direct sets: " + std::to_string( variable_miss ) +
                                   "/500 mismatches" );

  std::size_t degenerate_miss = 0, compared = 0;
  for ( int t = 0; t < 500; ++t )
  {
    label_t L;
    auto const pos = instance( L );
    TapSet const taps( pos, L );
    label_t const sigma = 1 + label_t( rng() % std::size_t( L ) );
    try
    {
      auto const r = constant_profile( taps, sigma );
      auto const q = repetition_profile( taps, SamplingSchedule::custom( std::vector<label_t>( r.samples - 1, sigma ) ),
                                         StopRule::whole_schedule() );
      ++compared;
      degenerate_miss += q.q != r.q || q.total != r.total || q.total != repeated_count_constant( differences_of( pos ), sigma, r.samples );
    }
    catch ( no_overdefined_system const& )
    {
    }
  }
  o.check( degenerate_miss == 0, "constant schedule degeneration q_i = r_i, R* = R: " + std::to_string( degenerate_miss ) +
                                     "/" + std::to_string( compared ) + " mismatches" );
  return o;
}

Outcome attack_soundness()
{
  Outcome o;
  std::mt19937_64 rng( 10 );
  std::size_t exact = 0, within = 0;
  double lo = 0.0, hi = 0.0;
  std::size_t uniform_within = 0, uniform_total = 0;
  for ( int t = 0; t < 100; ++t )
  {
    auto const p = oracle::planted_lfsr( rng );
    RecoverOptions options;
    /* enumerate every label-consistent tuple so the count is exact */
    options.early_solve = false;
    auto const r = gfsga_recover( p.gen, p.blocks, SamplingSchedule::custom( p.profile.steps ), options );
    exact += r.success() && *r.recovered_state == p.state;
    auto const n = p.gen.tap_count();
    auto const m = p.gen.filter.m();
    auto const predicted = double( candidate_exponent( p.profile.q, n, m ) );
    auto const dev = std::log2( double( std::max<std::size_t>( r.systems_solved, 1 ) ) ) - predicted;
    lo = std::min( lo, dev );
    hi = std::max( hi, dev );
    within += std::abs( dev ) <= 1.0;
    if ( std::all_of( p.profile.q.begin(), p.profile.q.end(), [&]( auto q ) { return q <= n - m; } ) )
    {
      ++uniform_total;
      uniform_within += std::abs( dev ) <= 1.0;
    }
  }
  o.check( exact == 100, "GFSGA exact recovery " + std::to_string( exact ) + "/100" );
  o.check( within == 100, "log2 systems_solved within 1 of the candidate count: " + std::to_string( within ) +
                              "/100, deviations in [" + fmt( lo ) + ", " + fmt( hi ) + "]" );
  o.info( "instances without clamped samples: " + std::to_string( uniform_within ) + "/" +
          std::to_string( uniform_total ) + " within 1" );

  std::size_t nfsr_exact = 0;
  for ( int t = 0; t < 20; ++t )
  {
    auto const p = oracle::planted_nfsr( rng );
    auto const [info, r] = nfsr_window_recover( p.gen, p.blocks );
    nfsr_exact += r.success() && *r.recovered_state == p.state;
  }
  o.check( nfsr_exact == 20, "NFSR window exact recovery " + std::to_string( nfsr_exact ) + "/20" );
  return o;
}

Outcome calibration()
{
  Outcome o;
  auto const lfsr = reference::grain_lfsr_table()[0];
  auto const nfsr = reference::grain_nfsr_table()[0];
  std::vector<CalibrationTarget> const targets{ { "table6", lfsr.taps(), lfsr.constant, lfsr.greedy, lfsr.cyclic },
                                                { "table7", nfsr.taps(), nfsr.constant, nfsr.greedy, nfsr.cyclic } };
  auto const c = calibrate_output_width( targets, 1, 4 );
  o.check( c.best_m >= 1 && c.best_m <= 4 && c.rows.size() == 8, "sweep over m = 1..4 ran, best m = " +
                                                                       std::to_string( c.best_m ) );
  for ( auto const& row : c.rows )
  {
    if ( row.m != c.best_m )
      continue;
    auto opt = []( std::optional<double> const& v ) { return v ? fmt( *v ) : std::string( "-" ); };
    o.info( row.label + " m=" + std::to_string( row.m ) + ": constant " + fmt( row.constant ) + " (" +
            fmt( row.delta_constant ) + "), greedy " + opt( row.greedy ) + " (" + opt( row.delta_greedy ) + "), cyclic " +
            opt( row.cyclic ) + " (" + opt( row.delta_cyclic ) + ")" );
  }
  Report report;
  report.provenance.command = "calibrate";
  report.calibration = make_record( c );
  std::string const path = "acceptance_calibration.json";
  {
    std::ofstream os( path );
    os << to_structured( report, false );
  }
  std::ifstream is( path );
  std::stringstream ss;
  ss << is.rdbuf();
  o.check( report_from_structured( ss.str() ) == report, "archived to " + path );
  return o;
}

} // namespace

int main()
{
  struct Criterion
  {
    char const* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> const criteria{
      { "worked example, two steps", 1 * ms, worked_example },
      { "greedy sampling, example taps", 1.0, greedy_example },
      { "cyclic sampling, example taps", 1.0, cyclic_example },
      { "constant sampling optimum", 1.0, constant_example },
      { "algorithmic vs FPDS rows", 10.0, table_rows },
      { "NFSR window analysis", 1.0, nfsr_window },
      { "hybrid window analysis", 5.0, hybrid_window },
      { "restricted annihilator arithmetic", 1 * ms, annihilator },
      { "oracle equivalence suites", 30.0, property_suites },
      { "end-to-end attack soundness", 300.0, attack_soundness },
      { "output width calibration", 600.0, calibration } };

  int failures = 0;
  for ( std::size_t i = 0; i < criteria.size(); ++i )
  {
    auto const start = std::chrono::steady_clock::now();
    Outcome o;
    try
    {
      o = criteria[i].run();
    }
    catch ( std::exception const& e )
    {
      o.check( false, std::string( "exception: " ) + e.what() );
    }
    double const seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
    o.check( seconds < criteria[i].budget_seconds,
             "runtime " + fmt( seconds * 1e3, 3 ) + " ms, budget " + fmt( criteria[i].budget_seconds * 1e3, 0 ) + " ms" );
    failures += o.pass ? 0 : 1;
    std::printf( "%s %2zu %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, seconds );
    for ( auto const& line : o.lines )
      std::printf( "        %s\n", line.c_str() );
    std::fflush( stdout );
  }
  std::printf( "%d of %zu criteria failed\n", failures, criteria.size() );
  return failures ? 1 : 0;
}
