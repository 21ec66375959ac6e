#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "attack.hpp"
#include "complexity.hpp"
#include "optimizer.hpp"
#include "sampling.hpp"

/*!
  \file report.hpp
  \brief Typed command reports

  A report is rendered either as a text table (log2 values with two
  decimals) or as structured JSON carrying full precision. The timing block
  is the only part that may differ between two runs of the same scenario.
*/

NLOHMANN_JSON_NAMESPACE_BEGIN
template<class T>
struct adl_serializer<std::optional<T>>
{
  static void to_json( json& j, std::optional<T> const& v )
  {
    if ( v )
      j = *v;
    else
      j = nullptr;
  }

  static void from_json( json const& j, std::optional<T>& v )
  {
    if ( j.is_null() )
      v.reset();
    else
      v = j.template get<T>();
  }
};
NLOHMANN_JSON_NAMESPACE_END

namespace gfsga
{

inline constexpr char const* tool_version = "1.0.0";

struct Provenance
{
  std::string tool = "gfsga";
  std::string version = tool_version;
  std::string command;
  std::string scenario;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  bool operator==( Provenance const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( Provenance, tool, version, command, scenario, config_hash, seed, workers )

struct ProfileRecord
{
  std::string name;
  std::string mode;
  label_t register_length = 0;
  std::size_t n = 0;
  std::vector<label_t> steps;
  std::vector<std::size_t> q;
  std::vector<std::vector<label_t>> repeated_sets;
  std::size_t samples = 0;
  std::size_t total = 0;
  std::size_t equations = 0;
  std::optional<label_t> k;

  bool operator==( ProfileRecord const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( ProfileRecord, name, mode, register_length, n, steps, q, repeated_sets, samples,
                                    total, equations, k )

inline ProfileRecord make_record( std::string name, RepetitionProfile const& p )
{
  return { std::move( name ), to_string( p.mode ), p.register_length, p.taps_per_sample, p.steps, p.q,
           p.repeated_sets, p.samples, p.total, p.equations(), p.k };
}

struct EstimateRecord
{
  std::string name;
  double log2_total = 0.0;
  double first_sample_exponent = 0.0;
  std::vector<double> per_sample_exponents;
  double solver_log2 = 0.0;
  std::size_t samples = 0;
  std::size_t repeats = 0;
  std::string model;

  bool operator==( EstimateRecord const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( EstimateRecord, name, log2_total, first_sample_exponent, per_sample_exponents,
                                    solver_log2, samples, repeats, model )

inline EstimateRecord make_record( std::string name, ComplexityEstimate const& e )
{
  return { std::move( name ), e.log2_total, e.first_sample_exponent, e.per_sample_exponents, e.solver_log2,
           e.samples_used, e.repeats_used, e.provenance };
}

struct ScorecardRecord
{
  std::vector<label_t> taps;
  std::vector<label_t> differences;
  label_t register_length = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t lambda = 0;
  bool fpds = false;
  label_t optimal_sigma = 0;
  std::vector<label_t> optimal_sigmas;
  double constant = 0.0;
  std::optional<double> greedy;
  std::optional<double> cyclic;

  bool operator==( ScorecardRecord const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( ScorecardRecord, taps, differences, register_length, n, m, lambda, fpds,
                                    optimal_sigma, optimal_sigmas, constant, greedy, cyclic )

inline ScorecardRecord make_record( Scorecard const& c )
{
  ScorecardRecord r;
  r.taps = c.taps.positions();
  r.differences = consecutive_differences( c.taps );
  r.register_length = c.taps.register_length();
  r.n = c.taps.size();
  r.m = c.m;
  r.lambda = c.lambda;
  r.fpds = c.fpds;
  r.optimal_sigma = c.optimal_sigma;
  r.optimal_sigmas = c.optimal_sigmas;
  r.constant = c.constant.log2_total;
  if ( c.greedy )
    r.greedy = c.greedy->log2_total;
  if ( c.cyclic )
    r.cyclic = c.cyclic->log2_total;
  return r;
}

struct WindowRecord
{
  std::string name;
  std::size_t p = 0;
  std::vector<std::size_t> q;
  std::size_t recovered = 0;
  std::size_t guessed = 0;
  double log2_total = 0.0;
  double memory_bits = 0.0;
  std::size_t data_bits = 0;

  bool operator==( WindowRecord const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( WindowRecord, name, p, q, recovered, guessed, log2_total, memory_bits, data_bits )

inline WindowRecord make_record( std::string name, WindowEstimate const& w, std::vector<std::size_t> q )
{
  return { std::move( name ), w.p, std::move( q ), w.recovered, w.guessed, w.estimate.log2_total, w.memory_bits,
           w.data_bits };
}

struct AttackRecord
{
  std::string method;
  bool success = false;
  std::optional<std::string> recovered_state;
  std::size_t systems_solved = 0;
  std::size_t candidates_pruned = 0;
  std::size_t solutions_found = 0;
  std::size_t unresolved = 0;
  std::string failure;
  std::optional<std::size_t> window_length;
  std::optional<std::size_t> recovered_bits;
  std::optional<std::size_t> remaining_guess;
  std::optional<std::size_t> window_candidates;
  std::optional<std::size_t> completions_tested;

  bool operator==( AttackRecord const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( AttackRecord, method, success, recovered_state, systems_solved, candidates_pruned,
                                    solutions_found, unresolved, failure, window_length, recovered_bits,
                                    remaining_guess, window_candidates, completions_tested )

inline AttackRecord make_record( std::string method, AttackResult const& r )
{
  AttackRecord a;
  a.method = std::move( method );
  a.success = r.success();
  if ( r.recovered_state )
    a.recovered_state = r.recovered_state->to_hex();
  a.systems_solved = r.systems_solved;
  a.candidates_pruned = r.candidates_pruned;
  a.solutions_found = r.solutions_found;
  a.unresolved = r.unresolved;
  a.failure = r.failure;
  return a;
}

struct TraceRecord
{
  std::size_t stage = 0;
  std::size_t attempt = 0;
  std::size_t candidates_tried = 0;
  std::size_t permutations_evaluated = 0;
  bool accepted = false;
  std::vector<label_t> differences;
  label_t stage_length = 0;
  std::size_t stage_m = 0;
  double cost = 0.0;
  label_t sigma = 0;
  std::string note;

  bool operator==( TraceRecord const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( TraceRecord, stage, attempt, candidates_tried, permutations_evaluated, accepted,
                                    differences, stage_length, stage_m, cost, sigma, note )

struct SearchRecord
{
  std::string strategy;
  std::vector<label_t> differences;
  std::size_t permutations_evaluated = 0;
  std::vector<TraceRecord> trace;
  std::vector<std::vector<label_t>> candidates;

  bool operator==( SearchRecord const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( SearchRecord, strategy, differences, permutations_evaluated, trace, candidates )

inline TraceRecord make_record( StageTrace const& t )
{
  return { t.stage, t.attempt, t.candidates_tried, t.permutations_evaluated, t.accepted, t.differences,
           t.stage_length, t.stage_m, t.cost, t.sigma, t.note };
}

struct CalibrationCell
{
  std::string label;
  std::size_t m = 0;
  double constant = 0.0;
  std::optional<double> greedy;
  std::optional<double> cyclic;
  double delta_constant = 0.0;
  std::optional<double> delta_greedy;
  std::optional<double> delta_cyclic;

  bool operator==( CalibrationCell const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( CalibrationCell, label, m, constant, greedy, cyclic, delta_constant, delta_greedy,
                                    delta_cyclic )

struct CalibrationRecord
{
  std::size_t best_m = 0;
  std::size_t m_min = 1;
  /* summed absolute deltas per m; null when some mode never became overdefined */
  std::vector<std::optional<double>> score;
  std::vector<CalibrationCell> rows;

  bool operator==( CalibrationRecord const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( CalibrationRecord, best_m, m_min, score, rows )

inline CalibrationRecord make_record( CalibrationResult const& c )
{
  CalibrationRecord r;
  r.best_m = c.best_m;
  r.m_min = c.m_min;
  for ( auto s : c.score )
    r.score.push_back( std::isfinite( s ) ? std::optional<double>( s ) : std::nullopt );
  for ( auto const& row : c.rows )
    r.rows.push_back( { row.label, row.m, row.constant, row.greedy, row.cyclic, row.delta_constant, row.delta_greedy,
                        row.delta_cyclic } );
  return r;
}

/* published value next to the recomputed one */
struct ComparisonRow
{
  std::string table;
  std::string row;
  std::string column;
  std::optional<double> published;
  std::optional<double> computed;
  std::optional<double> delta;
  bool match = false;
  std::string note;

  bool operator==( ComparisonRow const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( ComparisonRow, table, row, column, published, computed, delta, match, note )

inline ComparisonRow compare( std::string table, std::string row, std::string column, std::optional<double> published,
                              std::optional<double> computed, double tolerance, std::string note = {} )
{
  ComparisonRow r{ std::move( table ), std::move( row ), std::move( column ), published, computed, std::nullopt, false,
                   std::move( note ) };
  if ( published && computed )
  {
    r.delta = *computed - *published;
    r.match = std::abs( *r.delta ) <= tolerance;
  }
  return r;
}

struct Report
{
  Provenance provenance;
  std::vector<ProfileRecord> profiles;
  std::vector<EstimateRecord> estimates;
  std::vector<ScorecardRecord> scorecards;
  std::vector<WindowRecord> windows;
  std::vector<AttackRecord> attacks;
  std::optional<SearchRecord> search;
  std::optional<CalibrationRecord> calibration;
  std::vector<ComparisonRow> comparisons;
  std::vector<std::string> notes;
  /* seconds per phase; excluded from determinism checks */
  std::map<std::string, double> timing;

  bool operator==( Report const& ) const = default;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE( Report, provenance, profiles, estimates, scorecards, windows, attacks, search,
                                    calibration, comparisons, notes, timing )

inline std::string to_structured( Report const& report, bool with_timing = true )
{
  nlohmann::json j = report;
  if ( !with_timing )
    j.erase( "timing" );
  return j.dump( 2 ) + "\n";
}

inline Report report_from_structured( std::string const& text )
{
  auto j = nlohmann::json::parse( text );
  if ( !j.contains( "timing" ) )
    j["timing"] = nlohmann::json::object();
  return j.get<Report>();
}

namespace detail
{

inline std::string fixed2( double v )
{
  std::ostringstream os;
  os << std::fixed << std::setprecision( 2 ) << v;
  return os.str();
}

inline std::string fixed2( std::optional<double> v )
{
  return v ? fixed2( *v ) : std::string( "-" );
}

template<class T>
std::string join( std::vector<T> const& v, char const* sep = ", " )
{
  std::ostringstream os;
  for ( std::size_t i = 0; i < v.size(); ++i )
  {
    if ( i )
      os << sep;
    os << v[i];
  }
  return os.str();
}

/* pads every column to its widest cell */
inline std::string render_grid( std::vector<std::vector<std::string>> const& rows )
{
  std::vector<std::size_t> width;
  for ( auto const& r : rows )
  {
    width.resize( std::max( width.size(), r.size() ), 0 );
    for ( std::size_t c = 0; c < r.size(); ++c )
      width[c] = std::max( width[c], r[c].size() );
  }
  std::ostringstream os;
  for ( auto const& r : rows )
  {
    std::string line;
    for ( std::size_t c = 0; c < r.size(); ++c )
    {
      if ( c )
        line += "  ";
      line += r[c] + std::string( width[c] - r[c].size(), ' ' );
    }
    while ( !line.empty() && line.back() == ' ' )
      line.pop_back();
    os << line << "\n";
  }
  return os.str();
}

} // namespace detail

inline std::string to_table( Report const& report )
{
  using detail::fixed2;
  using detail::join;
  std::ostringstream os;
  auto const& p = report.provenance;
  os << p.tool << " " << p.version << "  " << p.command;
  if ( !p.scenario.empty() )
    os << "  scenario " << p.scenario;
  os << "  seed " << p.seed << "  config " << p.config_hash << "\n";

  for ( auto const& pr : report.profiles )
  {
    os << "\nprofile " << pr.name << " (" << pr.mode << ", L = " << pr.register_length << ", n = " << pr.n << ")\n";
    std::vector<std::vector<std::string>> rows{ { "j", "step", "q_j", "repeated labels" } };
    for ( std::size_t j = 0; j < pr.q.size(); ++j )
    {
      rows.push_back( { std::to_string( j + 1 ), j < pr.steps.size() ? std::to_string( pr.steps[j] ) : "-",
                        std::to_string( pr.q[j] ),
                        j < pr.repeated_sets.size() ? "{" + join( pr.repeated_sets[j] ) + "}" : "" } );
    }
    os << detail::render_grid( rows );
    os << "samples c = " << pr.samples << ", repeats R = " << pr.total << ", equations = " << pr.equations;
    if ( pr.k )
      os << ", k = " << *pr.k;
    os << "\n";
  }

  if ( !report.estimates.empty() )
  {
    os << "\nestimates (log2)\n";
    std::vector<std::vector<std::string>> rows{ { "name", "total", "guessing", "solver", "c", "R", "model" } };
    for ( auto const& e : report.estimates )
    {
      rows.push_back( { e.name, fixed2( e.log2_total ), fixed2( e.log2_total - e.solver_log2 ),
                        fixed2( e.solver_log2 ), std::to_string( e.samples ), std::to_string( e.repeats ), e.model } );
    }
    os << detail::render_grid( rows );
  }

  if ( !report.scorecards.empty() )
  {
    os << "\nscorecards (log2)\n";
    std::vector<std::vector<std::string>> rows{
        { "L", "n", "m", "D", "lambda", "fpds", "sigma*", "constant", "greedy", "cyclic" } };
    for ( auto const& c : report.scorecards )
    {
      rows.push_back( { std::to_string( c.register_length ), std::to_string( c.n ), std::to_string( c.m ),
                        "{" + join( c.differences ) + "}", std::to_string( c.lambda ), c.fpds ? "yes" : "no",
                        "{" + join( c.optimal_sigmas ) + "}", fixed2( c.constant ), fixed2( c.greedy ),
                        fixed2( c.cyclic ) } );
    }
    os << detail::render_grid( rows );
  }

  for ( auto const& w : report.windows )
  {
    os << "\nwindow " << w.name << ": p = " << w.p << ", q = (" << join( w.q ) << ")\n";
    os << "recovered R_p = " << w.recovered << ", guessed = " << w.guessed << ", cost 2^" << fixed2( w.log2_total )
       << ", memory " << fixed2( w.memory_bits ) << " bits, data " << w.data_bits << " bits\n";
  }

  for ( auto const& a : report.attacks )
  {
    os << "\nattack " << a.method << ": " << ( a.success ? "success" : "failure" ) << "\n";
    if ( a.recovered_state )
      os << "recovered state " << *a.recovered_state << "\n";
    os << "systems solved " << a.systems_solved << ", candidates pruned " << a.candidates_pruned
       << ", solutions found " << a.solutions_found << "\n";
    if ( a.window_length )
    {
      os << "window " << *a.window_length << " samples, R_p = " << a.recovered_bits.value_or( 0 ) << ", guessed "
         << a.remaining_guess.value_or( 0 ) << ", window candidates " << a.window_candidates.value_or( 0 )
         << ", completions tested " << a.completions_tested.value_or( 0 ) << "\n";
    }
    if ( !a.failure.empty() )
      os << "reason: " << a.failure << "\n";
  }

  if ( report.search )
  {
    auto const& s = *report.search;
    os << "\nsearch " << s.strategy << ": D = {" << join( s.differences ) << "}";
    if ( s.permutations_evaluated )
      os << ", " << s.permutations_evaluated << " orderings evaluated";
    os << "\n";
    if ( !s.trace.empty() )
    {
      std::vector<std::vector<std::string>> rows{ { "stage", "try", "L_X", "m_X", "cost", "sigma", "ok", "D" } };
      for ( auto const& t : s.trace )
      {
        rows.push_back( { std::to_string( t.stage ), std::to_string( t.attempt ), std::to_string( t.stage_length ),
                          std::to_string( t.stage_m ), fixed2( t.cost ), std::to_string( t.sigma ),
                          t.accepted ? "yes" : "no", "{" + join( t.differences ) + "}" } );
      }
      os << detail::render_grid( rows );
    }
    for ( auto const& c : s.candidates )
      os << "candidate {" << join( c ) << "}\n";
  }

  if ( report.calibration )
  {
    auto const& c = *report.calibration;
    os << "\ncalibration: best m = " << c.best_m << "\n";
    std::vector<std::vector<std::string>> rows{
        { "target", "m", "constant", "greedy", "cyclic", "d constant", "d greedy", "d cyclic" } };
    for ( auto const& r : c.rows )
    {
      rows.push_back( { r.label, std::to_string( r.m ), fixed2( r.constant ), fixed2( r.greedy ), fixed2( r.cyclic ),
                        fixed2( r.delta_constant ), fixed2( r.delta_greedy ), fixed2( r.delta_cyclic ) } );
    }
    os << detail::render_grid( rows );
    for ( std::size_t i = 0; i < c.score.size(); ++i )
      os << "m = " << c.m_min + i << ": total |delta| " << fixed2( c.score[i] ) << "\n";
  }

  if ( !report.comparisons.empty() )
  {
    os << "\ncomparison with published values\n";
    std::vector<std::vector<std::string>> rows{ { "table", "row", "column", "published", "computed", "delta", "ok", "note" } };
    for ( auto const& r : report.comparisons )
    {
      rows.push_back( { r.table, r.row, r.column, fixed2( r.published ), fixed2( r.computed ), fixed2( r.delta ),
                        r.match ? "yes" : "no", r.note } );
    }
    os << detail::render_grid( rows );
  }

  if ( !report.notes.empty() )
  {
    os << "\n";
    for ( auto const& n : report.notes )
      os << "note: " << n << "\n";
  }
  return os.str();
}

} // namespace gfsga
