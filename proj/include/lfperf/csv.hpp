#pragma once

// CSV files shared by the CLI and the plotting scripts. Every file starts
// with a `#schema=<name>/<version>` line followed by a header row.

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lfperf/latency.hpp"
#include "lfperf/rates.hpp"
#include "lfperf/sim/stats.hpp"
#include "lfperf/workload.hpp"

namespace lfperf {

inline constexpr const char* kScenarioSchema = "lfperf-scenarios/1";
inline constexpr const char* kCompareSchema = "lfperf-compare/1";
inline constexpr const char* kRatesSchema = "lfperf-rates/1";
inline constexpr const char* kLatencySchema = "lfperf-latency/1";
inline constexpr const char* kGapsSchema = "lfperf-gaps/1";
inline constexpr const char* kPoissonSchema = "lfperf-poisson/1";

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScenarioRow {
    std::string scenario;
    std::string structure;  // ll, ht, sl, bst
    std::int64_t range = 0;
    std::string dist;       // uniform | zipf:<alpha>
    double update_pct = 0.0;
    int threads = 1;
    std::string layout;     // padded | packed
    std::optional<double> predicted_ops_s, sim_ops_s, measured_ops_s;
    std::optional<double> A, Bq, events_per_op;  // model diagnostics
};

/// Fills the descriptive columns and a canonical scenario id.
ScenarioRow describe_scenario(const WorkloadSpec& w, const StructureSpec& s);
std::string dist_label(const WorkloadSpec& w);

void write_scenarios(std::ostream& os, const std::vector<ScenarioRow>& rows);
/// Throws CsvError on a missing or different schema line, unknown or missing
/// columns, or a row with no result column.
std::vector<ScenarioRow> read_scenarios(std::istream& is, const std::string& source = "<stream>");

struct CompareRow {
    ScenarioRow row;
    std::optional<double> rel_err_sim, rel_err_measured;  // (x - predicted) / predicted
};

struct ErrorSummary {
    std::size_t n = 0;
    double min = 0.0, p50 = 0.0, p90 = 0.0, max = 0.0;  // of |rel_err|
    double mean_abs = 0.0;
    double within_10pct = 0.0;  // fraction with |rel_err| <= 0.10
};

/// Joins rows from several files on scenario id. A column given by more than
/// one file must agree exactly; descriptive columns must match.
std::vector<CompareRow> merge_scenarios(const std::vector<std::vector<ScenarioRow>>& files);
ErrorSummary summarize(const std::vector<std::optional<double>>& errors);
void write_compare(std::ostream& os, const std::vector<CompareRow>& rows);

void write_rates(std::ostream& os, const RateTable& t);
void write_latency(std::ostream& os, const RateTable& t, const LatencyProfile& prof);
void write_gaps(std::ostream& os, const std::map<Key, std::vector<double>>& gaps);

struct PoissonRow {
    Key key = 0;
    sim::KsResult ks;
};
void write_poisson(std::ostream& os, const std::vector<PoissonRow>& rows);

/// Locale-independent shortest round-trip formatting.
std::string format_double(double v);

}  // namespace lfperf
