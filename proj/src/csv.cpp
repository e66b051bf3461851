#include "lfperf/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace lfperf {

namespace {

const std::vector<std::string> kScenarioColumns = {
    "scenario", "structure", "R", "dist", "update_pct", "threads", "layout",
    "predicted_ops_s", "sim_ops_s", "measured_ops_s", "A", "Bq", "events_per_op"};

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string where(const std::string& source, int line) { return source + ":" + std::to_string(line) + ": "; }

double to_double(const std::string& s, const std::string& at) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) throw CsvError(at + "bad number '" + s + "'");
    return v;
}

std::int64_t to_int(const std::string& s, const std::string& at) {
    std::int64_t v = 0;
    const auto* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) throw CsvError(at + "bad integer '" + s + "'");
    return v;
}

std::string pct_label(double v) {
    std::string s = format_double(v);
    std::replace(s.begin(), s.end(), '.', 'p');
    return s;
}

void schema_line(std::ostream& os, const char* schema) { os << "#schema=" << schema << "\n"; }

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::string dist_label(const WorkloadSpec& w) {
    if (const auto* z = std::get_if<ZipfKeys>(&w.key_distribution)) return "zipf:" + format_double(z->alpha);
    return "uniform";
}

ScenarioRow describe_scenario(const WorkloadSpec& w, const StructureSpec& s) {
    ScenarioRow r;
    r.structure = to_string(s.kind);
    r.range = w.key_range;
    r.dist = dist_label(w);
    r.threads = w.threads;
    r.layout = to_string(s.layout);
    std::string mix;
    if (const auto* b = std::get_if<BalancedMix>(&w.op_mix)) {
        r.update_pct = b->update_fraction * 100.0;
        mix = "u" + pct_label(r.update_pct);
    } else {
        const auto& a = std::get<AsymmetricMix>(w.op_mix);
        r.update_pct = (a.insert_fraction + a.delete_fraction) * 100.0;
        mix = "i" + pct_label(a.insert_fraction * 100.0) + "d" + pct_label(a.delete_fraction * 100.0);
    }
    std::string kind = r.structure;
    if (s.kind == StructureKind::HashTable) kind += "-lf" + std::to_string(s.load_factor);
    std::string dist = r.dist;
    std::replace(dist.begin(), dist.end(), ':', '-');
    r.scenario = kind + "-R" + std::to_string(r.range) + "-" + dist + "-" + mix + "-P" + std::to_string(r.threads) + "-" +
                 r.layout;
    return r;
}

void write_scenarios(std::ostream& os, const std::vector<ScenarioRow>& rows) {
    schema_line(os, kScenarioSchema);
    for (std::size_t i = 0; i < kScenarioColumns.size(); ++i) os << (i ? "," : "") << kScenarioColumns[i];
    os << "\n";
    for (const auto& r : rows) {
        os << r.scenario << ',' << r.structure << ',' << r.range << ',' << r.dist << ',' << format_double(r.update_pct)
           << ',' << r.threads << ',' << r.layout << ',' << opt(r.predicted_ops_s) << ',' << opt(r.sim_ops_s) << ','
           << opt(r.measured_ops_s) << ',' << opt(r.A) << ',' << opt(r.Bq) << ',' << opt(r.events_per_op) << "\n";
    }
}

std::vector<ScenarioRow> read_scenarios(std::istream& is, const std::string& source) {
    std::string line;
    int n = 0;
    if (!std::getline(is, line)) throw CsvError(source + ": empty file");
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string want = std::string("#schema=") + kScenarioSchema;
    if (line != want) throw CsvError(where(source, n) + "expected '" + want + "', got '" + line + "'");
    if (!std::getline(is, line)) throw CsvError(source + ": missing header row");
    ++n;
    const auto header = split(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (std::find(kScenarioColumns.begin(), kScenarioColumns.end(), header[i]) == kScenarioColumns.end()) {
            throw CsvError(where(source, n) + "unknown column '" + header[i] + "'");
        }
        if (!col.emplace(header[i], i).second) throw CsvError(where(source, n) + "duplicate column '" + header[i] + "'");
    }
    for (const char* req : {"scenario", "structure", "R", "dist", "update_pct", "threads", "layout"}) {
        if (!col.count(req)) throw CsvError(where(source, n) + "missing column '" + req + "'");
    }

    std::vector<ScenarioRow> rows;
    while (std::getline(is, line)) {
        ++n;
        if (line.empty() || line == "\r" || line[0] == '#') continue;
        const auto f = split(line);
        const std::string at = where(source, n);
        if (f.size() != header.size()) {
            throw CsvError(at + "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
        }
        auto get = [&](const char* c) -> std::string { return col.count(c) ? f[col.at(c)] : std::string(); };
        auto num = [&](const char* c) -> std::optional<double> {
            const std::string s = get(c);
            if (s.empty()) return std::nullopt;
            return to_double(s, at);
        };
        ScenarioRow r;
        r.scenario = get("scenario");
        if (r.scenario.empty()) throw CsvError(at + "empty scenario id");
        r.structure = get("structure");
        r.range = to_int(get("R"), at);
        r.dist = get("dist");
        r.update_pct = to_double(get("update_pct"), at);
        r.threads = static_cast<int>(to_int(get("threads"), at));
        r.layout = get("layout");
        r.predicted_ops_s = num("predicted_ops_s");
        r.sim_ops_s = num("sim_ops_s");
        r.measured_ops_s = num("measured_ops_s");
        r.A = num("A");
        r.Bq = num("Bq");
        r.events_per_op = num("events_per_op");
        if (!r.predicted_ops_s && !r.sim_ops_s && !r.measured_ops_s) throw CsvError(at + "row has no result column");
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<CompareRow> merge_scenarios(const std::vector<std::vector<ScenarioRow>>& files) {
    std::vector<CompareRow> out;
    std::map<std::string, std::size_t> index;
    auto take = [](std::optional<double>& dst, const std::optional<double>& src, const std::string& id, const char* c) {
        if (!src) return;
        if (dst && *dst != *src) {
            throw CsvError("scenario '" + id + "': conflicting " + c + " (" + format_double(*dst) + " vs " +
                           format_double(*src) + ")");
        }
        dst = src;
    };
    for (const auto& rows : files) {
        for (const auto& r : rows) {
            auto [it, fresh] = index.emplace(r.scenario, out.size());
            if (fresh) {
                out.push_back({r, std::nullopt, std::nullopt});
                continue;
            }
            ScenarioRow& m = out[it->second].row;
            if (m.structure != r.structure || m.range != r.range || m.dist != r.dist || m.update_pct != r.update_pct ||
                m.threads != r.threads || m.layout != r.layout) {
                throw CsvError("scenario '" + r.scenario + "': descriptive columns differ between files");
            }
            take(m.predicted_ops_s, r.predicted_ops_s, r.scenario, "predicted_ops_s");
            take(m.sim_ops_s, r.sim_ops_s, r.scenario, "sim_ops_s");
            take(m.measured_ops_s, r.measured_ops_s, r.scenario, "measured_ops_s");
            take(m.A, r.A, r.scenario, "A");
            take(m.Bq, r.Bq, r.scenario, "Bq");
            take(m.events_per_op, r.events_per_op, r.scenario, "events_per_op");
        }
    }
    for (auto& c : out) {
        const auto& p = c.row.predicted_ops_s;
        if (!p || *p == 0.0) continue;
        if (c.row.sim_ops_s) c.rel_err_sim = (*c.row.sim_ops_s - *p) / *p;
        if (c.row.measured_ops_s) c.rel_err_measured = (*c.row.measured_ops_s - *p) / *p;
    }
    return out;
}

ErrorSummary summarize(const std::vector<std::optional<double>>& errors) {
    std::vector<double> a;
    for (const auto& e : errors) {
        if (e) a.push_back(std::fabs(*e));
    }
    ErrorSummary s;
    s.n = a.size();
    if (a.empty()) return s;
    std::sort(a.begin(), a.end());
    // nearest-rank quantiles
    auto q = [&](double p) { return a[static_cast<std::size_t>(std::ceil(p * static_cast<double>(a.size()))) - 1]; };
    s.min = a.front();
    s.max = a.back();
    s.p50 = q(0.5);
    s.p90 = q(0.9);
    double sum = 0.0;
    std::size_t ok = 0;
    for (double x : a) {
        sum += x;
        if (x <= 0.10) ++ok;
    }
    s.mean_abs = sum / static_cast<double>(a.size());
    s.within_10pct = static_cast<double>(ok) / static_cast<double>(a.size());
    return s;
}

void write_compare(std::ostream& os, const std::vector<CompareRow>& rows) {
    schema_line(os, kCompareSchema);
    for (std::size_t i = 0; i < kScenarioColumns.size(); ++i) os << (i ? "," : "") << kScenarioColumns[i];
    os << ",rel_err_sim,rel_err_measured\n";
    for (const auto& c : rows) {
        const auto& r = c.row;
        os << r.scenario << ',' << r.structure << ',' << r.range << ',' << r.dist << ',' << format_double(r.update_pct)
           << ',' << r.threads << ',' << r.layout << ',' << opt(r.predicted_ops_s) << ',' << opt(r.sim_ops_s) << ','
           << opt(r.measured_ops_s) << ',' << opt(r.A) << ',' << opt(r.Bq) << ',' << opt(r.events_per_op) << ','
           << opt(c.rel_err_sim) << ',' << opt(c.rel_err_measured) << "\n";
    }
}

void write_rates(std::ostream& os, const RateTable& t) {
    schema_line(os, kRatesSchema);
    os << "node_kind,key,height,bucket,presence,a_read,a_cas\n";
    for (const auto& e : t.entries) {
        os << to_string(e.id.kind) << ',' << e.id.key << ',' << e.id.height << ',' << e.id.bucket << ','
           << format_double(e.presence) << ',' << format_double(e.a_read) << ',' << format_double(e.a_cas) << "\n";
    }
}

void write_latency(std::ostream& os, const RateTable& t, const LatencyProfile& prof) {
    schema_line(os, kLatencySchema);
    os << "node_kind,key,height,bucket,b,c,e_cas,e_stall_coeff,e_rec";
    for (std::size_t l = 0; l < prof.dcache_levels; ++l) os << ",hit_l" << l + 1;
    for (std::size_t l = 0; l < prof.tlb_levels; ++l) os << ",tlb_hit_l" << l + 1;
    os << "\n";
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        const auto& id = t.entries[i].id;
        os << to_string(id.kind) << ',' << id.key << ',' << id.height << ',' << id.bucket << ','
           << format_double(prof.b[i]) << ',' << format_double(prof.c[i]) << ',' << format_double(prof.e_cas[i]) << ','
           << format_double(prof.e_stall_coeff[i]) << ',' << format_double(prof.e_rec[i]);
        for (std::size_t l = 0; l < prof.dcache_levels; ++l) os << ',' << format_double(prof.hit(i, l));
        for (std::size_t l = 0; l < prof.tlb_levels; ++l) os << ',' << format_double(prof.tlb(i, l));
        os << "\n";
    }
}

void write_gaps(std::ostream& os, const std::map<Key, std::vector<double>>& gaps) {
    schema_line(os, kGapsSchema);
    os << "key,gap_cycles\n";
    for (const auto& [k, v] : gaps) {
        for (double g : v) os << k << ',' << format_double(g) << "\n";
    }
}

void write_poisson(std::ostream& os, const std::vector<PoissonRow>& rows) {
    schema_line(os, kPoissonSchema);
    os << "key,samples,mean_gap,ks_stat,p_value\n";
    for (const auto& r : rows) {
        os << r.key << ',' << r.ks.n << ',' << format_double(r.ks.mean) << ',' << format_double(r.ks.statistic) << ','
           << format_double(r.ks.p_value) << "\n";
    }
}

}  // namespace lfperf
