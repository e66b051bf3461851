#include "lfperf/config.hpp"

#include <charconv>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace lfperf {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string location(const std::string& file, int line, const std::string& key) {
    std::ostringstream os;
    os << file;
    if (line > 0) os << ":" << line;
    if (!key.empty()) os << ": key '" << key << "'";
    return os.str();
}

double parse_double(const FlatConfig& cfg, const std::string& key) {
    const auto& e = cfg.entries.at(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(cfg.source, e.line, key, "expected a number, got '" + e.value + "'");
    }
}

std::int64_t parse_int(const FlatConfig& cfg, const std::string& key) {
    const auto& e = cfg.entries.at(key);
    std::int64_t v = 0;
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last) {
        throw ConfigError(cfg.source, e.line, key, "expected an integer, got '" + e.value + "'");
    }
    return v;
}

bool has(const FlatConfig& cfg, const std::string& key) { return cfg.entries.count(key) > 0; }

void require(const FlatConfig& cfg, const std::string& key) {
    if (!has(cfg, key)) throw ConfigError(cfg.source, 0, key, "required key missing");
}

// Rewraps a validation failure against the line of the most relevant key.
template <class F>
void checked(const FlatConfig& cfg, const std::string& key, F&& f) {
    try {
        f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        const int line = has(cfg, key) ? cfg.entries.at(key).line : 0;
        throw ConfigError(cfg.source, line, key, ex.what());
    }
}

}  // namespace

ConfigError::ConfigError(std::string file, int line, std::string key, const std::string& what)
    : std::runtime_error(location(file, line, key) + ": " + what),
      file_(std::move(file)),
      line_(line),
      key_(std::move(key)) {}

FlatConfig parse_flat_config(const std::string& text, const std::string& source) {
    FlatConfig cfg;
    cfg.source = source;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source, line_no, "", "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(source, line_no, "", "empty key");
        if (value.empty()) throw ConfigError(source, line_no, key, "empty value");
        if (has(cfg, key)) {
            throw ConfigError(source, line_no, key,
                              "duplicate key (first at line " + std::to_string(cfg.entries[key].line) + ")");
        }
        cfg.entries[key] = ConfigEntry{value, line_no};
    }
    return cfg;
}

FlatConfig load_flat_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, "", "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_flat_config(ss.str(), path.string());
}

WorkloadSpec workload_from_config(const FlatConfig& cfg) {
    static const std::set<std::string> known = {"range", "dist", "zipf_alpha", "update_pct",
                                                "ins_pct", "del_pct", "threads"};
    for (const auto& [k, e] : cfg.entries) {
        if (!known.count(k)) throw ConfigError(cfg.source, e.line, k, "unknown key");
    }
    WorkloadSpec w;
    require(cfg, "range");
    w.key_range = parse_int(cfg, "range");

    const std::string dist = has(cfg, "dist") ? cfg.entries.at("dist").value : "uniform";
    if (dist == "uniform") {
        if (has(cfg, "zipf_alpha")) {
            throw ConfigError(cfg.source, cfg.entries.at("zipf_alpha").line, "zipf_alpha",
                              "only valid with dist = zipf");
        }
        w.key_distribution = UniformKeys{};
    } else if (dist == "zipf") {
        ZipfKeys z;
        if (has(cfg, "zipf_alpha")) z.alpha = parse_double(cfg, "zipf_alpha");
        w.key_distribution = z;
    } else {
        throw ConfigError(cfg.source, cfg.entries.at("dist").line, "dist",
                          "expected uniform or zipf, got '" + dist + "'");
    }

    const bool balanced = has(cfg, "update_pct");
    const bool asym = has(cfg, "ins_pct") || has(cfg, "del_pct");
    if (balanced && asym) {
        throw ConfigError(cfg.source, cfg.entries.at("update_pct").line, "update_pct",
                          "use either update_pct or ins_pct/del_pct");
    }
    if (asym) {
        const double ins = has(cfg, "ins_pct") ? parse_double(cfg, "ins_pct") / 100.0 : 0.0;
        const double del = has(cfg, "del_pct") ? parse_double(cfg, "del_pct") / 100.0 : 0.0;
        w.op_mix = AsymmetricMix{ins, del, 1.0 - ins - del};
    } else {
        w.op_mix = BalancedMix{balanced ? parse_double(cfg, "update_pct") / 100.0 : 0.0};
    }
    w.threads = has(cfg, "threads") ? static_cast<int>(parse_int(cfg, "threads")) : 1;

    const std::string blame = balanced ? "update_pct" : asym ? "ins_pct" : "range";
    checked(cfg, blame, [&] { Workload check(w); });
    return w;
}

PlatformSpec platform_from_config(const FlatConfig& cfg) {
    static const std::regex level_re(R"((dcache|tlb)\.L([1-9][0-9]*)\.(lines|pages|lat))");
    static const std::set<std::string> scalars = {
        "mem_lat", "pagewalk_lat", "t_cas.1s", "t_cas.2s", "t_rec.low", "t_rec.high",
        "cores_per_socket", "sockets", "t_app", "t_cmp", "cacheline", "page"};

    std::map<int, CacheLevel> dcache, tlb;
    std::map<int, std::set<std::string>> dcache_fields, tlb_fields;
    for (const auto& [k, e] : cfg.entries) {
        std::smatch m;
        if (std::regex_match(k, m, level_re)) {
            const bool is_d = m[1] == "dcache";
            const std::string field = m[3];
            if (is_d && field == "pages") throw ConfigError(cfg.source, e.line, k, "dcache uses .lines");
            if (!is_d && field == "lines") throw ConfigError(cfg.source, e.line, k, "tlb uses .pages");
            const int lvl = std::stoi(m[2]);
            auto& level = (is_d ? dcache : tlb)[lvl];
            const double v = parse_double(cfg, k);
            if (field == "lat") {
                level.hit_latency = v;
            } else {
                level.capacity = v;
            }
            (is_d ? dcache_fields : tlb_fields)[lvl].insert(field);
        } else if (!scalars.count(k)) {
            throw ConfigError(cfg.source, e.line, k, "unknown key");
        }
    }

    auto collect = [&](const std::map<int, CacheLevel>& levels,
                       const std::map<int, std::set<std::string>>& fields, const char* prefix,
                       const char* cap) {
        std::vector<CacheLevel> out;
        int expect = 1;
        for (const auto& [lvl, level] : levels) {
            const std::string base = std::string(prefix) + ".L" + std::to_string(lvl);
            if (lvl != expect) throw ConfigError(cfg.source, 0, base, "levels must be numbered 1..n");
            if (!fields.at(lvl).count("lat")) throw ConfigError(cfg.source, 0, base + ".lat", "missing");
            if (!fields.at(lvl).count(cap)) {
                throw ConfigError(cfg.source, 0, base + "." + cap, "missing");
            }
            out.push_back(level);
            ++expect;
        }
        return out;
    };

    PlatformSpec p;
    p.data_cache_levels = collect(dcache, dcache_fields, "dcache", "lines");
    p.tlb_levels = collect(tlb, tlb_fields, "tlb", "pages");
    if (has(cfg, "mem_lat")) p.memory_latency = parse_double(cfg, "mem_lat");
    if (has(cfg, "pagewalk_lat")) p.page_walk_latency = parse_double(cfg, "pagewalk_lat");
    require(cfg, "t_cas.1s");
    p.t_cas_by_sockets[1] = parse_double(cfg, "t_cas.1s");
    if (has(cfg, "t_cas.2s")) p.t_cas_by_sockets[2] = parse_double(cfg, "t_cas.2s");
    require(cfg, "t_rec.low");
    p.t_rec_low = parse_double(cfg, "t_rec.low");
    p.t_rec_high = has(cfg, "t_rec.high") ? parse_double(cfg, "t_rec.high") : p.t_rec_low;
    if (has(cfg, "cores_per_socket")) p.cores_per_socket = static_cast<int>(parse_int(cfg, "cores_per_socket"));
    if (has(cfg, "sockets")) p.sockets = static_cast<int>(parse_int(cfg, "sockets"));
    if (has(cfg, "t_app")) p.t_app = parse_double(cfg, "t_app");
    if (has(cfg, "t_cmp")) p.t_cmp = parse_double(cfg, "t_cmp");
    if (has(cfg, "cacheline")) p.cacheline_size = static_cast<int>(parse_int(cfg, "cacheline"));
    if (has(cfg, "page")) p.page_size = static_cast<int>(parse_int(cfg, "page"));

    checked(cfg, "", [&] { p.validate(); });
    return p;
}

WorkloadSpec load_workload(const std::filesystem::path& path) {
    return workload_from_config(load_flat_config(path));
}

PlatformSpec load_platform(const std::filesystem::path& path) {
    return platform_from_config(load_flat_config(path));
}

std::string platform_to_config(const PlatformSpec& p) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < p.data_cache_levels.size(); ++i) {
        os << "dcache.L" << i + 1 << ".lines = " << p.data_cache_levels[i].capacity << "\n";
        os << "dcache.L" << i + 1 << ".lat = " << p.data_cache_levels[i].hit_latency << "\n";
    }
    for (std::size_t i = 0; i < p.tlb_levels.size(); ++i) {
        os << "tlb.L" << i + 1 << ".pages = " << p.tlb_levels[i].capacity << "\n";
        os << "tlb.L" << i + 1 << ".lat = " << p.tlb_levels[i].hit_latency << "\n";
    }
    os << "mem_lat = " << p.memory_latency << "\n";
    os << "pagewalk_lat = " << p.page_walk_latency << "\n";
    for (const auto& [s, v] : p.t_cas_by_sockets) os << "t_cas." << s << "s = " << v << "\n";
    os << "t_rec.low = " << p.t_rec_low << "\n";
    os << "t_rec.high = " << p.t_rec_high << "\n";
    os << "cores_per_socket = " << p.cores_per_socket << "\n";
    os << "sockets = " << p.sockets << "\n";
    os << "t_app = " << p.t_app << "\n";
    os << "t_cmp = " << p.t_cmp << "\n";
    os << "cacheline = " << p.cacheline_size << "\n";
    os << "page = " << p.page_size << "\n";
    return os.str();
}

std::string workload_to_config(const WorkloadSpec& w) {
    std::ostringstream os;
    os.precision(17);
    os << "range = " << w.key_range << "\n";
    if (const auto* z = std::get_if<ZipfKeys>(&w.key_distribution)) {
        os << "dist = zipf\nzipf_alpha = " << z->alpha << "\n";
    } else {
        os << "dist = uniform\n";
    }
    if (const auto* b = std::get_if<BalancedMix>(&w.op_mix)) {
        os << "update_pct = " << b->update_fraction * 100.0 << "\n";
    } else {
        const auto& a = std::get<AsymmetricMix>(w.op_mix);
        os << "ins_pct = " << a.insert_fraction * 100.0 << "\n";
        os << "del_pct = " << a.delete_fraction * 100.0 << "\n";
    }
    os << "threads = " << w.threads << "\n";
    return os.str();
}

}  // namespace lfperf
