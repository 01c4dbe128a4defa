#include "regforge/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "regforge/auditor.hpp"
#include "regforge/io.hpp"
#include "regforge/rng.hpp"
#include "regforge/sampler.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace regforge {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

json rat_json(const Rational& r) {
    return json{{"num", r.num()}, {"den", r.den()}, {"dec", r.to_decimal(12)}};
}

json density_json(const DensityValue& d) {
    return json{{"activation", d.activation},
                {"pairs", d.pairs},
                {"delta", d.delta.to_string()},
                {"value", rat_json(d.value())}};
}

json ids_json(const VertexSet& s) {
    json a = json::array();
    for (std::int32_t v : s) a.push_back(v);
    return a;
}

json witness_json(const Witness& w) {
    return json{{"a_sub", ids_json(w.a_sub)},
                {"b_sub", ids_json(w.b_sub)},
                {"d_sub", density_json(w.d_sub)},
                {"d_pair", density_json(w.d_pair)},
                {"deviation", rat_json(w.deviation)}};
}

json params_json(const ConstructionParams& p) {
    return json{{"mode", p.mode == BuildMode::coupled ? "coupled" : "custom"},
                {"epsilon", p.epsilon ? p.epsilon->to_string() : "none"},
                {"delta", p.delta.to_string()},
                {"s", p.s},
                {"kappa", p.kappa},
                {"n", p.n},
                {"seed", p.seed}};
}

const char* verdict_name(NicenessVerdict v) {
    switch (v) {
        case NicenessVerdict::nice: return "nice";
        case NicenessVerdict::not_nice: return "not_nice";
        default: return "inconclusive";
    }
}

const char* status_name(PairStatus s) {
    switch (s) {
        case PairStatus::regular: return "regular";
        case PairStatus::irregular: return "irregular";
        default: return "unknown";
    }
}

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// One option bag shared by every subcommand; a subcommand registers only
/// the flags it understands. Config-file values fill flags left unset, so
/// flags always override the file.
struct RawOpts {
    std::map<std::string, std::string> given;   // flag name -> value (set on CLI)
    std::map<std::string, std::string> file;    // from --config

    std::optional<std::string> get(const std::string& key) const {
        auto it = given.find(key);
        if (it != given.end()) return it->second;
        it = file.find(key);
        if (it != file.end()) return it->second;
        return std::nullopt;
    }
    std::string get_or(const std::string& key, const std::string& def) const {
        auto v = get(key);
        return v ? *v : def;
    }
};

void load_config_file(const std::string& path, RawOpts& opts) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key=value");
        auto trim = [](std::string v) {
            auto b = v.find_first_not_of(" \t");
            auto e = v.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (key.empty()) throw std::runtime_error("config line " + std::to_string(lineno) +
                                                  ": empty key");
        if (!opts.file.count(key)) opts.file[key] = val;
    }
}

Rational parse_rational_opt(const RawOpts& o, const std::string& key, const Rational& def) {
    auto v = o.get(key);
    if (!v) return def;
    try {
        return Rational::parse(*v);
    } catch (const std::exception& e) {
        throw std::invalid_argument(key + ": " + e.what());
    }
}

std::int64_t parse_int_opt(const RawOpts& o, const std::string& key, std::int64_t def) {
    auto v = o.get(key);
    if (!v) return def;
    try {
        std::size_t pos = 0;
        std::int64_t r = std::stoll(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("trailing characters");
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": not an integer: '" + *v + "'");
    }
}

std::uint64_t parse_u64_opt(const RawOpts& o, const std::string& key, std::uint64_t def) {
    auto v = o.get(key);
    if (!v) return def;
    try {
        std::size_t pos = 0;
        std::uint64_t r = std::stoull(*v, &pos);
        if (pos != v->size()) throw std::invalid_argument("trailing characters");
        return r;
    } catch (const std::exception&) {
        throw std::invalid_argument(key + ": not an unsigned integer: '" + *v + "'");
    }
}

std::string require(const RawOpts& o, const std::string& key, const std::string& what) {
    auto v = o.get(key);
    if (!v || v->empty()) throw std::invalid_argument(what + " required");
    return *v;
}

/// Resolves construction parameters from flags/config. Coupled mode derives
/// (delta, s) from epsilon; custom mode takes them directly. Giving both
/// epsilon and delta is refused as "overdetermined".
ConstructionParams resolve_params(const RawOpts& o) {
    bool has_eps = o.get("epsilon").has_value();
    bool has_delta = o.get("delta").has_value();
    auto mode = o.get("mode");
    if (mode && *mode != "coupled" && *mode != "custom")
        throw std::invalid_argument("mode must be 'coupled' or 'custom'");
    if (has_eps && has_delta)
        throw std::invalid_argument(
            "overdetermined: give epsilon (coupled mode) or delta (custom mode), not both");

    std::int64_t kappa = parse_int_opt(o, "kappa", 512);
    std::int64_t n = parse_int_opt(o, "n", 0);
    std::uint64_t seed = parse_u64_opt(o, "seed", 0);

    // structural precheck: an explicit s fixes the tower shape regardless of
    // delta, so divisibility problems surface before delta resolution
    if (o.get("s")) {
        std::int64_t s = parse_int_opt(o, "s", 0);
        if (s >= 1 && kappa >= 1 && n >= 1) {
            std::int64_t m = 1;
            bool capped = false;
            for (std::int64_t r = 0; r < s; ++r) {
                std::int64_t exp = (m + kappa - 1) / kappa;
                if (exp > 20 || (m << exp) > (std::int64_t(1) << 20)) { capped = true; break; }
                m <<= exp;
            }
            if (!capped && n % m != 0)
                throw std::invalid_argument("divisibility: n=" + std::to_string(n) +
                                            " is not a multiple of m_s=" + std::to_string(m));
        }
    }

    bool coupled = mode ? *mode == "coupled" : has_eps;
    if (coupled) {
        if (!has_eps) throw std::invalid_argument("epsilon required in coupled mode");
        Rational eps = parse_rational_opt(o, "epsilon", Rational());
        if (n < 1) throw std::invalid_argument("n required");
        return ConstructionParams::coupled(eps, n, seed, kappa);
    }
    if (!has_delta) throw std::invalid_argument("delta (custom mode) or epsilon (coupled mode) required");
    Rational delta = parse_rational_opt(o, "delta", Rational());
    if (!o.get("s")) throw std::invalid_argument("s required in custom mode");
    int s = int(parse_int_opt(o, "s", 0));
    if (n < 1) throw std::invalid_argument("n required");
    return ConstructionParams::custom(delta, s, kappa, n, seed);
}

json config_json(const RawOpts& o, std::initializer_list<const char*> keys) {
    json c = json::object();
    for (const char* k : keys) {
        auto v = o.get(k);
        if (v) c[k] = *v;
    }
    return c;
}

void emit_report(const std::string& subcommand, const json& config, const json& result,
                 const RawOpts& o, std::ostream& out) {
    json doc{{"tool", "regforge"},
             {"version", kVersion},
             {"rng", kRngScheme},
             {"subcommand", subcommand},
             {"timestamp", utc_timestamp()},
             {"config", config},
             {"result", result}};
    auto path = o.get("report-out");
    if (path && !path->empty()) {
        std::ofstream f(*path);
        if (!f) throw std::runtime_error("cannot open for writing: " + *path);
        f << doc.dump(2) << "\n";
    } else {
        out << doc.dump(2) << "\n";
    }
}

VertexSet parse_vertex_list(const std::string& text, std::int64_t n, const std::string& what) {
    std::vector<std::int32_t> ids;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t pos = 0;
            long long v = std::stoll(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument("");
            ids.push_back(std::int32_t(v));
        } catch (const std::exception&) {
            throw std::invalid_argument(what + ": bad vertex id '" + tok + "'");
        }
    }
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = 1; i < ids.size(); ++i)
        if (ids[i] == ids[i - 1]) throw std::invalid_argument(what + ": duplicate vertex id");
    return VertexSet::of(std::move(ids), n);
}

AuditStrategy parse_strategy(const RawOpts& o, const std::string& def) {
    std::string s = o.get_or("strategy", def);
    if (s == "exhaustive") return AuditStrategy::exhaustive;
    if (s == "canonical") return AuditStrategy::canonical;
    if (s == "both") return AuditStrategy::both;
    throw std::invalid_argument("strategy must be exhaustive, canonical, or both");
}

// ---------------------------------------------------------------- bounds

int cmd_bounds(const RawOpts& o, std::ostream& out) {
    if (!o.get("epsilon")) throw std::invalid_argument("epsilon required");
    Rational eps = parse_rational_opt(o, "epsilon", Rational());
    std::int64_t kappa = parse_int_opt(o, "kappa", 512);
    auto rep = bounds_report(eps, kappa);
    json result{{"epsilon", rat_json(rep.epsilon)},
                {"delta", rat_json(rep.delta)},
                {"s", rep.s},
                {"kappa", rep.kappa},
                {"sizes", rep.sizes_decimal},
                {"m_s", rep.m_s_decimal},
                {"m_s_bits", rep.m_s_bits},
                {"note", rep.note}};
    emit_report("bounds", config_json(o, {"epsilon", "kappa", "report-out"}), result, o, out);
    return 0;
}

// ----------------------------------------------------------- gen-tower

int cmd_gen_tower(const RawOpts& o, std::ostream& out) {
    auto params = resolve_params(o);
    std::string path = require(o, "out", "out");
    std::int64_t retries = parse_int_opt(o, "max-retries", 100000);
    auto t = build_tower(params, retries);
    write_tower(path, t);
    json result{{"out", path}, {"m", t.m}, {"params", params_json(params)}};
    emit_report("gen-tower",
                config_json(o, {"mode", "epsilon", "delta", "s", "kappa", "n", "seed",
                                "max-retries", "out", "report-out"}),
                result, o, out);
    return 0;
}

// ----------------------------------------------------------- gen-graph

int cmd_gen_graph(const RawOpts& o, std::ostream& out) {
    std::string path = require(o, "out", "out");
    std::string format = o.get_or("format", "matrix");
    if (format != "matrix" && format != "descriptor")
        throw std::invalid_argument("format must be 'matrix' or 'descriptor'");

    PartitionTower t;
    if (o.get("in")) {
        t = read_tower(*o.get("in"));
    } else {
        auto params = resolve_params(o);
        t = build_tower(params, parse_int_opt(o, "max-retries", 100000));
    }

    if (format == "descriptor") {
        write_graph_descriptor(path, t.params);
    } else {
        auto g = build_instance(t);
        write_graph_matrix(path, g);
    }
    json result{{"out", path}, {"format", format}, {"params", params_json(t.params)},
                {"m_s", t.m.back()}};
    emit_report("gen-graph",
                config_json(o, {"mode", "epsilon", "delta", "s", "kappa", "n", "seed",
                                "max-retries", "in", "out", "format", "report-out"}),
                result, o, out);
    return 0;
}

// -------------------------------------------------------------- sample

int cmd_sample(const RawOpts& o, std::ostream& out) {
    std::string in = require(o, "in", "in");
    std::string path = require(o, "out", "out");
    std::uint64_t seed = parse_u64_opt(o, "seed", 0);
    auto g = read_graph(in);
    auto s = sample_graph(g, seed);
    write_sample(path, s);
    json result{{"out", path}, {"n", s.n}, {"seed", s.seed}, {"edges", s.edges}};
    emit_report("sample", config_json(o, {"in", "out", "seed", "report-out"}), result, o, out);
    return 0;
}

// ---------------------------------------------------------- audit-pair

int cmd_audit_pair(const RawOpts& o, std::ostream& out) {
    auto g = read_graph(require(o, "in", "in"));
    Rational eps = Rational::parse(require(o, "eps-audit", "eps-audit"));
    auto strategy = parse_strategy(o, "exhaustive");
    std::int64_t cap = parse_int_opt(o, "size-cap", 12);

    VertexSet a, b;
    if (o.get("a") || o.get("b")) {
        a = parse_vertex_list(require(o, "a", "a"), g.n(), "a");
        b = parse_vertex_list(require(o, "b", "b"), g.n(), "b");
    } else if (o.get("partition") && o.get("pair")) {
        auto part = read_partition(*o.get("partition"));
        if (part.n() != g.n()) throw std::invalid_argument("partition size mismatch");
        std::string pr = *o.get("pair");
        auto comma = pr.find(',');
        if (comma == std::string::npos) throw std::invalid_argument("pair must be 'p,q'");
        std::int64_t p = std::stoll(pr.substr(0, comma)), q = std::stoll(pr.substr(comma + 1));
        auto parts = part.parts();
        if (p < 0 || q < 0 || p >= part.k() || q >= part.k())
            throw std::invalid_argument("pair index out of range");
        a = parts[std::size_t(p)];
        b = parts[std::size_t(q)];
    } else {
        throw std::invalid_argument("give --a/--b vertex lists or --partition with --pair");
    }

    PairVerdict v;
    if (strategy == AuditStrategy::exhaustive) {
        v = exhaustive_pair_check(g, a, b, eps, cap);
    } else {
        auto t = read_tower(require(o, "tower", "tower (canonical strategy)"));
        if (t.params.n != g.n()) throw std::invalid_argument("tower size mismatch");
        v = canonical_witness_search(g, t, a, b, eps);
        if (strategy == AuditStrategy::both && v.status != PairStatus::irregular)
            v = exhaustive_pair_check(g, a, b, eps, cap);
    }

    json result{{"status", status_name(v.status)}, {"method", v.method},
                {"eps", rat_json(eps)}};
    if (v.witness) result["witness"] = witness_json(*v.witness);
    emit_report("audit-pair",
                config_json(o, {"in", "eps-audit", "strategy", "size-cap", "a", "b",
                                "partition", "pair", "tower", "report-out"}),
                result, o, out);
    return v.status == PairStatus::irregular ? 1 : 0;
}

// ----------------------------------------------------- audit-partition

int cmd_audit_partition(const RawOpts& o, std::ostream& out) {
    auto g = read_graph(require(o, "in", "in"));
    auto part = read_partition(require(o, "partition", "partition"));
    if (part.n() != g.n()) throw std::invalid_argument("partition size mismatch");
    Rational eps = Rational::parse(require(o, "eps-audit", "eps-audit"));
    auto strategy = parse_strategy(o, "exhaustive");
    std::int64_t cap = parse_int_opt(o, "size-cap", 12);

    std::optional<PartitionTower> t;
    if (strategy != AuditStrategy::exhaustive)
        t = read_tower(require(o, "tower", "tower (canonical strategy)"));

    auto rep = niceness_audit(g, part, eps, strategy, t ? &*t : nullptr, cap);
    json witnesses = json::array();
    for (std::size_t i = 0; i < rep.witnesses.size(); ++i) {
        json w = witness_json(rep.witnesses[i]);
        w["parts"] = {rep.witness_pairs[i].first, rep.witness_pairs[i].second};
        witnesses.push_back(std::move(w));
    }
    json result{{"verdict", verdict_name(rep.verdict)},
                {"k", rep.k},
                {"eps", rat_json(rep.eps)},
                {"irregular_pairs", rep.irregular_pairs},
                {"unknown_pairs", rep.unknown_pairs},
                {"irregular_with", rep.irregular_with},
                {"witnesses", witnesses}};
    emit_report("audit-partition",
                config_json(o, {"in", "partition", "eps-audit", "strategy", "size-cap",
                                "tower", "report-out"}),
                result, o, out);
    return rep.verdict == NicenessVerdict::not_nice ? 1 : 0;
}

// -------------------------------------------------------- verify-lemmas

int cmd_verify_lemmas(const RawOpts& o, std::ostream& out) {
    auto params = resolve_params(o);
    Rational zeta = parse_rational_opt(o, "zeta", Rational(1, 20));
    Rational grid = parse_rational_opt(o, "grid-step", Rational(1, 20));
    std::int64_t trials = parse_int_opt(o, "trials", 50);
    std::int64_t retries = parse_int_opt(o, "max-retries", 100000);

    auto t = build_tower(params, retries);
    auto g = build_instance(t);
    bool all_pass = true;
    json suites = json::object();

    { // balance: re-verify every level at the construction parameter
        json levels = json::array();
        bool pass = true;
        for (int r = 1; r <= params.s; ++r) {
            auto rep = is_balanced(t.levels[std::size_t(r - 1)].seq, Rational(1, 16));
            pass = pass && rep.balanced;
            levels.push_back(json{{"level", r},
                                  {"M", t.levels[std::size_t(r - 1)].M},
                                  {"balanced", rep.balanced},
                                  {"worst_count", rep.worst_count}});
        }
        suites["balance"] = json{{"pass", pass}, {"levels", levels}};
        all_pass = all_pass && pass;
    }

    { // mass-splitting oracle per level, skipped where the grid explodes
        json levels = json::array();
        bool pass = true;
        for (int r = 1; r <= params.s; ++r) {
            const auto& seq = t.levels[std::size_t(r - 1)].seq;
            json entry{{"level", r}, {"M", seq.M}};
            double logpoints = 0;
            for (std::int64_t i = 1; i < seq.M; ++i)
                logpoints += std::log2(double(grid.den() + i) / double(i));
            if (seq.M > 8 || logpoints > 21) {
                entry["skipped"] = "grid too large for this fan-out";
            } else {
                auto res = biased_mass_oracle(seq, zeta, grid);
                entry["pass"] = res.pass;
                entry["grid_points"] = res.grid_points;
                entry["min_count"] = res.min_count;
                entry["lemma_asserted"] = res.lemma_asserted;
                if (res.failing_lambda) {
                    json l = json::array();
                    for (const auto& x : res.failing_lambda->lambda) l.push_back(x.to_string());
                    entry["failing_lambda"] = l;
                }
                pass = pass && res.pass;
            }
            levels.push_back(std::move(entry));
        }
        suites["mass_splitting"] = json{{"pass", pass}, {"levels", levels}};
        all_pass = all_pass && pass;
    }

    { // half-density identity, exhaustive over (r, v, j)
        std::int64_t checks = 0, failures = 0;
        for (int r = 1; r <= params.s; ++r)
            for (std::int64_t v = 0; v < params.n; ++v)
                for (std::int32_t j = 0; j < t.m[std::size_t(r - 1)]; ++j) {
                    ++checks;
                    if (!half_density_check(t, g, r, v, j).ok) ++failures;
                }
        suites["half_density"] = json{{"pass", failures == 0},
                                      {"checks", checks},
                                      {"failures", failures}};
        all_pass = all_pass && failures == 0;
    }

    { // tail-density identity over (r, j, i) with one random Z each
        std::int64_t combos = 0;
        for (int r = 1; r <= params.s; ++r)
            combos += t.m[std::size_t(r - 1)] * t.m[std::size_t(r - 1)];
        std::int64_t checks = 0, failures = 0;
        auto run_one = [&](int r, std::int32_t j, std::int32_t i, std::uint64_t idx) {
            SplitMix64 rng(derive_seed(params.seed, "verify-tail", idx));
            std::int64_t cs = params.n / t.m[std::size_t(r - 1)];
            std::vector<std::int32_t> ids;
            while (ids.empty()) {
                ids.clear();
                for (std::int64_t v = i * cs; v < (i + 1) * cs; ++v)
                    if (rng.next() & 1) ids.push_back(std::int32_t(v));
            }
            ++checks;
            if (!tail_density_check(t, g, r, VertexSet::of(std::move(ids), params.n), j, i).ok)
                ++failures;
        };
        if (combos <= std::max<std::int64_t>(1000, trials)) {
            std::uint64_t idx = 0;
            for (int r = 1; r <= params.s; ++r) {
                std::int64_t mp = t.m[std::size_t(r - 1)];
                for (std::int32_t j = 0; j < mp; ++j)
                    for (std::int32_t i = 0; i < mp; ++i) run_one(r, j, i, idx++);
            }
        } else {
            for (std::int64_t k = 0; k < trials; ++k) {
                SplitMix64 rng(derive_seed(params.seed, "verify-tail-pick", std::uint64_t(k)));
                int r = 1 + int(rng.bounded(std::uint64_t(params.s)));
                std::int64_t mp = t.m[std::size_t(r - 1)];
                std::int32_t j = std::int32_t(rng.bounded(std::uint64_t(mp)));
                std::int32_t i = std::int32_t(rng.bounded(std::uint64_t(mp)));
                run_one(r, j, i, std::uint64_t(k) + (std::uint64_t(1) << 32));
            }
        }
        suites["tail_density"] = json{{"pass", failures == 0},
                                      {"checks", checks},
                                      {"failures", failures}};
        all_pass = all_pass && failures == 0;
    }

    { // sampling: determinism, weight-respect, inclusion frequency, deviation
        json entry = json::object();
        bool pass = true;

        auto s0 = sample_graph(g, derive_seed(params.seed, "verify-sample", 0));
        auto s0b = sample_graph(g, derive_seed(params.seed, "verify-sample", 0));
        auto s1 = sample_graph(g, derive_seed(params.seed, "verify-sample", 1));
        bool determinism = s0 == s0b && !(s0 == s1);
        entry["determinism"] = determinism;
        pass = pass && determinism;

        bool respect = true;
        for (int k = 0; k < 3 && respect; ++k) {
            auto sk = sample_graph(g, derive_seed(params.seed, "verify-sample", std::uint64_t(k)));
            for (std::int64_t u = 0; u < g.n() && respect; ++u)
                for (std::int64_t v = u + 1; v < g.n(); ++v) {
                    int c = g.count(u, v);
                    bool edge = sk.adj.test(u, v);
                    if (c == 0 && edge) { respect = false; break; }
                    if (std::int64_t(c) * g.delta().num() == g.delta().den() && !edge) {
                        respect = false;
                        break;
                    }
                }
        }
        entry["weight_respect"] = respect;
        pass = pass && respect;

        if (g.n() <= 400) {
            // inclusion frequency of the first fractional-weight pair
            std::int64_t fu = -1, fv = -1;
            for (std::int64_t u = 0; u < g.n() && fu < 0; ++u)
                for (std::int64_t v = u + 1; v < g.n(); ++v) {
                    std::int64_t cn = std::int64_t(g.count(u, v)) * g.delta().num();
                    if (cn > 0 && cn < g.delta().den()) { fu = u; fv = v; break; }
                }
            if (fu >= 0) {
                const std::int64_t reps = 4000;
                std::int64_t hits = 0;
                for (std::int64_t k = 0; k < reps; ++k) {
                    auto sk =
                        sample_graph(g, derive_seed(params.seed, "freq-seed", std::uint64_t(k)));
                    if (sk.adj.test(fu, fv)) ++hits;
                }
                double freq = double(hits) / double(reps);
                double p = double(g.count(fu, fv)) * g.delta().to_double();
                bool freq_ok = std::abs(freq - p) <= 0.02;
                entry["inclusion_frequency"] = json{{"pair", {fu, fv}},
                                                    {"expected", p},
                                                    {"observed", freq},
                                                    {"pass", freq_ok}};
                pass = pass && freq_ok;
            } else {
                entry["inclusion_frequency"] = "skipped: no fractional-weight pair";
            }
        } else {
            entry["inclusion_frequency"] = "skipped: n too large for the frequency sweep";
        }

        std::int64_t thr = o.get("threshold") ? parse_int_opt(o, "threshold", 0)
                                              : concentration_threshold(params.n, zeta);
        if (thr <= params.n) {
            auto sample = sample_graph(g, derive_seed(params.seed, "verify-audit-sample", 0));
            auto audit = deviation_audit_at(g, sample, zeta, thr, trials,
                                            derive_seed(params.seed, "verify-audit", 0), true);
            entry["deviation_audit"] = json{{"pass", audit.pass},
                                            {"threshold", audit.threshold},
                                            {"trials", audit.trials},
                                            {"max_deviation", rat_json(audit.max_deviation)},
                                            {"zeta", rat_json(zeta)}};
            pass = pass && audit.pass;
        } else {
            entry["deviation_audit"] = "skipped: n too small for zeta (threshold " +
                                       std::to_string(thr) + " exceeds n)";
        }

        suites["sampling"] = json{{"pass", pass}, {"detail", entry}};
        all_pass = all_pass && pass;
    }

    json result{{"pass", all_pass}, {"suites", suites}, {"params", params_json(params)}};
    emit_report("verify-lemmas",
                config_json(o, {"mode", "epsilon", "delta", "s", "kappa", "n", "seed", "zeta",
                                "grid-step", "trials", "max-retries", "threshold",
                                "report-out"}),
                result, o, out);
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------- demo

int cmd_demo(const RawOpts& o, std::ostream& out) {
    auto params = resolve_params(o);
    Rational eps = parse_rational_opt(o, "eps-audit", Rational(1, 100));
    std::int64_t trials = parse_int_opt(o, "trials", 50);
    std::int64_t retries = parse_int_opt(o, "max-retries", 100000);

    auto rep = lower_bound_demo(params, eps, trials, retries);
    bool pass = rep.identities_pass && rep.refinement_chain_pass && rep.all_coarse_levels_not_nice;

    json audits = json::array();
    for (const auto& a : rep.level_audits)
        audits.push_back(json{{"level", a.level},
                              {"parts", a.parts},
                              {"verdict", verdict_name(a.verdict)},
                              {"irregular_pairs", a.irregular_pairs},
                              {"allowance", rat_json(a.threshold)}});
    json result{{"pass", pass},
                {"params", params_json(rep.params)},
                {"eps_audit", rat_json(rep.eps_audit)},
                {"identities",
                 json{{"pass", rep.identities_pass},
                      {"half_density_checks", rep.half_density_checks},
                      {"half_density_failures", rep.half_density_failures},
                      {"tail_density_checks", rep.tail_density_checks},
                      {"tail_density_failures", rep.tail_density_failures}}},
                {"refinement_chain_pass", rep.refinement_chain_pass},
                {"level_audits", audits},
                {"all_coarse_levels_not_nice", rep.all_coarse_levels_not_nice},
                {"m_s", rep.m_s},
                {"min_parts_bound", rep.min_parts_bound},
                {"conclusion", rep.conclusion}};
    emit_report("demo",
                config_json(o, {"mode", "epsilon", "delta", "s", "kappa", "n", "seed",
                                "eps-audit", "trials", "max-retries", "report-out"}),
                result, o, out);
    return pass ? 0 : 1;
}

void add_param_flags(CLI::App* sub, RawOpts& o) {
    auto bind = [&o, sub](const std::string& name, const std::string& desc) {
        sub->add_option_function<std::string>(
               "--" + name, [&o, name](const std::string& v) { o.given[name] = v; }, desc)
            ->expected(1);
    };
    bind("mode", "coupled (epsilon drives delta and s) or custom (explicit delta/s)");
    bind("epsilon", "audit precision, rational num/den (coupled mode)");
    bind("delta", "level weight, rational num/den (custom mode)");
    bind("s", "number of levels (custom mode)");
    bind("kappa", "growth knob in the fan-out rule 2^ceil(m/kappa), default 512");
    bind("n", "number of vertices");
    bind("seed", "root seed, unsigned 64-bit, default 0");
    bind("max-retries", "generation attempts per level, default 100000");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"regforge: hard-instance generator and auditor for regularity partitions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RawOpts o;
    auto bind = [&o](CLI::App* sub, const std::string& name, const std::string& desc) {
        sub->add_option_function<std::string>(
               "--" + name, [&o, name](const std::string& v) { o.given[name] = v; }, desc)
            ->expected(1);
    };
    auto add_common = [&](CLI::App* sub) {
        bind(sub, "config", "key=value config file; flags override it");
        bind(sub, "threads", "OpenMP thread count");
        bind(sub, "report-out", "write the JSON report here instead of stdout");
    };

    auto* bounds = app.add_subcommand("bounds", "tower growth implied by an audit precision");
    bind(bounds, "epsilon", "audit precision, rational num/den");
    bind(bounds, "kappa", "growth knob, default 512");
    add_common(bounds);

    auto* gen_tower = app.add_subcommand("gen-tower", "generate a partition tower file");
    add_param_flags(gen_tower, o);
    bind(gen_tower, "out", "tower file path");
    add_common(gen_tower);

    auto* gen_graph = app.add_subcommand("gen-graph", "generate an instance graph file");
    add_param_flags(gen_graph, o);
    bind(gen_graph, "in", "existing tower file to build from");
    bind(gen_graph, "out", "graph file path");
    bind(gen_graph, "format", "matrix (full counts) or descriptor (parameters only)");
    add_common(gen_graph);

    auto* sample = app.add_subcommand("sample", "draw an unweighted sample of an instance");
    bind(sample, "in", "graph file");
    bind(sample, "out", "sample file path");
    bind(sample, "seed", "sampling seed");
    add_common(sample);

    auto* audit_pair = app.add_subcommand("audit-pair", "regularity audit of one set pair");
    bind(audit_pair, "in", "graph file");
    bind(audit_pair, "eps-audit", "regularity precision, rational");
    bind(audit_pair, "strategy", "exhaustive, canonical, or both");
    bind(audit_pair, "size-cap", "exhaustive enumeration cap per side, default 12");
    bind(audit_pair, "a", "comma-separated vertex ids of side A");
    bind(audit_pair, "b", "comma-separated vertex ids of side B");
    bind(audit_pair, "partition", "partition file (with --pair)");
    bind(audit_pair, "pair", "part indices 'p,q' into --partition");
    bind(audit_pair, "tower", "tower file (canonical strategy)");
    add_common(audit_pair);

    auto* audit_part = app.add_subcommand("audit-partition", "niceness audit of a partition");
    bind(audit_part, "in", "graph file");
    bind(audit_part, "partition", "partition file");
    bind(audit_part, "eps-audit", "niceness precision, rational");
    bind(audit_part, "strategy", "exhaustive, canonical, or both");
    bind(audit_part, "size-cap", "exhaustive enumeration cap per side, default 12");
    bind(audit_part, "tower", "tower file (canonical strategy)");
    add_common(audit_part);

    auto* verify = app.add_subcommand("verify-lemmas", "construction identity suites");
    add_param_flags(verify, o);
    bind(verify, "zeta", "mass/concentration parameter, default 1/20");
    bind(verify, "grid-step", "oracle grid step, default 1/20");
    bind(verify, "trials", "random trials per randomized suite, default 50");
    bind(verify, "threshold", "override the concentration subset size");
    add_common(verify);

    auto* demo = app.add_subcommand("demo", "end-to-end lower-bound demonstration");
    add_param_flags(demo, o);
    bind(demo, "eps-audit", "niceness precision, default 1/100");
    bind(demo, "trials", "random tail-identity trials, default 50");
    add_common(demo);

    try {
        std::vector<const char*> argv;
        argv.push_back("regforge");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(int(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help() << std::flush;
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (auto cfg = o.get("config")) load_config_file(*cfg, o);
#ifdef _OPENMP
        if (o.get("threads")) omp_set_num_threads(int(parse_int_opt(o, "threads", 1)));
#endif
        if (app.got_subcommand("bounds")) return cmd_bounds(o, out);
        if (app.got_subcommand("gen-tower")) return cmd_gen_tower(o, out);
        if (app.got_subcommand("gen-graph")) return cmd_gen_graph(o, out);
        if (app.got_subcommand("sample")) return cmd_sample(o, out);
        if (app.got_subcommand("audit-pair")) return cmd_audit_pair(o, out);
        if (app.got_subcommand("audit-partition")) return cmd_audit_partition(o, out);
        if (app.got_subcommand("verify-lemmas")) return cmd_verify_lemmas(o, out);
        if (app.got_subcommand("demo")) return cmd_demo(o, out);
        err << "error: no subcommand\n";
        return 2;
    } catch (const BalanceGenerationError& e) {
        err << "generation failed: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::overflow_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace regforge
