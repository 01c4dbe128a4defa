#include "regforge/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace regforge {

namespace {

[[noreturn]] void bad(const std::string& kind, const std::string& detail) {
    throw std::runtime_error("malformed " + kind + " file: " + detail);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return f;
}

// parses "key=value" tokens from a header line after fixed magic words
class KvLine {
public:
    KvLine(const std::string& line, const std::string& kind) : kind_(kind) {
        std::istringstream ss(line);
        std::string tok;
        while (ss >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) words_.push_back(tok);
            else kv_[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
    }
    void expect_magic(const std::string& magic, const std::string& version) const {
        if (words_.size() < 2 || words_[0] != magic || words_[1] != version)
            bad(kind_, "expected header '" + magic + " " + version + "'");
    }
    std::string get(const std::string& key) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) bad(kind_, "missing header field '" + key + "'");
        return it->second;
    }
    std::int64_t get_int(const std::string& key) const {
        std::string v = get(key);
        try {
            return std::stoll(v);
        } catch (const std::exception&) {
            bad(kind_, "field '" + key + "' is not an integer");
        }
    }
    std::uint64_t get_u64(const std::string& key) const {
        std::string v = get(key);
        try {
            return std::stoull(v);
        } catch (const std::exception&) {
            bad(kind_, "field '" + key + "' is not an unsigned integer");
        }
    }
    Rational get_rational(const std::string& key) const {
        std::string v = get(key);
        try {
            return Rational::parse(v);
        } catch (const std::exception& e) {
            bad(kind_, "field '" + key + "': " + e.what());
        }
    }

private:
    std::string kind_;
    std::vector<std::string> words_;
    std::map<std::string, std::string> kv_;
};

std::string read_header_line(std::istream& in, const std::string& kind) {
    std::string line;
    if (!std::getline(in, line)) bad(kind, "empty file");
    return line;
}

std::string params_line(const ConstructionParams& p) {
    std::ostringstream ss;
    ss << "mode=" << (p.mode == BuildMode::coupled ? "coupled" : "custom")
       << " epsilon=" << (p.epsilon ? p.epsilon->to_string() : std::string("none"))
       << " delta=" << p.delta.to_string() << " s=" << p.s << " kappa=" << p.kappa
       << " n=" << p.n << " seed=" << p.seed;
    return ss.str();
}

ConstructionParams parse_params(const KvLine& kv, const std::string& kind) {
    std::string mode = kv.get("mode");
    std::string eps = kv.get("epsilon");
    Rational delta = kv.get_rational("delta");
    int s = int(kv.get_int("s"));
    std::int64_t kappa = kv.get_int("kappa");
    std::int64_t n = kv.get_int("n");
    std::uint64_t seed = kv.get_u64("seed");
    std::optional<Rational> epsilon;
    if (eps != "none") {
        try {
            epsilon = Rational::parse(eps);
        } catch (const std::exception& e) {
            bad(kind, std::string("epsilon: ") + e.what());
        }
    }
    try {
        if (mode == "coupled") {
            if (!epsilon) bad(kind, "coupled mode without epsilon");
            auto p = ConstructionParams::coupled(*epsilon, n, seed, kappa);
            if (!(p.delta == delta) || p.s != s)
                bad(kind, "stored delta/s disagree with coupled derivation");
            return p;
        }
        if (mode == "custom") return ConstructionParams::custom(delta, s, kappa, n, seed, epsilon);
    } catch (const std::invalid_argument& e) {
        bad(kind, e.what());
    }
    bad(kind, "unknown mode '" + mode + "'");
}

} // namespace

void write_graph_matrix(const std::string& path, const LevelWeightedGraph& g) {
    auto f = open_out(path);
    f << "REGFORGE-GRAPH v1 n=" << g.n() << " s=" << g.s()
      << " delta=" << g.delta().to_string() << "\n";
    for (std::int64_t u = 0; u < g.n(); ++u) {
        for (std::int64_t v = 0; v < g.n(); ++v) {
            if (v) f << ' ';
            f << g.count(u, v);
        }
        f << "\n";
    }
}

void write_graph_descriptor(const std::string& path, const ConstructionParams& p) {
    auto f = open_out(path);
    f << "REGFORGE-GRAPHDESC v1 " << params_line(p) << "\n";
}

LevelWeightedGraph read_graph(const std::string& path) {
    auto f = open_in(path);
    std::string header = read_header_line(f, "graph");
    if (header.rfind("REGFORGE-GRAPHDESC", 0) == 0) {
        KvLine kv(header, "graph descriptor");
        kv.expect_magic("REGFORGE-GRAPHDESC", "v1");
        auto params = parse_params(kv, "graph descriptor");
        return build_instance(build_tower(params));
    }
    KvLine kv(header, "graph");
    kv.expect_magic("REGFORGE-GRAPH", "v1");
    std::int64_t n = kv.get_int("n");
    std::int64_t s = kv.get_int("s");
    Rational delta = kv.get_rational("delta");
    if (n <= 0 || s <= 0 || s > 65535) bad("graph", "bad dimensions");
    std::vector<std::uint16_t> counts(std::size_t(n) * std::size_t(n));
    for (std::int64_t u = 0; u < n; ++u)
        for (std::int64_t v = 0; v < n; ++v) {
            long long c;
            if (!(f >> c)) bad("graph", "count matrix truncated");
            if (c < 0 || c > s) bad("graph", "count out of range");
            counts[std::size_t(u * n + v)] = std::uint16_t(c);
        }
    long long extra;
    if (f >> extra) bad("graph", "trailing data");
    try {
        return LevelWeightedGraph::from_counts(n, int(s), delta, std::move(counts));
    } catch (const std::invalid_argument& e) {
        bad("graph", e.what());
    }
}

void write_biseq(const std::string& path, const BipartitionSequence& s) {
    auto f = open_out(path);
    f << "REGFORGE-BISEQ v1 m=" << s.m << " M=" << s.M << " c=" << s.c.to_string() << "\n";
    for (const auto& p : s.parts) {
        std::string bits(std::size_t(s.M), '0');
        for (std::int64_t t = 0; t < s.M; ++t)
            if (p.in_a(t)) bits[std::size_t(t)] = '1';
        f << bits << "\n";
    }
}

BipartitionSequence read_biseq(const std::string& path) {
    auto f = open_in(path);
    KvLine kv(read_header_line(f, "sequence"), "sequence");
    kv.expect_magic("REGFORGE-BISEQ", "v1");
    std::int64_t m = kv.get_int("m"), M = kv.get_int("M");
    Rational c = kv.get_rational("c");
    if (m <= 0 || M <= 0) bad("sequence", "bad dimensions");
    std::vector<Bipartition> parts;
    parts.reserve(std::size_t(m));
    std::string bits;
    for (std::int64_t i = 0; i < m; ++i) {
        if (!(f >> bits)) bad("sequence", "bitstring block truncated");
        if (std::int64_t(bits.size()) != M) bad("sequence", "bitstring length mismatch");
        std::vector<std::uint8_t> side(static_cast<std::size_t>(M));
        for (std::int64_t t = 0; t < M; ++t) {
            char ch = bits[std::size_t(t)];
            if (ch != '0' && ch != '1') bad("sequence", "bitstring has non-binary character");
            side[std::size_t(t)] = ch == '1' ? 1 : 0;
        }
        try {
            parts.push_back(Bipartition::from_sides(std::move(side)));
        } catch (const std::invalid_argument& e) {
            bad("sequence", e.what());
        }
    }
    if (f >> bits) bad("sequence", "trailing data");
    auto seq = BipartitionSequence::of(std::move(parts), c);
    seq.verified = is_balanced(seq, c).balanced;
    return seq;
}

void write_tower(const std::string& path, const PartitionTower& t) {
    auto f = open_out(path);
    f << "REGFORGE-TOWER v1\n";
    f << "params " << params_line(t.params) << "\n";
    for (int r = 1; r <= t.params.s; ++r) {
        const auto& level = t.levels[std::size_t(r - 1)];
        f << "level " << r << " M=" << level.M << "\n";
        for (const auto& p : level.seq.parts) {
            std::string bits(std::size_t(level.M), '0');
            for (std::int64_t x = 0; x < level.M; ++x)
                if (p.in_a(x)) bits[std::size_t(x)] = '1';
            f << bits << "\n";
        }
    }
}

PartitionTower read_tower(const std::string& path) {
    auto f = open_in(path);
    std::string line = read_header_line(f, "tower");
    {
        KvLine kv(line, "tower");
        kv.expect_magic("REGFORGE-TOWER", "v1");
    }
    if (!std::getline(f, line) || line.rfind("params ", 0) != 0)
        bad("tower", "missing params line");
    KvLine pkv(line, "tower");
    PartitionTower t;
    t.params = parse_params(pkv, "tower");

    t.m.push_back(1);
    for (int r = 1; r <= t.params.s; ++r) {
        if (!std::getline(f, line)) bad("tower", "missing level " + std::to_string(r));
        KvLine lkv(line, "tower");
        std::istringstream ss(line);
        std::string word;
        std::int64_t level_no = -1;
        ss >> word >> level_no;
        if (word != "level" || level_no != r)
            bad("tower", "expected 'level " + std::to_string(r) + "'");
        std::int64_t M = lkv.get_int("M");
        std::int64_t m_prev = t.m.back();
        std::int64_t exp = (m_prev + t.params.kappa - 1) / t.params.kappa;
        if (exp > 20 || m_prev > (std::int64_t(1) << 20))
            bad("tower", "materialization cap exceeded");
        std::int64_t expected_M = std::int64_t(1) << exp;
        if (M != expected_M) bad("tower", "level fan-out disagrees with the growth rule");
        std::vector<Bipartition> parts;
        parts.reserve(std::size_t(m_prev));
        for (std::int64_t i = 0; i < m_prev; ++i) {
            std::string bits;
            if (!(f >> bits)) bad("tower", "level " + std::to_string(r) + " truncated");
            if (std::int64_t(bits.size()) != M) bad("tower", "bitstring length mismatch");
            std::vector<std::uint8_t> side(static_cast<std::size_t>(M));
            for (std::int64_t x = 0; x < M; ++x) {
                char ch = bits[std::size_t(x)];
                if (ch != '0' && ch != '1') bad("tower", "bitstring has non-binary character");
                side[std::size_t(x)] = ch == '1' ? 1 : 0;
            }
            try {
                parts.push_back(Bipartition::from_sides(std::move(side)));
            } catch (const std::invalid_argument& e) {
                bad("tower", e.what());
            }
        }
        f >> std::ws;
        TowerLevel level;
        level.M = M;
        level.seq = BipartitionSequence::of(std::move(parts), Rational(1, 16));
        level.seq.verified = is_balanced(level.seq, Rational(1, 16)).balanced;
        t.levels.push_back(std::move(level));
        t.m.push_back(m_prev * M);
    }
    std::string extra;
    if (f >> extra) bad("tower", "trailing data");
    if (t.params.n % t.m.back() != 0) bad("tower", "n is not a multiple of m_s");
    return t;
}

void write_sample(const std::string& path, const SampledGraph& s) {
    auto f = open_out(path);
    f << "REGFORGE-SAMPLE v1 n=" << s.n << " seed=" << s.seed << "\n";
    for (std::int64_t u = 0; u < s.n; ++u)
        for (std::int64_t v = u + 1; v < s.n; ++v)
            if (s.adj.test(u, v)) f << u << ' ' << v << "\n";
}

SampledGraph read_sample(const std::string& path) {
    auto f = open_in(path);
    KvLine kv(read_header_line(f, "sample"), "sample");
    kv.expect_magic("REGFORGE-SAMPLE", "v1");
    SampledGraph s;
    s.n = kv.get_int("n");
    s.seed = kv.get_u64("seed");
    if (s.n <= 0) bad("sample", "bad size");
    s.adj = BitMatrix(s.n);
    std::int64_t u, v;
    while (f >> u >> v) {
        if (u < 0 || v <= u || v >= s.n) bad("sample", "edge out of order or range");
        if (s.adj.test(u, v)) bad("sample", "duplicate edge");
        s.adj.set(u, v);
        s.adj.set(v, u);
        ++s.edges;
    }
    if (!f.eof() && f.fail()) bad("sample", "non-numeric edge data");
    return s;
}

void write_partition(const std::string& path, const Equipartition& p) {
    auto f = open_out(path);
    f << "REGFORGE-PART v1 n=" << p.n() << " k=" << p.k() << "\n";
    for (std::int64_t v = 0; v < p.n(); ++v) f << p.part_of(v) << "\n";
}

Equipartition read_partition(const std::string& path) {
    auto f = open_in(path);
    KvLine kv(read_header_line(f, "partition"), "partition");
    kv.expect_magic("REGFORGE-PART", "v1");
    std::int64_t n = kv.get_int("n"), k = kv.get_int("k");
    if (n <= 0 || k <= 0) bad("partition", "bad dimensions");
    std::vector<std::int32_t> part(static_cast<std::size_t>(n));
    for (std::int64_t v = 0; v < n; ++v) {
        long long x;
        if (!(f >> x)) bad("partition", "assignment truncated");
        part[std::size_t(v)] = std::int32_t(x);
    }
    long long extra;
    if (f >> extra) bad("partition", "trailing data");
    try {
        return Equipartition(n, k, std::move(part));
    } catch (const std::invalid_argument& e) {
        bad("partition", e.what());
    }
}

} // namespace regforge
