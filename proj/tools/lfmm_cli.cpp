// lfmm: command line front end for aggregation, detection, mixed membership,
// diversity and the synthetic benchmarks.
//
// Exit codes: 0 success, 1 conservation check failed, 2 input error.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include "lfmm/lfmm.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_check_failed = 1;
constexpr int exit_input_error = 2;

std::string sha256_file(const fs::path& path) {
    auto in = lfmm::io::open_input(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string data = buf.str();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw lfmm::InputError("cannot hash " + path.string());
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

/// Resolved configuration of one run; written as `manifest.txt` in the output
/// directory. Worker count is deliberately absent: it never changes outputs.
class Manifest {
public:
    explicit Manifest(std::string subcommand) : subcommand_(std::move(subcommand)) {}

    template <class T>
    void set(const std::string& key, const T& value) {
        std::ostringstream s;
        if constexpr (std::is_floating_point_v<T>)
            s << lfmm::format_number(value);
        else
            s << value;
        entries_[key] = s.str();
    }

    void input(const std::string& key, const fs::path& path) {
        if (!path.empty())
            entries_["input." + key] = "sha256:" + sha256_file(path);
    }

    void write(const fs::path& dir) const {
        auto out = lfmm::io::open_output(dir / "manifest.txt");
        out << "subcommand = " << subcommand_ << '\n';
        out << "version = " << lfmm::version << '\n';
        for (const auto& [k, v] : entries_)
            out << k << " = " << v << '\n';
    }

private:
    std::string subcommand_;
    std::map<std::string, std::string> entries_;
};

void prepare_out(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw lfmm::InputError("cannot create output directory " + dir.string() + ": " + ec.message());
}

lfmm::WeightedGraph read_graph(const std::string& edges, const std::string& diagonal) {
    return lfmm::load_graph(fs::path(edges), diagonal.empty() ? fs::path() : fs::path(diagonal));
}

// Reorders a graph whose node labels are a permutation of `labels`.
lfmm::WeightedGraph align_graph(const lfmm::WeightedGraph& h, const std::vector<std::string>& labels) {
    if (h.node_count() != labels.size())
        throw lfmm::InputError("supplied aggregated graph has " + std::to_string(h.node_count()) +
                               " nodes but the aggregation map has " + std::to_string(labels.size()) +
                               " sets");
    auto idx = lfmm::io::label_index(h);
    std::vector<std::size_t> to_new(h.node_count());
    std::vector<double> diag(labels.size());
    for (std::size_t x = 0; x < labels.size(); ++x) {
        auto it = idx.find(labels[x]);
        if (it == idx.end())
            throw lfmm::InputError("set '" + labels[x] + "' is missing from the supplied aggregated graph");
        to_new[it->second] = x;
        diag[x] = h.diagonal(it->second);
    }
    std::vector<lfmm::Edge> edges;
    for (const auto& e : h.edges())
        edges.push_back({to_new[e.u], to_new[e.v], e.weight});
    return lfmm::WeightedGraph(labels.size(), edges, std::move(diag), labels);
}

std::vector<std::string> graph_labels(const lfmm::WeightedGraph& g) {
    std::vector<std::string> out(g.node_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = g.label(i);
    return out;
}

struct MembershipTable {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> rows;
};

MembershipTable read_membership_csv(const fs::path& path) {
    auto in = lfmm::io::open_input(path);
    MembershipTable t;
    std::string line;
    std::size_t lineno = 0, width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        auto fields = lfmm::io::split(line, ',');
        if (width == 0) {
            if (fields.empty() || fields[0] != "node")
                throw lfmm::FormatError(path.string(), lineno, "expected header starting with 'node'");
            width = fields.size();
            continue;
        }
        if (fields.size() != width)
            throw lfmm::FormatError(path.string(), lineno, "row width does not match header");
        t.labels.emplace_back(fields[0]);
        std::vector<double> row;
        for (std::size_t k = 1; k < fields.size(); ++k) {
            double v = 0.0;
            auto f = fields[k];
            auto res = std::from_chars(f.data(), f.data() + f.size(), v);
            if (res.ec != std::errc() || res.ptr != f.data() + f.size())
                throw lfmm::FormatError(path.string(), lineno, "cannot parse '" + std::string(f) + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

// Flat `key = value` configuration with '#' comments.
std::map<std::string, std::string> read_config(const fs::path& path) {
    auto in = lfmm::io::open_input(path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw lfmm::FormatError(path.string(), lineno, "expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw lfmm::InputError("config key '" + key + "': cannot parse '" + v + "' as a number");
    return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw lfmm::InputError("config key '" + key + "': cannot parse '" + v + "' as an integer");
    return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    for (auto f : lfmm::io::split(v, ',')) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        out.push_back(parse_double(key, b == std::string_view::npos ? std::string() : std::string(f.substr(b, e - b + 1))));
    }
    return out;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + lfmm::format_number(v[i]);
    return s;
}

struct BenchConfig {
    lfmm::SbmConfig sbm;
    lfmm::DetectConfig detect;
    std::size_t replicates = 10;
    std::vector<double> mu_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
    std::vector<double> mixing_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
};

BenchConfig parse_bench_config(const std::map<std::string, std::string>& kv) {
    BenchConfig c;
    for (const auto& [k, v] : kv) {
        if (k == "nodes") c.sbm.nodes = parse_uint(k, v);
        else if (k == "communities") c.sbm.communities = parse_uint(k, v);
        else if (k == "mu") c.sbm.mu = parse_double(k, v);
        else if (k == "mean_degree") c.sbm.mean_degree = parse_double(k, v);
        else if (k == "sets") c.sbm.sets = parse_uint(k, v);
        else if (k == "mixing") c.sbm.mixing = parse_double(k, v);
        else if (k == "seed") c.sbm.seed = c.detect.seed = parse_uint(k, v);
        else if (k == "replicates") c.replicates = parse_uint(k, v);
        else if (k == "resolution") c.detect.resolution = parse_double(k, v);
        else if (k == "max_passes") c.detect.max_passes = static_cast<int>(parse_uint(k, v));
        else if (k == "mu_grid") c.mu_grid = parse_list(k, v);
        else if (k == "mixing_grid") c.mixing_grid = parse_list(k, v);
        else throw lfmm::InputError("unknown config key '" + k + "'");
    }
    if (c.replicates == 0)
        throw lfmm::InputError("replicates must be >= 1");
    c.detect.validate();
    return c;
}

void record(Manifest& m, const BenchConfig& c) {
    m.set("nodes", c.sbm.nodes);
    m.set("communities", c.sbm.communities);
    m.set("mu", c.sbm.mu);
    m.set("mean_degree", c.sbm.mean_degree);
    m.set("sets", c.sbm.sets);
    m.set("mixing", c.sbm.mixing);
    m.set("seed", c.sbm.seed);
    m.set("replicates", c.replicates);
    m.set("resolution", c.detect.resolution);
    m.set("max_passes", c.detect.max_passes);
}

lfmm::MembershipKind parse_kind(const std::string& s) {
    if (s == "raw") return lfmm::MembershipKind::raw;
    if (s == "node-normalized") return lfmm::MembershipKind::node_normalized;
    if (s == "aggregate-normalized") return lfmm::MembershipKind::aggregate_normalized;
    if (s == "diffusion") return lfmm::MembershipKind::diffusion;
    throw lfmm::InputError("unknown membership kind '" + s + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link-fraction mixed membership on aggregated networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(lfmm::version));

    std::string edges, diagonal, partition, aggregation, out_dir, sizes, spatial, membership_csv,
        agg_edges, agg_diagonal, config_path, bench_kind;
    std::string kind = "node-normalized";
    std::string gravity_fit = "poisson";
    double resolution = 1.0, tolerance = 1e-9, theta = 0.5, sigma_floor = 1e-12;
    std::uint64_t seed = 0;
    int max_passes = 100, steps = 1, samples = 100;
    std::optional<double> beta;
    std::size_t jobs = 1;
    bool redetect = false;

    auto add_graph = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("--edges", edges, "edge list (src<TAB>dst<TAB>weight)")->check(CLI::ExistingFile);
        if (required)
            opt->required();
        sub->add_option("--diagonal", diagonal, "diagonal masses (node<TAB>diagonal_mass)")->check(CLI::ExistingFile);
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out_dir, "output directory")->required(); };

    auto* agg = app.add_subcommand("aggregate", "collapse a graph by a node -> set partition");
    add_graph(agg, true);
    agg->add_option("--partition", partition, "node<TAB>set_id")->required()->check(CLI::ExistingFile);
    add_out(agg);

    auto* det = app.add_subcommand("detect", "Leiden community detection (RB Potts quality)");
    add_graph(det, true);
    det->add_option("--resolution", resolution)->check(CLI::PositiveNumber);
    det->add_option("--seed", seed);
    det->add_option("--max-passes", max_passes)->check(CLI::PositiveNumber);
    add_out(det);

    auto* mem = app.add_subcommand("membership", "mixed membership table");
    add_graph(mem, true);
    mem->add_option("--partition", partition, "node<TAB>community")->required()->check(CLI::ExistingFile);
    mem->add_option("--kind", kind, "raw | node-normalized | aggregate-normalized | diffusion");
    mem->add_option("--t", steps, "diffusion steps")->check(CLI::Range(1, lfmm::max_diffusion_steps));
    mem->add_option("--sizes", sizes, "node<TAB>size, for aggregate-normalized")->check(CLI::ExistingFile);
    add_out(mem);

    auto* div = app.add_subcommand("diversity", "Gini-Simpson diversity and gravity-null z-scores");
    add_graph(div, false);
    div->add_option("--partition", partition, "node<TAB>community")->check(CLI::ExistingFile);
    div->add_option("--membership", membership_csv, "membership table (GSI only)")->check(CLI::ExistingFile);
    div->add_option("--spatial", spatial, "set_id<TAB>x<TAB>y<TAB>population")->check(CLI::ExistingFile);
    div->add_option("--beta", beta, "gravity exponent (fitted when omitted)");
    div->add_option("--fit", gravity_fit, "poisson | ols, estimator for an omitted --beta");
    div->add_option("--samples", samples)->check(CLI::Range(2, 1 << 24));
    div->add_option("--seed", seed);
    div->add_option("--theta", theta, "self distance factor");
    div->add_option("--sigma-floor", sigma_floor);
    div->add_option("--resolution", resolution, "resolution for --redetect")->check(CLI::PositiveNumber);
    div->add_flag("--redetect", redetect, "re-detect communities on every null sample");
    div->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    add_out(div);

    auto* bench = app.add_subcommand("bench", "synthetic SBM benchmarks");
    bench->add_option("experiment", bench_kind, "consistency | heatmap")
        ->required()
        ->check(CLI::IsMember({"consistency", "heatmap"}));
    bench->add_option("--config", config_path, "flat key = value config")->check(CLI::ExistingFile);
    bench->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    add_out(bench);

    auto* chk = app.add_subcommand("check", "verify membership conservation under aggregation");
    add_graph(chk, true);
    chk->add_option("--aggregation", aggregation, "node<TAB>set_id")->required()->check(CLI::ExistingFile);
    chk->add_option("--partition", partition, "set_id<TAB>community")->required()->check(CLI::ExistingFile);
    chk->add_option("--aggregate-edges", agg_edges, "aggregated edge list to verify")->check(CLI::ExistingFile);
    chk->add_option("--aggregate-diagonal", agg_diagonal)->check(CLI::ExistingFile);
    chk->add_option("--tolerance", tolerance, "relative tolerance")->check(CLI::NonNegativeNumber);
    add_out(chk);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_input_error;
    }

    try {
        const fs::path out(out_dir);
        prepare_out(out);

        if (agg->parsed()) {
            Manifest m("aggregate");
            auto g = read_graph(edges, diagonal);
            auto a = lfmm::load_aggregation_map(fs::path(partition), g);
            auto h = lfmm::aggregate(g, a);
            lfmm::save_graph(h, out / "edges.tsv", out / "diagonal.tsv");
            m.input("edges", edges);
            m.input("diagonal", diagonal);
            m.input("partition", partition);
            m.write(out);
            std::cout << "sets: " << h.node_count() << "\n";
        } else if (det->parsed()) {
            Manifest m("detect");
            auto g = read_graph(edges, diagonal);
            lfmm::DetectConfig cfg{resolution, seed, max_passes};
            auto res = lfmm::leiden(g, cfg);
            auto f = lfmm::io::open_output(out / "partition.tsv");
            lfmm::save_partition(g, res.communities, f);
            m.set("resolution", resolution);
            m.set("seed", seed);
            m.set("max_passes", max_passes);
            m.input("edges", edges);
            m.input("diagonal", diagonal);
            m.write(out);
            std::cout << "communities: " << res.communities.community_count() << "\n"
                      << "quality: " << lfmm::format_number(res.quality) << "\n";
        } else if (mem->parsed()) {
            Manifest m("membership");
            auto g = read_graph(edges, diagonal);
            auto c = lfmm::load_partition(fs::path(partition), g);
            const auto k = parse_kind(kind);
            lfmm::MembershipMatrix result;
            switch (k) {
            case lfmm::MembershipKind::raw: result = lfmm::raw_membership(g, c); break;
            case lfmm::MembershipKind::node_normalized:
                result = lfmm::normalize_node(lfmm::raw_membership(g, c));
                break;
            case lfmm::MembershipKind::aggregate_normalized: {
                if (sizes.empty())
                    throw lfmm::InputError("--kind aggregate-normalized requires --sizes");
                auto in = lfmm::io::open_input(sizes);
                auto text = lfmm::io::read_node_column(in, sizes, g, "size");
                std::vector<std::size_t> set_sizes;
                for (const auto& t : text) {
                    const auto v = parse_uint("size", t);
                    if (v == 0)
                        throw lfmm::InputError(sizes + ": set sizes must be >= 1");
                    set_sizes.push_back(v);
                }
                result = lfmm::normalize_aggregate(lfmm::raw_membership(g, c), set_sizes);
                m.input("sizes", sizes);
                break;
            }
            case lfmm::MembershipKind::diffusion:
                result = lfmm::diffusion_membership(g, c, steps);
                m.set("t", steps);
                break;
            }
            auto f = lfmm::io::open_output(out / "membership.csv");
            lfmm::write_membership(f, g, c, result);
            m.set("kind", kind);
            m.input("edges", edges);
            m.input("diagonal", diagonal);
            m.input("partition", partition);
            m.write(out);
            for (auto z : result.zero_rows())
                std::cerr << "zero-strength node: " << g.label(z) << "\n";
        } else if (div->parsed()) {
            Manifest m("diversity");
            auto f = lfmm::io::open_output(out / "diversity.csv");
            if (!membership_csv.empty()) {
                if (!spatial.empty())
                    throw lfmm::InputError("the gravity null model needs --edges and --partition, not --membership");
                auto t = read_membership_csv(membership_csv);
                std::vector<lfmm::DiversityRow> rows(t.rows.size());
                for (std::size_t i = 0; i < rows.size(); ++i)
                    rows[i].gsi = lfmm::gsi(t.rows[i]);
                lfmm::write_diversity(f, t.labels, rows, false);
                m.input("membership", membership_csv);
            } else {
                if (edges.empty() || partition.empty())
                    throw lfmm::InputError("diversity needs --membership or --edges with --partition");
                auto g = read_graph(edges, diagonal);
                auto c = lfmm::load_partition(fs::path(partition), g);
                m.input("edges", edges);
                m.input("diagonal", diagonal);
                m.input("partition", partition);
                const auto labels = graph_labels(g);
                if (spatial.empty()) {
                    auto values = lfmm::gsi_rows(lfmm::normalize_node(lfmm::raw_membership(g, c)));
                    std::vector<lfmm::DiversityRow> rows(values.size());
                    for (std::size_t i = 0; i < rows.size(); ++i)
                        rows[i].gsi = values[i];
                    lfmm::write_diversity(f, labels, rows, false);
                } else {
                    auto sin = lfmm::io::open_input(spatial);
                    auto s = lfmm::load_spatial(sin, spatial, g);
                    lfmm::GravityConfig cfg;
                    cfg.beta = beta;
                    cfg.fit = lfmm::parse_gravity_fit(gravity_fit);
                    cfg.samples = samples;
                    cfg.seed = seed;
                    cfg.self_distance_factor = theta;
                    cfg.sigma_floor = sigma_floor;
                    cfg.jobs = jobs;
                    cfg.redetect = redetect;
                    cfg.detect.resolution = resolution;
                    auto res = lfmm::null_diversity(g, c, s, cfg);
                    lfmm::write_diversity(f, labels, res.rows, true);
                    m.input("spatial", spatial);
                    m.set("beta", beta ? lfmm::format_number(*beta) : std::string("fit"));
                    if (!beta)
                        m.set("fit", gravity_fit);
                    m.set("fitted_beta", res.model.beta);
                    m.set("fitted_kappa", res.model.kappa);
                    m.set("samples", samples);
                    m.set("seed", seed);
                    m.set("theta", theta);
                    m.set("sigma_floor", sigma_floor);
                    m.set("redetect", redetect ? "true" : "false");
                    if (redetect)
                        m.set("resolution", resolution);
                }
            }
            m.write(out);
        } else if (bench->parsed()) {
            Manifest m("bench " + bench_kind);
            auto cfg = config_path.empty() ? BenchConfig{} : parse_bench_config(read_config(config_path));
            record(m, cfg);
            m.input("config", config_path);
            if (bench_kind == "consistency") {
                auto runs = lfmm::run_consistency_replicates(cfg.sbm, cfg.detect, cfg.replicates, jobs);
                auto summary = lfmm::io::open_output(out / "summary.csv");
                summary << "replicate,r_blue,r_orange,r_green,blue_max_rel,minority_bias,"
                           "aggregate_communities,individual_communities,p_in,p_out\n";
                for (std::size_t k = 0; k < runs.size(); ++k) {
                    const auto& r = runs[k];
                    auto f = lfmm::io::open_output(out / ("scatter_" + std::to_string(k) + ".csv"));
                    lfmm::write_scatter(f, r);
                    summary << k << ',' << lfmm::format_number(r.r_blue) << ','
                            << lfmm::format_number(r.r_orange) << ',' << lfmm::format_number(r.r_green)
                            << ',' << lfmm::format_number(r.blue_max_abs / r.max_strength) << ','
                            << lfmm::format_number(r.minority_bias) << ',' << r.aggregate_communities
                            << ',' << r.individual_communities << ',' << lfmm::format_number(r.p_in)
                            << ',' << lfmm::format_number(r.p_out) << '\n';
                    std::cout << "replicate " << k << ": r_blue=" << lfmm::format_number(r.r_blue)
                              << " r_orange=" << lfmm::format_number(r.r_orange)
                              << " r_green=" << lfmm::format_number(r.r_green)
                              << " p_in=" << lfmm::format_number(r.p_in)
                              << " p_out=" << lfmm::format_number(r.p_out) << "\n";
                }
            } else {
                auto res = lfmm::run_heatmap_experiment(cfg.mu_grid, cfg.mixing_grid, cfg.sbm,
                                                        cfg.replicates, jobs);
                auto f = lfmm::io::open_output(out / "grid.csv");
                lfmm::write_grid(f, res);
                m.set("mu_grid", join(cfg.mu_grid));
                m.set("mixing_grid", join(cfg.mixing_grid));
                m.set("cell_statistic",
                      "mean unit-share membership outside the planted community each set is aligned with, "
                      "pooled over sets and replicates");
            }
            m.write(out);
        } else if (chk->parsed()) {
            Manifest m("check");
            auto g = read_graph(edges, diagonal);
            auto a = lfmm::load_aggregation_map(fs::path(aggregation), g);
            auto computed = lfmm::aggregate(g, a);
            lfmm::WeightedGraph h = computed;
            if (!agg_edges.empty())
                h = align_graph(read_graph(agg_edges, agg_diagonal), graph_labels(computed));
            auto c = lfmm::load_partition(fs::path(partition), computed);
            auto rep = lfmm::conservation_check(g, h, a, c);

            auto f = lfmm::io::open_output(out / "report.csv");
            f << "set,community,direct,summed,abs_diff\n";
            for (auto x : lfmm::io::label_order(h))
                for (std::size_t k = 0; k < c.community_count(); ++k)
                    f << h.label(x) << ',' << c.name(k) << ',' << lfmm::format_number(rep.direct(x, k))
                      << ',' << lfmm::format_number(rep.summed(x, k)) << ','
                      << lfmm::format_number(std::abs(rep.direct(x, k) - rep.summed(x, k))) << '\n';
            m.set("tolerance", tolerance);
            m.input("edges", edges);
            m.input("diagonal", diagonal);
            m.input("aggregation", aggregation);
            m.input("partition", partition);
            m.input("aggregate_edges", agg_edges);
            m.input("aggregate_diagonal", agg_diagonal);
            m.write(out);
            std::cout << "max discrepancy: " << lfmm::format_number(rep.max_abs_discrepancy)
                      << " (relative " << lfmm::format_number(rep.relative_discrepancy()) << ")\n";
            if (rep.relative_discrepancy() > tolerance) {
                std::cerr << "conservation violated; worst set: " << h.label(rep.worst_set) << "\n";
                return exit_check_failed;
            }
        }
    } catch (const lfmm::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const lfmm::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return 0;
}
