#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lfmm/aggregation.hpp"
#include "lfmm/error.hpp"
#include "lfmm/graph.hpp"

namespace lfmm {

/// Shortest decimal that parses back to exactly `v`.
inline std::string format_number(double v) {
    if (std::isnan(v))
        return "NA";
    if (v == 0.0)
        return "0"; // collapses -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

namespace io {

struct Row {
    std::size_t line;
    std::vector<std::string_view> fields;
};

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

/// Tab-separated table: blank lines and lines starting with '#' are skipped;
/// a first row whose leading field matches the header's is taken as the
/// header. Each row must have exactly `header.size()` fields.
class Table {
public:
    Table(std::istream& in, std::string source, std::vector<std::string> header)
        : source_(std::move(source)) {
        std::string line;
        std::size_t lineno = 0;
        bool first = true;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.empty() || line.front() == '#')
                continue;
            lines_.push_back({lineno, std::move(line)});
            auto& stored = lines_.back().second;
            auto fields = split(stored, '\t');
            if (first) {
                first = false;
                if (fields.size() == header.size() && fields[0] == header[0]) {
                    lines_.pop_back();
                    continue;
                }
            }
            if (fields.size() != header.size())
                throw FormatError(source_, lineno,
                                  "expected " + std::to_string(header.size()) + " fields, got " +
                                      std::to_string(fields.size()));
        }
        rows_.reserve(lines_.size());
        for (const auto& [no, text] : lines_)
            rows_.push_back({no, split(text, '\t')});
    }

    const std::vector<Row>& rows() const noexcept { return rows_; }
    const std::string& source() const noexcept { return source_; }

    double number(const Row& row, std::size_t col) const {
        auto f = row.fields[col];
        double v = 0.0;
        auto res = std::from_chars(f.data(), f.data() + f.size(), v);
        if (res.ec != std::errc() || res.ptr != f.data() + f.size() || !std::isfinite(v))
            throw FormatError(source_, row.line, "cannot parse '" + std::string(f) + "' as a finite number");
        return v;
    }

private:
    std::string source_;
    std::vector<std::pair<std::size_t, std::string>> lines_;
    std::vector<Row> rows_;
};

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string() + " for reading");
    return in;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot open " + path.string() + " for writing");
    return out;
}

inline std::unordered_map<std::string, NodeIndex> label_index(const WeightedGraph& g) {
    std::unordered_map<std::string, NodeIndex> idx;
    for (NodeIndex i = 0; i < g.node_count(); ++i)
        idx.emplace(g.label(i), i);
    return idx;
}

/// Node indices ordered by external label.
inline std::vector<NodeIndex> label_order(const WeightedGraph& g) {
    std::vector<NodeIndex> order(g.node_count());
    for (NodeIndex i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](NodeIndex a, NodeIndex b) { return g.label(a) < g.label(b); });
    return order;
}

/// Reads `node<TAB>value` rows keyed by the graph's labels; every node must
/// appear exactly once.
inline std::vector<std::string> read_node_column(std::istream& in, const std::string& source,
                                                 const WeightedGraph& g,
                                                 const std::string& value_header) {
    Table t(in, source, {"node", value_header});
    auto idx = label_index(g);
    std::vector<std::string> values(g.node_count());
    std::vector<bool> seen(g.node_count(), false);
    for (const auto& row : t.rows()) {
        std::string node(row.fields[0]);
        auto it = idx.find(node);
        if (it == idx.end())
            throw FormatError(source, row.line, "unknown node '" + node + "'");
        if (seen[it->second])
            throw FormatError(source, row.line, "duplicate row for node '" + node + "'");
        seen[it->second] = true;
        values[it->second] = std::string(row.fields[1]);
    }
    for (NodeIndex i = 0; i < g.node_count(); ++i)
        if (!seen[i])
            throw InputError(source + ": missing row for node '" + g.label(i) + "'");
    return values;
}

/// Compacts string ids to [0, k) in node-index order of first appearance.
inline std::pair<std::vector<std::size_t>, std::vector<std::string>>
compact_ids(const std::vector<std::string>& ids) {
    std::unordered_map<std::string, std::size_t> table;
    std::vector<std::string> names;
    std::vector<std::size_t> out(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto [it, inserted] = table.try_emplace(ids[i], names.size());
        if (inserted)
            names.push_back(ids[i]);
        out[i] = it->second;
    }
    return {std::move(out), std::move(names)};
}

} // namespace io

/// Parses an edge list (`src\tdst\tweight`) and an optional diagonal file
/// (`node\tdiagonal_mass`). Nodes listed in the diagonal file take the first
/// dense indices in row order; remaining nodes follow in order of first
/// appearance in the edge list.
inline WeightedGraph load_graph(std::istream& edges, const std::string& edge_source,
                                std::istream* diagonal = nullptr,
                                const std::string& diagonal_source = "diagonal") {
    std::unordered_map<std::string, NodeIndex> index;
    std::vector<std::string> labels;
    std::vector<double> diag;
    auto intern = [&](std::string_view id) {
        auto [it, inserted] = index.try_emplace(std::string(id), labels.size());
        if (inserted) {
            labels.emplace_back(id);
            diag.push_back(0.0);
        }
        return it->second;
    };

    if (diagonal != nullptr) {
        io::Table t(*diagonal, diagonal_source, {"node", "diagonal_mass"});
        for (const auto& row : t.rows()) {
            const auto before = labels.size();
            auto i = intern(row.fields[0]);
            if (labels.size() == before)
                throw FormatError(diagonal_source, row.line,
                                  "duplicate diagonal row for node '" + std::string(row.fields[0]) + "'");
            double d = t.number(row, 1);
            if (d < 0.0)
                throw FormatError(diagonal_source, row.line, "diagonal mass must be >= 0");
            diag[i] = d;
        }
    }

    io::Table t(edges, edge_source, {"src", "dst", "weight"});
    std::vector<Edge> list;
    list.reserve(t.rows().size());
    for (const auto& row : t.rows()) {
        if (row.fields[0] == row.fields[1])
            throw FormatError(edge_source, row.line,
                              "self pair for node '" + std::string(row.fields[0]) +
                                  "'; put self-connection mass in the diagonal file");
        double w = t.number(row, 2);
        if (w <= 0.0)
            throw FormatError(edge_source, row.line, "edge weight must be > 0");
        auto u = intern(row.fields[0]);
        auto v = intern(row.fields[1]);
        list.push_back({u, v, w});
    }
    if (labels.empty())
        throw InputError(edge_source + ": graph has no nodes");
    const auto n = labels.size();
    return WeightedGraph(n, list, std::move(diag), std::move(labels));
}

inline WeightedGraph load_graph(const std::filesystem::path& edge_path,
                                const std::filesystem::path& diagonal_path = {}) {
    auto edges = io::open_input(edge_path);
    if (diagonal_path.empty())
        return load_graph(edges, edge_path.string());
    auto diag = io::open_input(diagonal_path);
    return load_graph(edges, edge_path.string(), &diag, diagonal_path.string());
}

/// Writes one edge row per unordered pair and one diagonal row per node, both
/// in dense index order, so that load_graph reproduces g exactly.
inline void save_graph(const WeightedGraph& g, std::ostream& edges, std::ostream& diagonal) {
    edges << "src\tdst\tweight\n";
    for (const auto& e : g.edges())
        edges << g.label(e.u) << '\t' << g.label(e.v) << '\t' << format_number(e.weight) << '\n';
    diagonal << "node\tdiagonal_mass\n";
    for (NodeIndex i = 0; i < g.node_count(); ++i)
        diagonal << g.label(i) << '\t' << format_number(g.diagonal(i)) << '\n';
}

inline void save_graph(const WeightedGraph& g, const std::filesystem::path& edge_path,
                       const std::filesystem::path& diagonal_path) {
    auto edges = io::open_output(edge_path);
    auto diag = io::open_output(diagonal_path);
    save_graph(g, edges, diag);
    if (!edges || !diag)
        throw InputError("failed writing " + edge_path.string() + " / " + diagonal_path.string());
}

/// Reads `node\tcommunity` rows; community ids are compacted to [0, r) in
/// node-index order and kept as names.
inline CommunityAssignment load_partition(std::istream& in, const std::string& source,
                                          const WeightedGraph& g) {
    auto ids = io::read_node_column(in, source, g, "community");
    auto [labels, names] = io::compact_ids(ids);
    const auto r = names.size();
    return {std::move(labels), r, std::move(names)};
}

inline CommunityAssignment load_partition(const std::filesystem::path& path, const WeightedGraph& g) {
    auto in = io::open_input(path);
    return load_partition(in, path.string(), g);
}

/// Reads `node\tset_id` rows into an AggregationMap; set ids become set labels.
inline AggregationMap load_aggregation_map(std::istream& in, const std::string& source,
                                           const WeightedGraph& g) {
    auto ids = io::read_node_column(in, source, g, "set_id");
    auto [assignment, names] = io::compact_ids(ids);
    const auto n_sets = names.size();
    return {std::move(assignment), n_sets, std::move(names)};
}

inline AggregationMap load_aggregation_map(const std::filesystem::path& path, const WeightedGraph& g) {
    auto in = io::open_input(path);
    return load_aggregation_map(in, path.string(), g);
}

inline void save_partition(const WeightedGraph& g, const CommunityAssignment& c, std::ostream& out) {
    out << "node\tcommunity\n";
    for (auto i : io::label_order(g))
        out << g.label(i) << '\t' << c.name(c[i]) << '\n';
}

} // namespace lfmm
