#include "twoway/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "json.hpp"

namespace twoway {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

bool is_skippable(const std::vector<std::string_view>& fields) {
    return fields.empty() || fields.front().front() == '#';
}

NodeId parse_node(std::string_view token, std::size_t line_no) {
    std::uint64_t value = 0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc{} || ptr != end || value > 0xfffffffeull) {
        throw ParseError(line_no, "invalid node id '" + std::string(token) + "'");
    }
    return static_cast<NodeId>(value);
}

Sign parse_sign(std::string_view token, std::size_t line_no) {
    if (token == "+1") return Sign::Positive;
    if (token == "-1") return Sign::Negative;
    throw ParseError(line_no, "invalid sign '" + std::string(token) + "' (expected +1 or -1)");
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("io", "cannot open " + path.string());
    return in;
}

}  // namespace

std::vector<SignedEdge> parse_layer_file(std::istream& in, Layer layer) {
    const std::size_t arity = layer == Layer::F ? 3 : 2;
    std::vector<SignedEdge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (is_skippable(fields)) continue;
        if (fields.size() != arity) {
            throw ParseError(line_no, "expected " + std::to_string(arity) + " fields for layer " +
                                          std::string(to_string(layer)) + ", got " +
                                          std::to_string(fields.size()));
        }
        SignedEdge e;
        e.src = parse_node(fields[0], line_no);
        e.dst = parse_node(fields[1], line_no);
        e.layer = layer;
        if (layer == Layer::F) e.sign = parse_sign(fields[2], line_no);
        if (e.src == e.dst) throw ParseError(line_no, "self-loop on node " + std::to_string(e.src));
        edges.push_back(e);
    }
    return merge_edges(std::move(edges));
}

std::vector<SignedEdge> read_layer_file(const std::filesystem::path& path, Layer layer) {
    auto in = open_input(path);
    try {
        return parse_layer_file(in, layer);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path.string());
    }
}

void write_layer_file(std::ostream& out, std::span<const SignedEdge> edges,
                      const std::vector<std::string>& header) {
    for (const auto& h : header) out << "# " << h << '\n';
    for (const auto& e : edges) {
        for (std::uint32_t k = 0; k < e.weight; ++k) {
            out << e.src << ' ' << e.dst;
            if (e.sign) out << ' ' << to_string(*e.sign);
            out << '\n';
        }
    }
}

IdMap IdMap::parse(std::istream& in, std::size_t node_count) {
    IdMap map;
    map.external.assign(node_count, {});
    std::vector<bool> seen(node_count, false);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (is_skippable(fields)) continue;
        if (fields.size() != 2) throw ParseError(line_no, "id map lines are 'external_id node_id'");
        const NodeId id = parse_node(fields[1], line_no);
        if (id >= node_count) throw ParseError(line_no, "node id out of range");
        if (seen[id]) throw ParseError(line_no, "node id " + std::to_string(id) + " mapped twice");
        seen[id] = true;
        map.external[id] = std::string(fields[0]);
    }
    return map;
}

Manifest read_manifest(const std::filesystem::path& manifest_path) {
    auto in = open_input(manifest_path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("io", manifest_path.string() + ": " + e.what());
    }
    const auto base = manifest_path.parent_path();
    const auto resolve = [&](const std::string& p) {
        std::filesystem::path path(p);
        return path.is_absolute() ? path : base / path;
    };
    try {
        Manifest m;
        m.node_count = doc.at("node_count").get<std::size_t>();
        const auto& layers = doc.at("layers");
        m.f_path = resolve(layers.at("F").get<std::string>());
        m.m_path = resolve(layers.at("M").get<std::string>());
        m.r_path = resolve(layers.at("R").get<std::string>());
        if (doc.contains("id_map") && !doc["id_map"].is_null()) {
            m.id_map_path = resolve(doc["id_map"].get<std::string>());
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("io", manifest_path.string() + ": " + e.what());
    }
}

Dataset load_dataset(const std::filesystem::path& manifest_path) {
    const auto m = read_manifest(manifest_path);
    LayerEdges edges;
    edges[Layer::F] = read_layer_file(m.f_path, Layer::F);
    edges[Layer::M] = read_layer_file(m.m_path, Layer::M);
    edges[Layer::R] = read_layer_file(m.r_path, Layer::R);
    Dataset ds{build_network(edges, m.node_count), std::nullopt};
    if (m.id_map_path) {
        auto in = open_input(*m.id_map_path);
        ds.ids = IdMap::parse(in, m.node_count);
    }
    return ds;
}

std::vector<QueryPair> parse_pairs(std::istream& in) {
    std::vector<QueryPair> pairs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (is_skippable(fields)) continue;
        if (fields.size() != 2 && fields.size() != 3) {
            throw ParseError(line_no, "pair lines are 'src dst [sign]'");
        }
        QueryPair p;
        p.src = parse_node(fields[0], line_no);
        p.dst = parse_node(fields[1], line_no);
        if (fields.size() == 3) p.label = parse_sign(fields[2], line_no);
        if (p.src == p.dst) throw ParseError(line_no, "pair with identical endpoints");
        pairs.push_back(p);
    }
    return pairs;
}

std::vector<QueryPair> read_pairs(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_pairs(in);
}

}  // namespace twoway
