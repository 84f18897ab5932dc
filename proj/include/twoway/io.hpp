#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "twoway/network.hpp"

namespace twoway {

/// Parses one layer file: `src dst` per line for M and R, `src dst sign`
/// for F with sign "+1" or "-1". Lines starting with `#` and blank lines are
/// skipped. Duplicates are merged by summing weights.
std::vector<SignedEdge> parse_layer_file(std::istream& in, Layer layer);
std::vector<SignedEdge> read_layer_file(const std::filesystem::path& path, Layer layer);

/// One line per merged edge; F lines carry the sign, weights are expanded
/// into repeated lines so the file parses back to the same network.
/// `header` lines are written as `#` comments first.
void write_layer_file(std::ostream& out, std::span<const SignedEdge> edges,
                      const std::vector<std::string>& header = {});

/// External string ids, indexed by NodeId.
struct IdMap {
    std::vector<std::string> external;

    /// `external_id node_id` per line. Every node id must be < node_count and
    /// appear at most once.
    static IdMap parse(std::istream& in, std::size_t node_count);
};

struct Manifest {
    std::size_t node_count = 0;
    std::filesystem::path f_path;
    std::filesystem::path m_path;
    std::filesystem::path r_path;
    std::optional<std::filesystem::path> id_map_path;
};

struct Dataset {
    MultilayerNetwork network;
    std::optional<IdMap> ids;
};

/// Reads the manifest JSON. Relative paths are resolved against the
/// manifest's own directory.
Manifest read_manifest(const std::filesystem::path& manifest_path);
Dataset load_dataset(const std::filesystem::path& manifest_path);

/// A labelled or unlabelled (initiator, recipient) pair for featurize/predict.
struct QueryPair {
    NodeId src = 0;
    NodeId dst = 0;
    std::optional<Sign> label;
};

/// `src dst [sign]` per line; `#` comments allowed.
std::vector<QueryPair> parse_pairs(std::istream& in);
std::vector<QueryPair> read_pairs(const std::filesystem::path& path);

}  // namespace twoway
