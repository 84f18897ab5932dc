#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "twoway/analysis.hpp"
#include "twoway/community.hpp"
#include "twoway/evaluation.hpp"
#include "twoway/synthgen.hpp"

namespace twoway {

using Json = nlohmann::ordered_json;

/// Version of every JSON/CSV file layout written by the toolkit.
inline constexpr int kFormatVersion = 1;

const char* toolkit_version() noexcept;

Json to_json(const GenConfig& cfg);
/// Missing keys keep their defaults. Throws FormatError on a type mismatch.
GenConfig gen_config_from_json(const Json& j);

Json to_json(const GroundTruth& truth);

Json to_json(const Partition& p);
Partition partition_from_json(const Json& j);

Json to_json(const FittedPredictor& model);
/// Throws FormatError for an unknown model type or inconsistent sizes.
FittedPredictor predictor_from_json(const Json& j);

Json to_json(const ExperimentConfig& cfg);
Json to_json(const EvalReport& report);
Json to_json(const CorrelationReport& report);

Json manifest_json(std::size_t node_count, const std::string& f, const std::string& m,
                   const std::string& r);

/// Two-space indented, trailing newline.
std::string dump(const Json& j);
Json read_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace twoway
