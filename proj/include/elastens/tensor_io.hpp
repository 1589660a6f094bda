#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "elastens/json.hpp"
#include "elastens/tensor.hpp"

namespace elastens {

/// Parses the JSON tensor file format:
///
///   { "n": 3, "format": "sparse" | "dense", "entries": ..., "symmetrize": false }
///
/// Sparse entries are [i, j, k, l, value] rows with 1-based indices; unlisted
/// entries are zero. With "symmetrize": true each listed value is expanded over
/// its symmetry orbit (values listed for the same orbit are averaged). Dense
/// entries are n x n x n x n nested arrays indexed [i][j][k][l].
///
/// `force_symmetrize` overrides the file flag when true. Errors are ParseError
/// with the offending field in the message, or the ElasticityTensor errors.
ElasticityTensor parse_tensor(std::string_view text, bool force_symmetrize = false);
ElasticityTensor tensor_from_json(const nlohmann::json& doc, bool force_symmetrize = false);
ElasticityTensor read_tensor_file(const std::filesystem::path& path,
                                  bool force_symmetrize = false);

/// Dense format with the symmetry already applied.
nlohmann::json tensor_to_json(const ElasticityTensor& a);

}  // namespace elastens
