#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dmabo/problem.hpp"

namespace dmabo {

/// JSON document holding everything needed to replay a run on the instance:
/// grids, tabulated function values, affine data, norm bounds, kernels,
/// constants and the reference solution. Doubles round-trip exactly.
std::string instance_to_json(const ProblemInstance& problem);

/// Inverse of instance_to_json. Throws InstanceError on malformed documents.
ProblemInstance instance_from_json(std::string_view text);

void save_instance(const std::filesystem::path& path, const ProblemInstance& problem);
/// Throws InputError when the file cannot be read.
ProblemInstance load_instance(const std::filesystem::path& path);

}  // namespace dmabo
