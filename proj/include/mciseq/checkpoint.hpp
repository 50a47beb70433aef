#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mciseq/tensor.hpp"

namespace mciseq {

// Flat named-tensor container: magic, count, then per tensor a length-prefixed
// name, the shape, and raw little-endian 64-bit floats. Round-trips bit-exact.
void save_tensors(const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, const Tensor*>>& tensors);

std::vector<std::pair<std::string, Tensor>> load_tensors(const std::filesystem::path& path);

// Convenience wrappers keyed by parameter name.
void save_param_sets(const std::filesystem::path& path,
                     const std::vector<const ParamSet*>& sets);
// Fills existing parameters by name; throws on a missing name or shape mismatch.
void load_param_sets(const std::filesystem::path& path,
                     const std::vector<ParamSet*>& sets);

}  // namespace mciseq
