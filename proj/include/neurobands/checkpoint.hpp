#pragma once

#include <filesystem>

#include "neurobands/network.hpp"

namespace neurobands {

// EEGB container, kind "model": header carries the network config, the
// parameter block table and the column stats; payload is every parameter
// as f32 in declared block order.
void save_model(const std::filesystem::path& path, const Network& net);
Network load_model(const std::filesystem::path& path);

}  // namespace neurobands
