#pragma once

#include <filesystem>

#include "patternrank/core_model.hpp"

namespace patternrank {

// Both throw Error(kIo) with the path in the message.
Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, ByteView data);

}  // namespace patternrank
