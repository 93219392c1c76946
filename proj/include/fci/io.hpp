#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fci::io {

// Fixed 12-significant-digit float formatting; all emitted CSV/JSON numbers
// go through this so identical runs are byte-identical.
std::string fmt(double v);

void write_file(const std::string& path, std::string_view content);

std::uint64_t fnv1a64(std::string_view data);

}  // namespace fci::io
