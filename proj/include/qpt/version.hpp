#pragma once

namespace qpt {

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace qpt
