#pragma once

namespace jumpsens {

inline constexpr const char* kArtifactVersion = "0.1.0";

} // namespace jumpsens
