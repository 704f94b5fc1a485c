#pragma once

namespace spellvar {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spellvar
