#pragma once

namespace timepuzzles {

inline constexpr char kGeneratorVersion[] = "1.0.0";

}  // namespace timepuzzles
