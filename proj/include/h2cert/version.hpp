#pragma once

namespace h2cert {

inline constexpr const char* kVersion = "0.1.0";

// Convention strings echoed into every machine report so results stay
// interpretable if defaults ever change.
inline constexpr const char* kSquareConvention =
    "Q(c,h) = { x+iy : 0 < x <= h, |y-c| <= h/2 }, closed top and side edges";
inline constexpr const char* kInnerProductConvention =
    "<f,g> = (1/2pi) int_R f(iy) conj(g(iy)) dy; reproducing kernel k_l(z) = 1/(z+conj(l))";

}  // namespace h2cert
