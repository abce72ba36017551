#pragma once

#include "nkcert/number_field.hpp"

namespace nkcert::testing {

// X^4 - X^3 - X^2 - X + 1, minimal polynomial of the smallest degree-4 Salem number
inline IntPoly salem_poly() { return IntPoly{1, -1, -1, -1, 1}; }

// X^5 - X^4 - X^3 - X^2 + 1: three real roots, one complex pair
inline IntPoly quintic_poly() { return IntPoly{1, 0, -1, -1, -1, 1}; }

inline NumberField salem_field() { return validate_field(salem_poly()); }
inline NumberField quintic_field() { return validate_field(quintic_poly()); }

} // namespace nkcert::testing
