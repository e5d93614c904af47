#pragma once

#include <doctest.h>

#include "starsplit/form.hpp"

namespace starsplit::testing {

inline const cplx I(0.0, 1.0);

// Max-coefficient distance between two forms.
inline double dist(const Form& a, const Form& b) { return (a - b).max_abs(); }

}  // namespace starsplit::testing
