#pragma once

#include <doctest.h>

// Purely relative comparison; doctest's default scale of 1 makes small values compare absolutely.
inline doctest::Approx rel(double value) { return doctest::Approx(value).scale(0.0); }
