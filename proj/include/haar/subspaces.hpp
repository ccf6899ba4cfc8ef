#pragma once

#include <cstdint>

#include "haar/linalg.hpp"

namespace haar {

// Exact binomial coefficient; throws ResourceError on overflow.
std::int64_t binomial(std::int64_t n, std::int64_t r);

// Projectors are built once per (d, k) and shared.
const CMat& p_sym(int d, int k);
const CMat& p_asym(int d, int k);

std::int64_t sym_dim(int d, int k);
std::int64_t asym_dim(int d, int k);

// E[|psi><psi|^{(x)k}] over Haar-random states = P_sym / Tr P_sym.
CMat haar_state_moment(int d, int k);

}  // namespace haar
