#pragma once

#include <vector>

#include "fprank/ff.hpp"

namespace fprank {

// Coefficient vector in ascending powers: coeffs[i] multiplies x^i.
using Polynomial = std::vector<Fp>;

Fp eval_poly(const PrimeField& F, const Polynomial& f, Fp x);

// Horner evaluation at each point; O(deg * |points|).
std::vector<Fp> multipoint_eval(const PrimeField& F, const Polynomial& f,
                                const std::vector<Fp>& points);

// Newton interpolation through (xs[i], ys[i]); returns the unique polynomial
// of degree < n as n coefficients.  Throws std::invalid_argument when two
// interpolation points share an x value.
Polynomial interpolate(const PrimeField& F, const std::vector<Fp>& xs,
                       const std::vector<Fp>& ys);

} // namespace fprank
