#include "fprank/polyeval.hpp"

#include <algorithm>
#include <stdexcept>

namespace fprank {

Fp eval_poly(const PrimeField& F, const Polynomial& f, Fp x) {
    Fp acc = F.zero();
    for (size_t i = f.size(); i-- > 0;) acc = F.add(F.mul(acc, x), f[i]);
    return acc;
}

std::vector<Fp> multipoint_eval(const PrimeField& F, const Polynomial& f,
                                const std::vector<Fp>& points) {
    std::vector<Fp> out;
    out.reserve(points.size());
    for (Fp x : points) out.push_back(eval_poly(F, f, x));
    return out;
}

Polynomial interpolate(const PrimeField& F, const std::vector<Fp>& xs,
                       const std::vector<Fp>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("interpolate: xs/ys size mismatch");
    const size_t n = xs.size();
    {
        std::vector<uint64_t> sorted(n);
        for (size_t i = 0; i < n; ++i) sorted[i] = xs[i].v;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("interpolate: duplicate interpolation point");
    }
    if (n == 0) return {};

    // Divided differences in place: dd[i] becomes f[x_0 ... x_i].
    std::vector<Fp> dd = ys;
    for (size_t j = 1; j < n; ++j)
        for (size_t i = n - 1; i >= j; --i)
            dd[i] = F.mul(F.sub(dd[i], dd[i - 1]), F.inv(F.sub(xs[i], xs[i - j])));

    // Expand the Newton form to monomial coefficients.
    Polynomial coeffs(n, F.zero());
    coeffs[0] = dd[n - 1];
    size_t deg = 0;
    for (size_t i = n - 1; i-- > 0;) {
        // coeffs <- coeffs * (x - xs[i]) + dd[i]
        ++deg;
        for (size_t t = deg + 1; t-- > 1;)
            coeffs[t] = F.sub(coeffs[t - 1], F.mul(xs[i], coeffs[t]));
        coeffs[0] = F.sub(dd[i], F.mul(xs[i], coeffs[0]));
    }
    return coeffs;
}

} // namespace fprank
