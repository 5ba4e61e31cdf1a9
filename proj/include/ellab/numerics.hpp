#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ellab::num {

using cd = std::complex<double>;

// Adaptive Gauss-Kronrod (G7/K15) quadrature on [a, b] to an absolute
// tolerance. Bisects panels whose K15-G7 discrepancy exceeds the local
// budget; max_depth bounds recursion.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth = 40);

// All roots of c[0] + c[1] x + ... + c[n] x^n (ascending coefficients) via
// the companion-matrix eigenvalues. Leading zeros are trimmed; degree 0
// yields no roots.
std::vector<cd> poly_roots(const std::vector<cd>& ascending_coeffs);

// Convolution of ascending-coefficient polynomials.
std::vector<cd> poly_mul(const std::vector<cd>& p, const std::vector<cd>& q);

// FNV-1a 64-bit content fingerprint, as a fixed-width hex string.
std::string fnv1a_hex(const void* data, std::size_t len);
std::string fnv1a_hex(const std::string& s);

}  // namespace ellab::num
