#pragma once

#include "ellab/limitlaw.hpp"

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace ellab {

// Scatter plot of a complex spectrum with the ellipse boundary (semi-axes
// 1 + rho, 1 - rho) and optional annotation circles. Output is pure text with
// fixed formatting: the same inputs always produce identical bytes. Canvas
// and scale are fixed (800 x 800 px, complex window [-2.6, 2.6]^2) and
// restated in the file header comment; points outside the window are still
// emitted and clip at render time.
std::string spectrum_svg(const Eigen::VectorXcd& eigs, double rho,
                         const std::vector<std::pair<cd, double>>& circles);

// Writes spectrum_svg to path; throws std::runtime_error when the file
// cannot be written.
void render_spectrum_svg(const Eigen::VectorXcd& eigs, double rho,
                         const std::vector<std::pair<cd, double>>& circles,
                         const std::string& path);

}  // namespace ellab
