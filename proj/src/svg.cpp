#include "ellab/svg.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ellab {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kWindow = 2.6;  // plot covers [-kWindow, kWindow]^2
constexpr double kScale = kCanvas / (2.0 * kWindow);

double px(double re) { return (re + kWindow) * kScale; }
double py(double im) { return (kWindow - im) * kScale; }

std::string f4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string spectrum_svg(const Eigen::VectorXcd& eigs, double rho,
                         const std::vector<std::pair<cd, double>>& circles) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
       "viewBox=\"0 0 800 800\">\n";
  s += "<!-- canvas 800x800 px; complex window [-2.6, 2.6]^2; 1 unit = " + f4(kScale) +
       " px; y axis points up -->\n";
  s += "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
  s += "<line x1=\"" + f4(px(-kWindow)) + "\" y1=\"" + f4(py(0)) + "\" x2=\"" + f4(px(kWindow)) +
       "\" y2=\"" + f4(py(0)) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
  s += "<line x1=\"" + f4(px(0)) + "\" y1=\"" + f4(py(-kWindow)) + "\" x2=\"" + f4(px(0)) +
       "\" y2=\"" + f4(py(kWindow)) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";

  const double rx = (1.0 + rho) * kScale;
  const double ry = (1.0 - rho) * kScale;
  if (rx < 1e-9 || ry < 1e-9) {
    // degenerate ellipse: the segment [-2, 2] on one axis
    const bool horizontal = ry < rx;
    const double a = horizontal ? 2.0 : 0.0, b = horizontal ? 0.0 : 2.0;
    s += "<line x1=\"" + f4(px(-a)) + "\" y1=\"" + f4(py(-b)) + "\" x2=\"" + f4(px(a)) +
         "\" y2=\"" + f4(py(b)) + "\" stroke=\"#2a6f97\" stroke-width=\"1.5\"/>\n";
  } else {
    s += "<ellipse cx=\"" + f4(px(0)) + "\" cy=\"" + f4(py(0)) + "\" rx=\"" + f4(rx) +
         "\" ry=\"" + f4(ry) + "\" fill=\"none\" stroke=\"#2a6f97\" stroke-width=\"1.5\"/>\n";
  }

  for (Eigen::Index i = 0; i < eigs.size(); ++i)
    s += "<circle cx=\"" + f4(px(eigs(i).real())) + "\" cy=\"" + f4(py(eigs(i).imag())) +
         "\" r=\"2\" fill=\"#1b1b1b\"/>\n";

  for (const auto& [center, radius] : circles)
    s += "<circle cx=\"" + f4(px(center.real())) + "\" cy=\"" + f4(py(center.imag())) +
         "\" r=\"" + f4(radius * kScale) +
         "\" fill=\"none\" stroke=\"#c1121f\" stroke-width=\"1.5\"/>\n";

  s += "</svg>\n";
  return s;
}

void render_spectrum_svg(const Eigen::VectorXcd& eigs, double rho,
                         const std::vector<std::pair<cd, double>>& circles,
                         const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("svg: cannot open " + path);
  const std::string s = spectrum_svg(eigs, rho, circles);
  f.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!f) throw std::runtime_error("svg: write failed for " + path);
}

}  // namespace ellab
