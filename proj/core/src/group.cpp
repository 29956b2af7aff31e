#include "lclab/group.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lclab/errors.hpp"

namespace lclab {

namespace {

void check_positive(double x, const char* what) {
  if (!(x > 0.0) || std::isinf(x)) {
    throw DomainError(std::string(what) + " must be strictly positive and finite");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DomainError("cannot parse number '" + s + "' in " + what);
  }
}

}  // namespace

HomogeneousGroup make_euclidean_group(int n) {
  if (n < 1) throw DomainError("euclidean dimension must be >= 1");
  // Surface measure of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
  double sigma = 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
  HomogeneousGroup g;
  g.Q = static_cast<double>(n);
  g.sphere_measure = sigma;
  g.label = "euclidean:" + std::to_string(n);
  return g;
}

HomogeneousGroup make_anisotropic_group(const std::vector<double>& dilation_exponents,
                                        double sphere_measure) {
  if (dilation_exponents.empty()) throw DomainError("anisotropic group needs >= 1 exponent");
  double Q = 0.0;
  for (double v : dilation_exponents) {
    check_positive(v, "dilation exponent");
    Q += v;
  }
  check_positive(sphere_measure, "sphere_measure");
  HomogeneousGroup g;
  g.Q = Q;
  g.sphere_measure = sphere_measure;
  g.label = "anisotropic";
  return g;
}

HomogeneousGroup make_custom_group(double Q, double sphere_measure) {
  check_positive(Q, "Q");
  check_positive(sphere_measure, "sphere_measure");
  HomogeneousGroup g;
  g.Q = Q;
  g.sphere_measure = sphere_measure;
  std::ostringstream label;
  label << "custom:" << Q << ":" << sphere_measure;
  g.label = label.str();
  return g;
}

HomogeneousGroup parse_group(const std::string& preset) {
  auto parts = split(preset, ':');
  if (parts.empty()) throw DomainError("empty group preset");
  const std::string& kind = parts[0];
  if (kind == "euclidean") {
    if (parts.size() != 2) throw DomainError("euclidean preset wants 'euclidean:n'");
    double n = parse_number(parts[1], "group preset");
    if (n != std::floor(n)) throw DomainError("euclidean dimension must be an integer");
    return make_euclidean_group(static_cast<int>(n));
  }
  if (kind == "anisotropic") {
    if (parts.size() != 3) {
      throw DomainError("anisotropic preset wants 'anisotropic:v1,...,vN:sigma'");
    }
    std::vector<double> vs;
    for (const auto& tok : split(parts[1], ',')) {
      vs.push_back(parse_number(tok, "dilation exponents"));
    }
    return make_anisotropic_group(vs, parse_number(parts[2], "sphere measure"));
  }
  if (kind == "custom") {
    if (parts.size() != 3) throw DomainError("custom preset wants 'custom:Q:sigma'");
    return make_custom_group(parse_number(parts[1], "Q"),
                             parse_number(parts[2], "sphere measure"));
  }
  throw DomainError("unknown group preset '" + kind + "'");
}

double log_ball_volume(const HomogeneousGroup& g, double r) {
  if (!(r > 0.0)) throw DomainError("ball_volume: radius must be > 0");
  return g.log_unit_ball_volume() + g.Q * std::log(r);
}

double ball_volume(const HomogeneousGroup& g, double r) {
  return std::exp(log_ball_volume(g, r));
}

}  // namespace lclab
