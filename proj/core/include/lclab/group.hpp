#pragma once

#include <string>
#include <vector>

#include "lclab/numeric.hpp"

namespace lclab {

/// Radial data of a homogeneous group: the homogeneous dimension Q and the
/// total Radon measure of the unit quasi-sphere. Everything radial (ball
/// volumes, polar integrals, the exponential means) is determined by these
/// two scalars. Q is a positive real, not an integer, so fractional sweeps
/// and Heisenberg-like dimensions are expressible.
struct HomogeneousGroup {
  double Q = 1.0;
  double sphere_measure = 2.0;
  std::string label;

  double unit_ball_volume() const { return sphere_measure / Q; }
  double log_unit_ball_volume() const { return std::log(sphere_measure) - std::log(Q); }
};

/// Euclidean R^n: Q = n, |S| = surface measure of the unit sphere.
HomogeneousGroup make_euclidean_group(int n);

/// Anisotropic dilations with exponents v_i: Q = sum v_i. The sphere measure
/// of a general quasi-norm is not computable here and must be supplied.
HomogeneousGroup make_anisotropic_group(const std::vector<double>& dilation_exponents,
                                        double sphere_measure);

HomogeneousGroup make_custom_group(double Q, double sphere_measure);

/// Preset strings: "euclidean:n", "anisotropic:v1,...,vN:sigma", "custom:Q:sigma".
HomogeneousGroup parse_group(const std::string& preset);

/// |B(0, r)| = (|S|/Q) r^Q, evaluated in the log domain.
double ball_volume(const HomogeneousGroup& g, double r);
double log_ball_volume(const HomogeneousGroup& g, double r);

}  // namespace lclab
