#pragma once

// Closed-form reference values used by the unit and acceptance tests.

#include <cmath>
#include <complex>
#include <numbers>

namespace scatterlab::oracles {

// s-wave phase shift of v = -depth for r < radius, reduced to (-pi/2, pi/2].
inline double square_well_s_wave(double depth, double radius, double k) {
    const double kp = std::sqrt(k * k + depth);
    double d = -k * radius + std::atan((k / kp) * std::tan(kp * radius));
    d = std::remainder(d, std::numbers::pi);
    if (d <= -std::numbers::pi / 2.0) d += std::numbers::pi;
    return d;
}

// First Born amplitude of the Yukawa potential g e^{-mu r}/r.
inline double yukawa_born(double g, double mu, double q) { return -g / (q * q + mu * mu); }

// First Born amplitude of v0 exp(-r^2/w^2): -(1/4pi) v0 pi^{3/2} w^3 exp(-q^2 w^2/4).
inline double gaussian_born(double v0, double w, double q) {
    return -v0 * std::pow(std::numbers::pi, 1.5) * w * w * w * std::exp(-q * q * w * w / 4.0) / (4.0 * std::numbers::pi);
}

// First Born phase shift of the square well v = -depth (r < R), l = 0.
inline double square_well_born_s_wave(double depth, double radius, double k) {
    return (depth / k) * (radius / 2.0 - std::sin(2.0 * k * radius) / (4.0 * k));
}

// First Born amplitude of v0 <x>^{-2}: -(v0/q) int_0^inf r sin(qr)/(1+r^2) dr = -v0 pi e^{-q} / (2q).
inline double power_tail2_born(double v0, double q) { return -v0 * std::numbers::pi * std::exp(-q) / (2.0 * q); }

// First Born amplitude of v0 <x>^{-4}: int_0^inf r sin(qr)/(1+r^2)^2 dr = (pi/4) q e^{-q}.
inline double power_tail4_born(double v0, double q) { return -v0 * std::numbers::pi * std::exp(-q) / 4.0; }

// First Born s-wave phase shift of v0 <x>^{-2}: int_0^inf sin^2(kr)/(1+r^2) dr = (pi/4)(1 - e^{-2k}).
inline double power_tail2_born_s_wave(double v0, double k) {
    return -(v0 / k) * (std::numbers::pi / 4.0) * (1.0 - std::exp(-2.0 * k));
}

// Transport coefficients of v = exp(-|x|^2) along e_z, in cylindrical (rho, z):
//   b1 = e^{-rho^2} E(z),  E(z) = (sqrt(pi)/2)(1 + erf z),
//   b2 = -int_{-inf}^z Lap b1 + int_{-inf}^z v b1.
inline double gaussian_b1(double rho, double z) {
    return std::exp(-rho * rho) * 0.5 * std::sqrt(std::numbers::pi) * (1.0 + std::erf(z));
}

inline double gaussian_b2(double rho, double z) {
    const double sp = std::sqrt(std::numbers::pi);
    const double g = std::exp(-rho * rho);
    const double int_E = 0.5 * sp * (z * (1.0 + std::erf(z)) + std::exp(-z * z) / sp);
    const double int_lap = (4.0 * rho * rho - 4.0) * g * int_E + g * std::exp(-z * z);
    const double int_vb = g * g * (std::numbers::pi / 8.0) * std::pow(1.0 + std::erf(z), 2);
    return -int_lap + int_vb;
}

}  // namespace scatterlab::oracles
