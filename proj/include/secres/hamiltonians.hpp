// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

#include "secres/constants.hpp"
#include "secres/coords.hpp"

#include <array>
#include <complex>
#include <utility>

namespace secres {

/// Giacaglia coefficients U_2^{m,s}(eps), m in {0,1,2}, s in {-2..2}.
struct GiacagliaTable {
    std::array<std::array<double, 5>, 3> U{};

    double operator()(int m, int s) const { return U[m][s + 2]; }
    double& operator()(int m, int s) { return U[m][s + 2]; }
};

/// Six-decimal values at eps = 23.44 deg.
GiacagliaTable giacaglia_printed();
/// Closed forms in C = cos(eps/2), S = sin(eps/2).
GiacagliaTable giacaglia_closed_form(double eps);

struct HarmonicCoeffs {
    std::array<double, 3> c_hat{0.5, 1.0 / 3.0, -1.0 / 12.0};
    std::array<double, 3> f0{};
    std::array<double, 3> fcos{};
    std::array<double, 3> fsin{};
    std::array<std::complex<double>, 3> fplus{};
    std::array<std::complex<double>, 3> fminus{};
};

HarmonicCoeffs make_harmonic_coeffs(const GiacagliaTable& U);

/// Kaula inclination functions F_{2,s,1}(i_M), s = 0, 1, 2.
struct KaulaInclination {
    static double F(int s, double iM);
};

/// How R_sin is attached to the angles. PoincareBlock reuses the cos-type
/// structure of H_CP,1 for both R_cos and R_sin; SlowFastConsistent uses
/// sin(psi_{m,p,0}) for R_sin, as obtained by composing the slow-fast form.
enum class R1Structure { PoincareBlock, SlowFastConsistent };

/// Value, gradient and Hessian with respect to (eta, Gamma, xi, h).
struct Derivs {
    double v = 0.0;
    std::array<double, 4> g{};
    std::array<std::array<double, 4>, 4> H{};
};

/// Index constants into Derivs::g / Derivs::H.
enum : int { kEta = 0, kGam = 1, kXi = 2, kH = 3 };

/// Immutable evaluation context: parameters plus coefficient tables.
class Model {
public:
    explicit Model(const ModelParams& p, R1Structure r1 = R1Structure::PoincareBlock);

    const ModelParams& params() const { return p_; }
    const GiacagliaTable& giacaglia() const { return U_; }
    const HarmonicCoeffs& coeffs() const { return c_; }
    R1Structure r1_structure() const { return r1_; }
    double L() const { return p_.L; }
    double alpha3() const { return p_.alpha * p_.alpha * p_.alpha; }
    double n() const { return p_.n_OmegaM; }

private:
    ModelParams p_;
    GiacagliaTable U_;
    HarmonicCoeffs c_;
    R1Structure r1_;
};

double eval_H0(const PoincareState& s, const Model& m);
double eval_Hcp1(const PoincareState& s, const Model& m);
double eval_Hcp(const PoincareState& s, const Model& m);
double eval_Hav(double eta, double Gam, double xi, const Model& m);

/// The Table-2 slow-fast forms, used to cross-check the Poincare forms.
double eval_H0_slowfast(double y, double Gam, const Model& m);
double eval_Hcp1_slowfast(const SlowFastState& s, const Model& m);

/// Partial derivatives (d_eta, d_Gamma, d_xi, d_h) of H_CP.
std::array<double, 4> grad_Hcp(const PoincareState& s, const Model& m);
/// Value, gradient and Hessian of H_CP.
Derivs derivs_Hcp(const PoincareState& s, const Model& m, int order = 2);
Derivs derivs_Hav(double eta, double Gam, double xi, const Model& m, int order = 2);

/// Harmonic amplitudes of the first-order lunar-inclination term:
/// R1(., Omega_M) = e^{i Omega_M} R1^+ + e^{-i Omega_M} R1^-.
std::pair<std::complex<double>, std::complex<double>>
eval_R1pm(const PoincareState& s, const Model& m);
double eval_R1(const PoincareState& s, double OmegaM, const Model& m);
/// Real parts R_cos, R_sin with R1 = cos(Omega) R_cos + sin(Omega) R_sin.
Derivs derivs_Rcos(const PoincareState& s, const Model& m, int order = 1);
Derivs derivs_Rsin(const PoincareState& s, const Model& m, int order = 1);

/// Closed forms on the invariant plane xi = eta = 0.
double dGam_Hcp1_plane(double Gam, double h, const Model& m);
double dh_Hcp1_plane(double Gam, double h, const Model& m);
double dGam_H0_plane(double Gam, const Model& m);

} // namespace secres
