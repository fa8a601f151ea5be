// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

#include "secres/manifolds.hpp"

#include <complex>
#include <vector>

namespace secres {

using cplx = std::complex<double>;

struct MelnikovSettings {
    ManifoldSettings manifold{};
    /// Integration of the block integrals (h is the independent variable).
    FlowSettings quad{1e-24, 1e-13, 0.0, 1e-13, 2'000'000};
    double block_tol = 1e-14;
    /// Replace R1^+ by the constant 1 (substitute-integrand oracle).
    bool unit_integrand = false;
};

/// One 2 pi block in h of an orbit, in forward time.
struct Block {
    double dt = 0.0;   ///< elapsed time over the block (> 0)
    cplx I{};          ///< int R1^+ e^{i n tau} dtau, tau from the block start
};

/// Blocks of the periodic orbit over one period (h: 0 -> -2 pi).
Block periodic_block(const Model& m, const PeriodicOrbitRecord& rec, const MelnikovSettings& s);

/// Tail blocks of the homoclinic orbit through the axis point of `h`:
/// backward[l] is the l-th block before the axis point, forward[l] the l-th
/// block after it. The backward tail is integrated from the W^u seed and the
/// forward tail from its reversor image on W^s, backwards in time.
struct HomoclinicTails {
    std::vector<Block> backward, forward;
};
HomoclinicTails homoclinic_tails(const Model& m, const PeriodicOrbitRecord& rec,
                                 const HomoclinicRecord& h, const MelnikovSettings& s);

struct MelnikovRecord {
    double E = 0.0, J = 0.0;
    Channel channel = Channel::Pri;
    double T0 = 0.0;
    double zeta_plus = 0.0;     ///< from the forward tail
    double zeta_minus = 0.0;    ///< from the backward tail (equals -zeta_plus)
    double zeta = 0.0;          ///< 2 zeta_plus
    cplx A1p{}, A1m{};
    cplx B1p{}, B1m{};
    /// B1^+ = -i alpha^3 (B1_back + e^{i n zeta} B1_fwd); both parts vary
    /// slowly with E, unlike B1^+ itself.
    cplx B1_back{}, B1_fwd{};
    cplx f_plus{}, f_minus{};
    int n_blocks = 0;
    double last_block = 0.0;    ///< magnitude of the outermost block difference
    double max_decay_ratio = 0.0;
    HomoclinicRecord homoclinic;
};

/// zeta_+ from tail blocks: sum of (dt - T0).
double zeta_from_blocks(const std::vector<Block>& blocks, double T0);

cplx A1_from_block(const Model& m, const Block& gamma);

/// B1^+ from the tails, as a function of the pre-scattering phase Omega_-.
cplx B1_from_tails(const Model& m, const HomoclinicTails& t, const Block& gamma, double zeta_plus,
                   double* last_block = nullptr, double* max_ratio = nullptr,
                   std::vector<double>* term_mags = nullptr, cplx* back = nullptr,
                   cplx* fwd = nullptr);

/// f_+ = (e^{i n T0} - 1) B1^+ - (e^{i n zeta} - 1) A1^+.
cplx f_ansatz(double n, double T0, double zeta, cplx A1p, cplx B1p);

struct Straightened {
    cplx B1_tilde{};   ///< valid away from the double resonance
    cplx A1_hat{};     ///< valid near it
    bool B1_tilde_valid = false, A1_hat_valid = false;
};
/// Both straightened combinations; a denominator below 1e-6 marks the
/// corresponding form invalid (and straightened_coeffs_checked throws).
Straightened straightened_coeffs(double n, double T0, double zeta, cplx A1p, cplx B1p);

MelnikovRecord compute_melnikov(const Model& m, double E, Channel ch,
                                const MelnikovSettings& s = {});
MelnikovRecord compute_melnikov(const Model& m, const PeriodicOrbitRecord& rec, Channel ch,
                                const MelnikovSettings& s = {});
/// Coefficients along an already located homoclinic point.
MelnikovRecord compute_melnikov(const Model& m, const PeriodicOrbitRecord& rec,
                                const HomoclinicRecord& hom, const MelnikovSettings& s = {});

/// Grid scan, parallel over energies, output in grid order. Failed energies
/// are dropped from the result and reported through `errors`.
std::vector<MelnikovRecord> scan_melnikov(const Model& m, const std::vector<double>& E_grid,
                                          Channel ch, const MelnikovSettings& s, int threads,
                                          std::vector<std::string>* errors = nullptr);

} // namespace secres
