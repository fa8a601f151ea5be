// SPDX-License-Identifier: MIT
// Copyright (c) 2026 secres contributors

#pragma once

// Step-by-step driver around Boost.Odeint's controlled Runge-Kutta-Fehlberg 7(8).

#include "secres/dynamics.hpp"
#include "secres/errors.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>

namespace secres::detail {

namespace odeint = boost::numeric::odeint;

template <std::size_t N>
using StateN = std::array<double, N>;

template <std::size_t N>
using Stepper = odeint::runge_kutta_fehlberg78<StateN<N>>;

/// Integrates x from t0 to t1 (either direction), calling
/// on_step(x_prev, t_prev, x, t, stepper) after each accepted step. If
/// on_step returns true the integration stops early.
template <std::size_t N, class Rhs, class OnStep>
double integrate(Rhs&& rhs, StateN<N>& x, double t0, double t1, const FlowSettings& fs,
                 OnStep&& on_step)
{
    if (t0 == t1) return t0;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    auto ctrl = fs.max_step > 0.0
        ? odeint::make_controlled<Stepper<N>>(fs.abs_tol, fs.rel_tol, fs.max_step)
        : odeint::make_controlled<Stepper<N>>(fs.abs_tol, fs.rel_tol);
    double t = t0;
    double dt = dir * std::min(std::abs(t1 - t0), fs.max_step > 0.0 ? fs.max_step : std::abs(t1 - t0)) / 16.0;
    long steps = 0;
    int rejects = 0;
    StateN<N> prev;
    while (dir * (t1 - t) > 0.0) {
        if (dir * (t + dt - t1) > 0.0) dt = t1 - t;
        prev = x;
        const double tprev = t;
        odeint::controlled_step_result res;
        try {
            res = ctrl.try_step(rhs, x, t, dt);
        } catch (const DomainError&) {
            // A trial stage left the physical domain: shrink and retry.
            x = prev;
            t = tprev;
            dt *= 0.5;
            res = odeint::fail;
        }
        if (res == odeint::fail) {
            if (++rejects > 500 || std::abs(dt) < 1e-14 * std::max(1.0, std::abs(t)))
                throw NumericalError("integrator: step size underflow");
            continue;
        }
        rejects = 0;
        for (double v : x)
            if (!std::isfinite(v)) throw NumericalError("integrator: non-finite state");
        if (++steps > fs.max_steps) throw NumericalError("integrator: too many steps");
        // Land exactly on the end point despite rounding in t + dt.
        if (dir * (t - t1) > -1e-15 * std::max(1.0, std::abs(t1))) t = t1;
        if (on_step(prev, tprev, x, t)) return t;
    }
    return t;
}

template <std::size_t N, class Rhs>
double integrate(Rhs&& rhs, StateN<N>& x, double t0, double t1, const FlowSettings& fs)
{
    return integrate<N>(rhs, x, t0, t1, fs,
                        [](const StateN<N>&, double, const StateN<N>&, double) { return false; });
}

/// One uncontrolled RKF78 step of size dt (used for section refinement).
template <std::size_t N, class Rhs>
StateN<N> single_step(Rhs&& rhs, const StateN<N>& x0, double t0, double dt)
{
    Stepper<N> st;
    StateN<N> x = x0;
    st.do_step(rhs, x, t0, dt);
    return x;
}

} // namespace secres::detail
