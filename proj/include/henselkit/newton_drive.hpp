#pragma once

#include "henselkit/certificate.hpp"
#include "henselkit/valued.hpp"

#include <cstddef>
#include <functional>
#include <optional>

namespace hk {

struct DriveOptions {
    std::size_t max_steps = 10000;
    // When set, every correction is re-embedded at this precision before use.
    std::optional<Value> working_precision;
};

// Pseudo-companion iteration: y <- y - c where c = companion_solve(f(y) - target).
// The oracle must return c with v(r - phi(c)) > v(r) for the pseudo-companion phi.
template <class P, class Q, class F, class S>
Lift<P> newton_drive(F&& f, S&& companion_solve, const P& start, const Q& target, const Value& precision,
                     const Ball<P>& declared_ball, const DriveOptions& opts = {}) {
    LiftCertificate<P> cert{{}, Value(), declared_ball, LiftOutcome::ExactZero};
    P y = start;
    Q r = f(y) - target;
    Value vr = value_of(r);
    std::size_t step = 0;
    while (vr < precision) {
        if (zero_mod_precision(r))
            throw PrecisionLossError("residual vanishes modulo its own precision " + vr.to_string() +
                                     ", below the requested " + precision.to_string());
        if (step >= opts.max_steps)
            throw StalledError("step budget exhausted at residual value " + vr.to_string(), cert.steps);
        P c = [&]() -> P {
            try {
                return companion_solve(r);
            } catch (const Error& e) {
                throw;
            } catch (const std::exception& e) {
                throw UsageError("correction oracle failed at step " + std::to_string(step + 1) + ": " + e.what());
            }
        }();
        if (opts.working_precision) c = widen(c, *opts.working_precision);
        y = y - c;
        Q r2 = f(y) - target;
        Value vr2 = value_of(r2);
        cert.steps.push_back({vr, vr2});
        ++step;
        if (!(vr2 > vr))
            throw StalledError("step " + std::to_string(step) + " did not raise the residual value (" + vr.to_string() +
                                   " -> " + vr2.to_string() + ")",
                               cert.steps);
        if (!declared_ball.contains(y))
            throw StalledError("step " + std::to_string(step) + " left the declared ball " + declared_ball.describe(),
                               cert.steps);
        r = std::move(r2);
        vr = vr2;
    }
    cert.final_residual = vr;
    cert.outcome = cert.steps.empty() ? LiftOutcome::ExactZero : LiftOutcome::ConvergedAtPrecision;
    return Lift<P>{std::move(y), std::move(cert)};
}

// Same driver with the declared ball taken as start + O (the valuation ring around start).
template <class P, class Q, class F, class S>
Lift<P> newton_drive(F&& f, S&& companion_solve, const P& start, const Q& target, const Value& precision) {
    return newton_drive(std::forward<F>(f), std::forward<S>(companion_solve), start, target, precision,
                        Ball<P>{start, Value(0), false});
}

}  // namespace hk
