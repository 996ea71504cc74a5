#pragma once

#include "henselkit/ball.hpp"
#include "henselkit/errors.hpp"
#include "henselkit/value.hpp"

#include <string>
#include <vector>

namespace hk {

enum class LiftOutcome { ConvergedAtPrecision, ExactZero, Stalled };

std::string to_string(LiftOutcome o);

struct LiftStep {
    Value before;
    Value after;
};

template <class P>
struct LiftCertificate {
    std::vector<LiftStep> steps;
    Value final_residual;
    Ball<P> uniqueness_ball;
    LiftOutcome outcome = LiftOutcome::ExactZero;

    bool strictly_increasing() const {
        for (const auto& s : steps)
            if (!(s.after > s.before)) return false;
        for (std::size_t i = 1; i < steps.size(); ++i)
            if (!(steps[i].before == steps[i - 1].after)) return false;
        return true;
    }
};

template <class P>
struct Lift {
    P root;
    LiftCertificate<P> certificate;
};

// Raised when a correction step fails to raise the residual value. Carries the
// step transcript up to and including the offending step.
class StalledError : public Error {
public:
    StalledError(const std::string& what, std::vector<LiftStep> steps)
        : Error(ErrorKind::Stalled, what), steps_(std::move(steps)) {}
    const std::vector<LiftStep>& steps() const noexcept { return steps_; }

private:
    std::vector<LiftStep> steps_;
};

std::string format_step_table(const std::vector<LiftStep>& steps);

}  // namespace hk
