#include "henselkit/certificate.hpp"

#include <fmt/format.h>

namespace hk {

std::string to_string(LiftOutcome o) {
    switch (o) {
        case LiftOutcome::ConvergedAtPrecision: return "converged-at-precision";
        case LiftOutcome::ExactZero: return "exact-zero";
        case LiftOutcome::Stalled: return "stalled";
    }
    return "unknown";
}

std::string to_string(BallRelation r) {
    switch (r) {
        case BallRelation::Disjoint: return "disjoint";
        case BallRelation::FirstInSecond: return "B1<=B2";
        case BallRelation::SecondInFirst: return "B2<=B1";
        case BallRelation::Equal: return "equal";
    }
    return "unknown";
}

std::string format_step_table(const std::vector<LiftStep>& steps) {
    std::string out = fmt::format("{:>6}  {:>10}  {:>10}\n", "step", "before", "after");
    for (std::size_t i = 0; i < steps.size(); ++i)
        out += fmt::format("{:>6}  {:>10}  {:>10}\n", i + 1, steps[i].before.to_string(), steps[i].after.to_string());
    return out;
}

}  // namespace hk
