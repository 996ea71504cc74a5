#pragma once

#include "henselkit/valued.hpp"

#include <string>

namespace hk {

enum class BallRelation { Disjoint, FirstInSecond, SecondInFirst, Equal };

std::string to_string(BallRelation r);

// Closed ball {z : v(z - center) >= radius}, or the open ball {v(z - center) > radius}.
template <class P>
struct Ball {
    P center;
    Value radius;
    bool open = false;

    bool contains(const P& z) const {
        Value d = value_of(z - center);
        if (zero_mod_precision(z - center)) {
            // A difference that vanishes modulo precision lies in every ball of
            // radius below that precision.
            if (d > radius || (!open && d == radius)) return true;
            throw PrecisionLossError("ball membership undecidable at precision " + d.to_string());
        }
        return open ? d > radius : d >= radius;
    }

    Ball translated(const P& shift) const { return Ball{center + shift, radius, open}; }

    std::string describe() const {
        return std::string("v(x - ") + to_text(center) + (open ? ") > " : ") >= ") + radius.to_string();
    }
};

namespace detail {
// Orders radii so that a larger key means a smaller ball.
inline int compare_radius(const Value& a, bool open_a, const Value& b, bool open_b) {
    if (a < b) return -1;
    if (b < a) return 1;
    if (open_a == open_b) return 0;
    return open_a ? 1 : -1;
}
}  // namespace detail

template <class P>
BallRelation ball_relation(const Ball<P>& b1, const Ball<P>& b2) {
    if (!same_ring_as(b1.center, b2.center)) throw UsageError("balls over different valued structures");
    int c = detail::compare_radius(b1.radius, b1.open, b2.radius, b2.open);
    if (c == 0) return b1.contains(b2.center) ? BallRelation::Equal : BallRelation::Disjoint;
    if (c > 0) return b2.contains(b1.center) ? BallRelation::FirstInSecond : BallRelation::Disjoint;
    return b1.contains(b2.center) ? BallRelation::SecondInFirst : BallRelation::Disjoint;
}

}  // namespace hk
