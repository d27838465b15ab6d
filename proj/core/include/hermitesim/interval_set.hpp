#pragma once

#include <string>
#include <utility>
#include <vector>

// Finite unions of closed intervals inside a window [0, W], stored in
// canonical form: sorted, pairwise disjoint with strict gaps (touching
// closed intervals are merged), zero-length components retained.  These
// sets are exact complements of sampled open-interval covers, so no
// epsilon snapping is ever applied; equal endpoints mean equal doubles.

namespace hermite {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

class IntervalSet {
public:
    IntervalSet() = default;

    // Empty set on [0, window].
    explicit IntervalSet(double window);

    // Canonicalizes: clips parts to [0, window], sorts, merges
    // overlapping or touching intervals.  Throws std::invalid_argument
    // if window <= 0 or some part has lo > hi.
    IntervalSet(double window, std::vector<Interval> parts);

    static IntervalSet full(double window);

    double window() const { return window_; }
    const std::vector<Interval>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }

    // Membership of a point (closed intervals, so endpoints count).
    bool contains(double x) const;

    // Total length; zero-length components contribute nothing.
    double measure() const;

    // Length of the intersection with [a, b]; requires 0 <= a <= b <= window.
    double measure_on(double a, double b) const;

    // Set intersection; both operands must share the same window.
    IntervalSet intersect(const IntervalSet& other) const;

    // Translation by v (any sign), clipped back into [0, window].
    IntervalSet shift_clip(double v) const;

    // Fattens every component by h/2 on each side (h >= 0), merges, and
    // clips to the window.
    IntervalSet dilate(double h) const;

    // Closure of the set complement within [0, window].
    IntervalSet complement() const;

    // Debug serialization: JSON array of [lo, hi] pairs.
    std::string to_json() const;

private:
    double window_ = 0.0;
    std::vector<Interval> parts_;
};

// [0, window] minus the union of the open intervals (y, y + z).
// Entries with z <= 0 cover nothing and are skipped; y must be >= 0.
// An empty cover yields the full window.  The left endpoint 0 always
// survives: open intervals with nonnegative left ends cannot cover it.
IntervalSet complement_of_open_cover(double window,
                                     const std::vector<std::pair<double, double>>& cover);

}  // namespace hermite
