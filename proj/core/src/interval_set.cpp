#include "hermitesim/interval_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace hermite {

namespace {

void require_window(double window) {
    if (!(window > 0.0)) {
        std::ostringstream msg;
        msg << "interval set window must be positive (got " << window << ")";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

IntervalSet::IntervalSet(double window) : window_(window) {
    require_window(window);
}

IntervalSet::IntervalSet(double window, std::vector<Interval> parts) : window_(window) {
    require_window(window);
    for (const Interval& iv : parts) {
        if (!(iv.lo <= iv.hi)) {
            std::ostringstream msg;
            msg << "interval [" << iv.lo << ", " << iv.hi << "] has lo > hi";
            throw std::invalid_argument(msg.str());
        }
    }
    // Clip to the window, dropping parts that fall entirely outside.
    std::vector<Interval> clipped;
    clipped.reserve(parts.size());
    for (const Interval& iv : parts) {
        if (iv.hi < 0.0 || iv.lo > window_) continue;
        clipped.push_back({std::max(iv.lo, 0.0), std::min(iv.hi, window_)});
    }
    std::sort(clipped.begin(), clipped.end(),
              [](const Interval& a, const Interval& b) {
                  return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
              });
    // Merge overlaps and exact touches; strictly separated parts stay.
    for (const Interval& iv : clipped) {
        if (!parts_.empty() && iv.lo <= parts_.back().hi) {
            parts_.back().hi = std::max(parts_.back().hi, iv.hi);
        } else {
            parts_.push_back(iv);
        }
    }
}

IntervalSet IntervalSet::full(double window) {
    return IntervalSet(window, {{0.0, window}});
}

bool IntervalSet::contains(double x) const {
    auto it = std::partition_point(parts_.begin(), parts_.end(),
                                   [x](const Interval& iv) { return iv.hi < x; });
    return it != parts_.end() && it->lo <= x;
}

double IntervalSet::measure() const {
    double sum = 0.0;
    for (const Interval& iv : parts_) sum += iv.hi - iv.lo;
    return sum;
}

double IntervalSet::measure_on(double a, double b) const {
    if (!(0.0 <= a && a <= b && b <= window_)) {
        std::ostringstream msg;
        msg << "measure_on requires 0 <= a <= b <= window (got a=" << a
            << ", b=" << b << ", window=" << window_ << ")";
        throw std::invalid_argument(msg.str());
    }
    auto it = std::partition_point(parts_.begin(), parts_.end(),
                                   [a](const Interval& iv) { return iv.hi < a; });
    double sum = 0.0;
    for (; it != parts_.end() && it->lo <= b; ++it) {
        sum += std::min(it->hi, b) - std::max(it->lo, a);
    }
    return sum;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    if (window_ != other.window_) {
        std::ostringstream msg;
        msg << "intersect requires equal windows (got " << window_ << " and "
            << other.window_ << ")";
        throw std::invalid_argument(msg.str());
    }
    IntervalSet out(window_);
    std::size_t i = 0, j = 0;
    while (i < parts_.size() && j < other.parts_.size()) {
        const Interval& a = parts_[i];
        const Interval& b = other.parts_[j];
        const double lo = std::max(a.lo, b.lo);
        const double hi = std::min(a.hi, b.hi);
        if (lo <= hi) out.parts_.push_back({lo, hi});
        // Advance whichever ends first; ties advance both.
        if (a.hi < b.hi) {
            ++i;
        } else if (b.hi < a.hi) {
            ++j;
        } else {
            ++i;
            ++j;
        }
    }
    return out;
}

IntervalSet IntervalSet::shift_clip(double v) const {
    std::vector<Interval> shifted;
    shifted.reserve(parts_.size());
    for (const Interval& iv : parts_) shifted.push_back({iv.lo + v, iv.hi + v});
    return IntervalSet(window_, std::move(shifted));
}

IntervalSet IntervalSet::dilate(double h) const {
    if (h < 0.0) {
        std::ostringstream msg;
        msg << "dilate requires h >= 0 (got " << h << ")";
        throw std::invalid_argument(msg.str());
    }
    std::vector<Interval> fat;
    fat.reserve(parts_.size());
    for (const Interval& iv : parts_) fat.push_back({iv.lo - h / 2.0, iv.hi + h / 2.0});
    return IntervalSet(window_, std::move(fat));
}

IntervalSet IntervalSet::complement() const {
    std::vector<Interval> gaps;
    double cursor = 0.0;
    for (const Interval& iv : parts_) {
        if (iv.lo > cursor) gaps.push_back({cursor, iv.lo});
        cursor = std::max(cursor, iv.hi);
    }
    if (cursor < window_ || parts_.empty()) gaps.push_back({cursor, window_});
    // Gaps around a zero-length component touch; the constructor merges
    // them back into one piece (closure semantics).
    return IntervalSet(window_, std::move(gaps));
}

std::string IntervalSet::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const Interval& iv : parts_) arr.push_back({iv.lo, iv.hi});
    return arr.dump();
}

IntervalSet complement_of_open_cover(double window,
                                     const std::vector<std::pair<double, double>>& cover) {
    require_window(window);
    std::vector<std::pair<double, double>> opens;
    opens.reserve(cover.size());
    for (const auto& [y, z] : cover) {
        if (y < 0.0) {
            std::ostringstream msg;
            msg << "cover interval left endpoint must be >= 0 (got " << y << ")";
            throw std::invalid_argument(msg.str());
        }
        if (z <= 0.0) continue;  // empty open interval, covers nothing
        if (y >= window) continue;
        opens.emplace_back(y, y + z);
    }
    std::sort(opens.begin(), opens.end());

    std::vector<Interval> gaps;
    double cursor = 0.0;  // leftmost point not yet covered
    for (const auto& [a, b] : opens) {
        if (b <= cursor) continue;
        if (a >= cursor) {
            // [cursor, a] survives: a itself is never interior to any
            // open interval starting at or after it.
            gaps.push_back({cursor, std::min(a, window)});
            if (a >= window) {
                cursor = window + 1.0;  // sentinel: nothing left
                break;
            }
        }
        cursor = b;
    }
    if (cursor <= window) gaps.push_back({cursor, window});
    return IntervalSet(window, std::move(gaps));
}

}  // namespace hermite
