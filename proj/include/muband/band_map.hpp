#ifndef MUBAND_BAND_MAP_HPP
#define MUBAND_BAND_MAP_HPP

#include "muband/errors.hpp"
#include "muband/numeric.hpp"

namespace muband {

// Affine band coordinate beta: [0, d'] -> [lo, hi] with beta(0) = lo,
// beta(d') = hi. The strict width surplus d' > hi - lo makes the slope
// (the Lipschitz constant) strictly less than one, which is what every
// downstream gradient bound relies on.
class BandCoordinate {
public:
    BandCoordinate(double source_width, double lo, double hi)
        : d_(source_width), lo_(lo), hi_(hi) {
        if (!(hi > lo)) throw DomainError("BandCoordinate: need hi > lo");
        if (!(source_width > hi - lo)) {
            throw WidthError("BandCoordinate: source width " + format_double(source_width) +
                             " must strictly exceed target length " + format_double(hi - lo));
        }
        slope_ = (hi - lo) / d_;
    }

    double source_width() const { return d_; }
    double target_min() const { return lo_; }
    double target_max() const { return hi_; }
    double lipschitz() const { return slope_; }

    double value(double x) const {
        if (!(x >= 0.0 && x <= d_)) {
            throw DomainError("BandCoordinate: x=" + format_double(x) + " outside [0, " +
                              format_double(d_) + "]");
        }
        if (x == d_) return hi_;
        return lo_ + slope_ * x;
    }

private:
    double d_, lo_, hi_, slope_;
};

inline BandCoordinate band_coordinate(double source_width, double lo, double hi) {
    return BandCoordinate(source_width, lo, hi);
}

} // namespace muband

#endif // MUBAND_BAND_MAP_HPP
