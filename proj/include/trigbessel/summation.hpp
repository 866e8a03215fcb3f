#pragma once

#include <cmath>

namespace trigbessel {

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double v)
    {
        double t = sum_ + v;
        if (std::fabs(sum_) >= std::fabs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(double v)
    {
        add(v);
        return *this;
    }
    CompensatedSum& operator+=(const CompensatedSum& o)
    {
        add(o.sum_);
        add(o.comp_);
        return *this;
    }
    [[nodiscard]] double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace trigbessel
