#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace morl {

/// A point in d-dimensional objective space (a policy's return or value).
using ValueVector = std::vector<double>;

inline void check_same_dimension(const ValueVector& a, const ValueVector& b, const char* where) {
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

inline bool all_finite(const ValueVector& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline double dot(const ValueVector& a, const ValueVector& b) {
    check_same_dimension(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline ValueVector operator+(ValueVector a, const ValueVector& b) {
    check_same_dimension(a, b, "operator+");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline ValueVector operator*(double c, ValueVector v) {
    for (double& x : v) x *= c;
    return v;
}

inline double linf_distance(const ValueVector& a, const ValueVector& b) {
    check_same_dimension(a, b, "linf_distance");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// Neumaier compensated accumulator; keeps long means honest to ~1 ulp.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Component-wise compensated mean of a collection of equal-length vectors.
inline ValueVector compensated_mean(const std::vector<ValueVector>& vs) {
    if (vs.empty()) throw std::invalid_argument("compensated_mean: empty input");
    const std::size_t d = vs.front().size();
    std::vector<CompensatedSum> acc(d);
    for (const auto& v : vs) {
        check_same_dimension(v, vs.front(), "compensated_mean");
        for (std::size_t i = 0; i < d; ++i) acc[i].add(v[i]);
    }
    ValueVector mean(d);
    for (std::size_t i = 0; i < d; ++i) mean[i] = acc[i].value() / static_cast<double>(vs.size());
    return mean;
}

} // namespace morl
