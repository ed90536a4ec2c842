#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wtail {

// Sorted positive observations. Every estimator takes logs of every entry,
// so positivity is enforced at construction; ties are allowed.
class Sample {
public:
    // Sorts a raw data vector ascending.
    static Sample from_data(std::vector<double> values) {
        check_positive(values);
        std::sort(values.begin(), values.end());
        return Sample(std::move(values));
    }

    // Accepts values already sorted ascending (samplers produce these).
    static Sample from_sorted(std::vector<double> values) {
        check_positive(values);
        if (!std::is_sorted(values.begin(), values.end())) {
            throw std::invalid_argument("Sample::from_sorted: values not ascending");
        }
        return Sample(std::move(values));
    }

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    // i-th order statistic X_{i,n}, 1-based.
    double order_statistic(std::size_t i) const {
        if (i < 1 || i > values_.size()) {
            throw std::out_of_range("Sample::order_statistic: index " + std::to_string(i) +
                                    " outside [1, " + std::to_string(values_.size()) + "]");
        }
        return values_[i - 1];
    }

private:
    explicit Sample(std::vector<double> values) : values_(std::move(values)) {}

    static void check_positive(const std::vector<double>& values) {
        if (values.empty()) {
            throw std::invalid_argument("Sample: empty data");
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] > 0.0)) {
                throw std::domain_error("Sample: nonpositive value at position " +
                                        std::to_string(i));
            }
        }
    }

    std::vector<double> values_;
};

}  // namespace wtail
