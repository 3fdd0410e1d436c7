// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/error.hpp"
#include "authorrag/evaluation.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

namespace authorrag {

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0) || std::isnan(t)) {
        throw PreconditionError("Student t needs df > 0 and a finite statistic");
    }
    if (std::isinf(t)) {
        return 0.0;
    }
    const boost::math::students_t dist(df);
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t))));
}

TTestResult paired_t(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw PreconditionError("paired t-test on lists of length " + std::to_string(a.size()) + " and " +
                                std::to_string(b.size()));
    }
    const auto n = a.size();
    if (n < 2) {
        throw PreconditionError("paired t-test needs at least two pairs");
    }
    std::vector<double> d(n);
    bool all_equal = true;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = a[i] - b[i];
        all_equal = all_equal && d[i] == d[0];
    }
    if (all_equal) {
        throw DegenerateTestError("no variance: every paired difference equals " + std::to_string(d[0]));
    }
    const double mean = mean_of(d);
    double ss = 0.0;
    for (const double x : d) {
        ss += (x - mean) * (x - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) {
        throw DegenerateTestError("no variance in the paired differences");
    }
    TTestResult r;
    r.mean_difference = mean;
    r.df = static_cast<double>(n - 1);
    r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

double paired_t_test(const std::vector<double>& a, const std::vector<double>& b) { return paired_t(a, b).p; }

} // namespace authorrag
