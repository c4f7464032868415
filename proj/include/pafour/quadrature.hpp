#pragma once

#include <cstddef>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

namespace pafour {

/// Gauss-Legendre nodes and weights on [-1, 1], expanded to the full symmetric set.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

template <unsigned Points>
const GaussRule& gauss_rule()
{
    static const GaussRule rule = [] {
        using gauss = boost::math::quadrature::gauss<double, Points>;
        const auto& x = gauss::abscissa();
        const auto& w = gauss::weights();
        GaussRule r;
        // Boost stores only non-negative abscissas; x[0] == 0 for odd point counts.
        for (std::size_t i = x.size(); i-- > 0;) {
            if (x[i] == 0.0) {
                continue;
            }
            r.nodes.push_back(-x[i]);
            r.weights.push_back(w[i]);
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            r.nodes.push_back(x[i]);
            r.weights.push_back(w[i]);
        }
        return r;
    }();
    return rule;
}

/// Composite rule: `panels` equal panels on [lo, hi], each with the given rule.
template <class F>
double integrate_composite(const GaussRule& rule, double lo, double hi, std::size_t panels, F&& f)
{
    const double width = (hi - lo) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = lo + (static_cast<double>(p) + 0.5) * width;
        const double half = 0.5 * width;
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
        }
        total += half * sum;
    }
    return total;
}

} // namespace pafour
